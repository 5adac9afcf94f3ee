#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "viscsgn/error.hpp"
#include "viscsgn/grids.hpp"
#include "viscsgn/io.hpp"

using namespace viscsgn;
using std::numbers::pi;

namespace {

double ddx_sine_error(int nx) {
    const Grid1D g(nx, 0.0, 2.0 * pi);
    Field f(nx);
    for (int i = 0; i < nx; ++i) f[i] = std::sin(g.x(i));
    const Field d = ddx(f, g);
    double err = 0.0;
    for (int i = 0; i < nx; ++i) err = std::max(err, std::abs(d[i] - std::cos(g.x(i))));
    return err;
}

}  // namespace

TEST_SUITE("grids") {

TEST_CASE("grid spacing") {
    const Grid1D p(10, 0.0, 1.0, true);
    CHECK(p.dx() == doctest::Approx(0.1));
    const Grid1D b(11, 0.0, 1.0, false);
    CHECK(b.dx() == doctest::Approx(0.1));
    CHECK(b.x(10) == doctest::Approx(1.0));
    const Field x = p.nodes();
    for (std::size_t i = 1; i < x.size(); ++i) CHECK(x[i] > x[i - 1]);
    CHECK_THROWS_AS(Grid1D(7, 0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(Grid1D(16, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("layer grid end points and stretching") {
    const Grid1D base(16, 0.0, 1.0);
    const GridBL u(base, 11, 10.0);
    CHECK(u.gamma(0) == 0.0);
    CHECK(u.gamma(10) == 10.0);
    CHECK(u.dgamma(3) == doctest::Approx(1.0));

    const GridBL s(base, 40, 10.0, Stretching::geometric, 1.1);
    CHECK(s.gamma(0) == 0.0);
    CHECK(s.gamma_inf() == 10.0);
    for (int j = 0; j + 1 < s.ngamma(); ++j) CHECK(s.dgamma(j) > 0.0);
    CHECK(s.dgamma(1) / s.dgamma(0) == doctest::Approx(1.1));
    CHECK(s.dgamma(0) < u.dgamma(0));

    CHECK_THROWS_AS(GridBL(base, 40, 10.0, Stretching::geometric, 1.3), InvalidArgument);
    CHECK_THROWS_AS(GridBL(base, 40, 10.0, Stretching::geometric, 0.9), InvalidArgument);
    CHECK_THROWS_AS(GridBL(base, 2, 10.0), InvalidArgument);
    CHECK_THROWS_AS(GridBL(base, 10, 0.0), InvalidArgument);
}

TEST_CASE("ddx of sine and second-order convergence") {
    const double e256 = ddx_sine_error(256);
    CHECK(e256 < 1e-3);
    const double ratio = ddx_sine_error(128) / e256;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("ddx annihilates constants and is exact on ramps") {
    const Grid1D p(32, 0.0, 3.0);
    const Field c(32, 2.5);
    CHECK(max_abs(ddx(c, p)) == 0.0);

    const Grid1D b(33, -1.0, 2.0, false);
    Field ramp(33);
    for (int i = 0; i < 33; ++i) ramp[i] = 0.7 * b.x(i) - 0.2;
    for (double d : ddx(ramp, b)) CHECK(d == doctest::Approx(0.7).epsilon(1e-13));
    CHECK_THROWS_AS(ddx(Field(5), p), InvalidArgument);
}

TEST_CASE("fourth-order ddx") {
    auto err = [](int nx) {
        const Grid1D g(nx, 0.0, 2.0 * pi);
        Field f(nx);
        for (int i = 0; i < nx; ++i) f[i] = std::sin(3.0 * g.x(i));
        const Field d = ddx4(f, g);
        double e = 0.0;
        for (int i = 0; i < nx; ++i) e = std::max(e, std::abs(d[i] - 3.0 * std::cos(3.0 * g.x(i))));
        return e;
    };
    const double r = err(64) / err(128);
    CHECK(r > 14.0);
    CHECK(r < 18.0);
    CHECK_THROWS_AS(ddx4(Field(16), Grid1D(16, 0.0, 1.0, false)), InvalidArgument);
}

TEST_CASE("integrate_gamma") {
    const Grid1D base(8, 0.0, 1.0);
    const GridBL g(base, 101, 10.0);
    Field lin(101), one(101, 1.0);
    for (int j = 0; j < 101; ++j) lin[j] = g.gamma(j);
    CHECK(integrate_gamma(lin, g, 10.0) == doctest::Approx(50.0).epsilon(1e-14));
    CHECK(integrate_gamma(one, g, 3.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(integrate_gamma(one, g, 3.05) == doctest::Approx(3.05).epsilon(1e-14));
    CHECK(integrate_gamma(one, g, 0.0) == 0.0);
    CHECK_THROWS_AS(integrate_gamma(one, g, 10.5), InvalidArgument);
    CHECK_THROWS_AS(integrate_gamma(one, g, -0.1), InvalidArgument);

    const GridBL s(base, 200, pi);
    Field sn(200);
    for (int j = 0; j < 200; ++j) sn[j] = std::sin(s.gamma(j));
    CHECK(integrate_gamma(sn, s, pi) == doctest::Approx(2.0).epsilon(1e-4 / 2.0));
}

TEST_CASE("property: integrate_gamma is additive") {
    const Grid1D base(8, 0.0, 1.0);
    const GridBL g(base, 60, 7.0, Stretching::geometric, 1.05);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Field col(60);
    for (double& v : col) v = U(rng);
    Field cum(60);
    cumulative_gamma(col, g, cum);
    for (int j = 0; j < 60; ++j) CHECK(integrate_gamma(col, g, g.gamma(j)) == doctest::Approx(cum[j]).epsilon(1e-12));
    for (int trial = 0; trial < 20; ++trial) {
        const double a = 3.5 * (U(rng) + 1.0);
        const double b = std::min(7.0, a + 1.7);
        const double split = integrate_gamma(col, g, b) - integrate_gamma(col, g, a);
        CHECK(std::abs(integrate_gamma(col, g, a) + split - integrate_gamma(col, g, b)) < 1e-13);
    }
}

TEST_CASE("depth") {
    const RegimeParams p(0.1, 0.1, 1.0, 10.0);
    BulkState s{Field(16, 0.0), Field(16, 0.0), 0.0};
    for (double h : depth(s, p)) CHECK(h == doctest::Approx(0.9));
    s.eta[3] = 1.0;
    CHECK(depth(s, p)[3] == doctest::Approx(1.0));
    BulkState dry{Field(16, -10.0), Field(16, 0.0), 0.0};
    CHECK_THROWS_AS(depth(dry, p), DryStateError);
}

TEST_CASE("property: depth is affine in eta") {
    const RegimeParams p(0.3, 0.1, 1.0, 5.0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    BulkState a{Field(20), Field(20, 0.0), 0.0}, b = a, c = a;
    for (int i = 0; i < 20; ++i) {
        a.eta[i] = U(rng);
        b.eta[i] = U(rng);
        c.eta[i] = 0.5 * a.eta[i] + 0.5 * b.eta[i];
    }
    const Field ha = depth(a, p), hb = depth(b, p), hc = depth(c, p);
    for (int i = 0; i < 20; ++i) CHECK(hc[i] == doctest::Approx(0.5 * ha[i] + 0.5 * hb[i]).epsilon(1e-15));
}

TEST_CASE("snapshot csv formats") {
    const auto dir = std::filesystem::temp_directory_path() / "viscsgn_grids_test";
    std::filesystem::create_directories(dir);
    const Grid1D g(8, 0.0, 1.0);
    Field f(8);
    for (int i = 0; i < 8; ++i) f[i] = 0.1 * i;
    write_field_csv(dir / "f.csv", g, f);
    std::ifstream in(dir / "f.csv");
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "x,value");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 8);

    const GridBL gb(g, 5, 2.0);
    BLField u(8, 5);
    u(2, 3) = 1.0 / 3.0;
    write_bl_csv(dir / "u.csv", gb, u);
    std::ifstream ub(dir / "u.csv");
    std::vector<std::string> lines;
    while (std::getline(ub, line)) lines.push_back(line);
    REQUIRE(lines.size() == 6);
    CHECK(std::count(lines[0].begin(), lines[0].end(), ',') == 8);
    CHECK(lines[4].find(format_number(1.0 / 3.0)) != std::string::npos);
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK_FALSE(std::filesystem::exists(dir / "u.csv.tmp"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("atomic file leaves nothing behind without commit") {
    const auto dir = std::filesystem::temp_directory_path() / "viscsgn_atomic_test";
    std::filesystem::create_directories(dir);
    {
        AtomicFile f(dir / "a.txt");
        f.stream() << "partial";
    }
    CHECK_FALSE(std::filesystem::exists(dir / "a.txt"));
    CHECK(std::filesystem::is_empty(dir));
    write_text_file(dir / "b.txt", "done\n");
    CHECK(std::filesystem::exists(dir / "b.txt"));
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
