#include "doctest.h"

#include <cmath>
#include <numbers>

#include "viscsgn/coupling.hpp"
#include "viscsgn/error.hpp"

using namespace viscsgn;
using std::numbers::pi;

namespace {

CoupledSolver make_solver(int nx, int ng, double gamma_inf, double length = 2.0 * pi,
                          Splitting split = Splitting::sequential, double eps = 0.1) {
    const Grid1D g(nx, 0.0, length);
    const RegimeParams p(eps, 0.1, 1.0, gamma_inf);
    std::optional<BoundaryLayer> layer;
    if (gamma_inf > 0.0) layer.emplace(GridBL(g, ng, gamma_inf), p);
    return CoupledSolver(BulkSolver(g, p), std::move(layer), split);
}

BulkState wave(const Grid1D& g, double a) {
    BulkState s{Field(g.nx()), Field(g.nx()), 0.0};
    for (int i = 0; i < g.nx(); ++i) {
        const double x = 2.0 * pi * g.x(i) / g.length();
        s.eta[i] = a * std::cos(x);
        s.ubar[i] = 0.1 * a * std::cos(x) + 0.02 * std::sin(2.0 * x);
    }
    return s;
}

}  // namespace

TEST_SUITE("coupling") {

TEST_CASE("assemble_coupling examples") {
    const int nx = 256, ng = 33;
    const CoupledSolver c = make_solver(nx, ng, 8.0);
    const BoundaryLayer& layer = *c.layer();
    const Grid1D& g = c.bulk().grid();

    BulkState b{Field(nx, 0.0), Field(nx, 0.4), 0.0};
    const BLState zero = layer.initial_state(LayerInit::zero, b.ubar);
    const CouplingData d0 = assemble_coupling(b, zero, layer, 0.0);
    for (int i = 0; i < nx; ++i) {
        CHECK(d0.slip_deficit[i] == 0.4);
        CHECK(d0.mass_flux_top[i] == 0.0);
    }

    for (int i = 0; i < nx; ++i) b.ubar[i] = std::sin(g.x(i));
    const BLState lin = layer.initial_state(LayerInit::linear, b.ubar);
    const CouplingData d1 = assemble_coupling(b, lin, layer, 0.0);
    double err = 0.0;
    for (int i = 0; i < nx; ++i) {
        CHECK(d1.slip_deficit[i] == 0.0);
        err = std::max(err, std::abs(d1.mass_flux_top[i] + 0.01 * 4.0 * std::cos(g.x(i))));
    }
    CHECK(err < 1e-5);

    BLState late = lin;
    late.time = 0.3;
    CHECK_THROWS_AS(assemble_coupling(b, late, layer, 0.1), Error);
}

TEST_CASE("solver validation") {
    const Grid1D g(32, 0.0, 1.0);
    const RegimeParams p(0.1, 0.1, 1.0, 10.0);
    const RegimeParams q(0.2, 0.1, 1.0, 10.0);
    CHECK_THROWS_AS(CoupledSolver(BulkSolver(g, p), BoundaryLayer(GridBL(Grid1D(32, 0.0, 2.0), 8, 10.0), p)),
                    InvalidArgument);
    CHECK_THROWS_AS(CoupledSolver(BulkSolver(g, p), BoundaryLayer(GridBL(g, 8, 10.0), q)), InvalidArgument);
    const CoupledSolver c(BulkSolver(g, p), BoundaryLayer(GridBL(g, 8, 10.0), p));
    CoupledState s = c.initial_state(BulkState{Field(32, 0.0), Field(32, 0.0), 0.0}, LayerInit::linear);
    s.layer.reset();
    CHECK_THROWS_AS(c.step(s, 0.01), InvalidArgument);
}

TEST_CASE("rest is a global fixed point") {
    for (Splitting sp : {Splitting::sequential, Splitting::strang}) {
        const CoupledSolver c = make_solver(32, 16, 10.0, 2.0 * pi, sp);
        CoupledState s = c.initial_state(BulkState{Field(32, 0.0), Field(32, 0.0), 0.0}, LayerInit::linear);
        for (int n = 0; n < 20; ++n) s = c.step(s, 0.05);
        CHECK(max_abs(s.bulk.eta) == 0.0);
        CHECK(max_abs(s.bulk.ubar) == 0.0);
        CHECK(max_abs(s.layer->u.data()) == 0.0);
        CHECK(s.layer->time == doctest::Approx(s.bulk.time));
    }
}

TEST_CASE("without a layer the coupled stepper is the bulk stepper") {
    const int nx = 64;
    const CoupledSolver c = make_solver(nx, 0, 0.0, 6.0);
    const BulkSolver& b = c.bulk();
    CoupledState s = c.initial_state(wave(b.grid(), 0.5), LayerInit::linear);
    BulkState r = s.bulk;
    const double dt = b.stable_dt(r);
    for (int n = 0; n < 100; ++n) {
        CouplingData d;
        s = c.step(s, dt, &d);
        r = b.step(r, CouplingData::zero(nx), dt);
        CHECK(max_abs(d.mass_flux_top) == 0.0);
    }
    CHECK(s.bulk.eta == r.eta);
    CHECK(s.bulk.ubar == r.ubar);
    CHECK_FALSE(s.layer.has_value());
}

TEST_CASE("property: combined mass balance and zero Dirichlet slip") {
    const int nx = 64, ng = 24;
    for (Splitting sp : {Splitting::sequential, Splitting::strang}) {
        const CoupledSolver c = make_solver(nx, ng, 10.0, 6.0, sp);
        CoupledState s = c.initial_state(wave(c.bulk().grid(), 0.5), LayerInit::linear);
        const double dt = 0.5 * c.stable_dt(s);
        for (int n = 0; n < 40; ++n) {
            CouplingData d;
            const double m0 = sum(s.bulk.eta);
            s = c.step(s, dt, &d);
            CHECK(std::abs(d.mass_balance_residual) < 1e-10);
            const double dm = 0.1 * (sum(s.bulk.eta) - m0) * c.bulk().grid().dx();
            CHECK(std::abs(dm - dt * sum(d.mass_flux_top) * c.bulk().grid().dx()) < 1e-10 * dt);
            if (sp == Splitting::sequential) CHECK(max_abs(d.slip_deficit) == 0.0);
        }
    }
}

TEST_CASE("stable_dt is the smaller of the two") {
    const CoupledSolver c = make_solver(64, 24, 10.0, 6.0);
    const CoupledState s = c.initial_state(wave(c.bulk().grid(), 0.5), LayerInit::linear);
    CHECK(c.stable_dt(s) == std::min(c.bulk().stable_dt(s.bulk), c.layer()->stable_dt(*s.layer)));
}

TEST_CASE("peak_value") {
    Field f(16);
    for (int i = 0; i < 16; ++i) f[i] = 2.0 - (i - 7.3) * (i - 7.3);
    CHECK(peak_value(f) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(peak_value(Field(2)), InvalidArgument);
}

TEST_CASE("classical solitary wave parameters") {
    const SolitaryWave w = classical_solitary(0.2, 0.1);
    CHECK(w.kappa == doctest::Approx(std::sqrt(0.6) / (0.2 * std::sqrt(1.2))));
    CHECK(w.speed == doctest::Approx(std::sqrt(1.2)));
    CHECK_THROWS_AS(classical_solitary(0.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(classical_solitary(0.2, 0.0), InvalidArgument);
}

TEST_CASE("balanced solitary wave") {
    const double a = 0.2, mu = 0.1, eps = 0.1;
    const SolitaryWave w = classical_solitary(a, mu);
    const double L = 14.0 / w.kappa;
    const Grid1D g(128, -0.5 * L, 0.5 * L);

    SUBCASE("without a layer it is close to the classical wave") {
        const RegimeParams p(eps, mu, 1.0, 0.0);
        const CoupledSolver c(BulkSolver(g, p), std::nullopt);
        const CoupledState s = balanced_solitary(c, a, 0.0);
        const BulkState ref = solitary_state(g, p, a, 0.0);
        double err = 0.0;
        for (int i = 0; i < 128; ++i) err = std::max(err, eps * std::abs(s.bulk.eta[i] - ref.eta[i]));
        CHECK(err < 5e-3);
    }
    SUBCASE("with a layer the discrete traveling-wave residual vanishes") {
        const RegimeParams p(eps, mu, 1.0, 10.0);
        const CoupledSolver c(BulkSolver(g, p), BoundaryLayer(GridBL(g, 32, 10.0), p));
        const CoupledState s = balanced_solitary(c, a, 0.0);
        CHECK(eps * peak_value(s.bulk.eta) == doctest::Approx(a).epsilon(0.05));
        REQUIRE(s.layer.has_value());
        for (int i = 0; i < 128; ++i) {
            CHECK(s.layer->u(i, 0) == 0.0);
            CHECK(s.layer->u(i, 31) == s.bulk.ubar[i]);
        }
        // steady mass balance: ubar (H + layer flux depth) = c eps eta
        Field plug(32, 1.0);
        plug[0] = 0.0;
        const double dl = p.mu2() * integrate_gamma(plug, c.layer()->grid(), 10.0);
        const Field h = c.bulk().depth(s.bulk);
        for (int i = 0; i < 128; ++i) {
            CHECK(s.bulk.ubar[i] * (h[i] + dl) == doctest::Approx(w.speed * eps * s.bulk.eta[i]).epsilon(1e-12));
        }
    }
}

}  // TEST_SUITE
