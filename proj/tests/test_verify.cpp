#include <cmath>
#include <numbers>

#include "doctest.h"
#include "viscsgn/error.hpp"
#include "viscsgn/verify/quadrature.hpp"
#include "viscsgn/verify/studies.hpp"

using namespace viscsgn;
using namespace viscsgn::verify;

namespace {

FieldFactory ansatz_factory(AnsatzSpec spec = {}) {
    return [spec](const RegimeParams& p) { return ansatz_flow(p, spec); };
}

}  // namespace

TEST_SUITE("verify") {
    TEST_CASE("jet derivatives of a composite match hand differentiation") {
        const double x0 = 0.7, y0 = -0.4, t0 = 1.3;
        const Jet x = Jet::variable(x0, X), y = Jet::variable(y0, Y), t = Jet::variable(t0, T);
        const Jet f = sin(x * y) + exp(t) / (1.0 + x * x);
        const double q = 1.0 + x0 * x0;
        CHECK(f.value() == doctest::Approx(std::sin(x0 * y0) + std::exp(t0) / q).epsilon(1e-14));
        CHECK(f.dx() == doctest::Approx(y0 * std::cos(x0 * y0) - 2 * x0 * std::exp(t0) / (q * q)).epsilon(1e-14));
        CHECK(f.dy() == doctest::Approx(x0 * std::cos(x0 * y0)).epsilon(1e-14));
        CHECK(f.dxy() == doctest::Approx(std::cos(x0 * y0) - x0 * y0 * std::sin(x0 * y0)).epsilon(1e-14));
        CHECK(f.dxt() == doctest::Approx(-2 * x0 * std::exp(t0) / (q * q)).epsilon(1e-14));
        CHECK(f.dxx() ==
              doctest::Approx(-y0 * y0 * std::sin(x0 * y0) + std::exp(t0) * (6 * x0 * x0 - 2) / (q * q * q))
                  .epsilon(1e-13));
        CHECK(f.d2(Y, X) == f.dxy());
    }

    TEST_CASE("Gauss-Legendre is exact to degree 2n-1") {
        for (int n : {1, 3, 8, 16}) {
            const GaussRule& rule = gauss_legendre(n);
            double w = 0.0;
            for (double v : rule.weights) w += v;
            CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
            const int deg = 2 * n - 1;
            const double got = integrate([&](double s) { return std::pow(s, deg - 1) * (s + 1.0); }, 0.0, 1.0, n);
            CHECK(got == doctest::Approx(1.0 / (deg + 1) + 1.0 / deg).epsilon(1e-13));
        }
        CHECK_THROWS_AS(gauss_legendre(0), InvalidArgument);
        // Reversed limits give the signed integral.
        CHECK(integrate([](double s) { return s; }, 1.0, 0.0, 4) == doctest::Approx(-0.5));
    }

    TEST_CASE("eighth-order differences") {
        auto f = [](double z) { return std::sin(z); };
        CHECK(std::abs(fd8(f, 0.4, 1e-2) - std::cos(0.4)) < 1e-12);
        CHECK(std::abs(fd8_second(f, 0.4, 1e-2) + std::sin(0.4)) < 1e-9);
        const double e1 = std::abs(fd8(f, 0.4, 0.4) - std::cos(0.4));
        const double e2 = std::abs(fd8(f, 0.4, 0.2) - std::cos(0.4));
        CHECK(std::log2(e1 / e2) == doctest::Approx(8.0).epsilon(0.05));
    }

    TEST_CASE("self-consistency gate") {
        const RegimeParams p(0.1, 0.1, 1.0, 1.0);
        CHECK(self_consistency_gate(ansatz_flow(p), p).passed);
        CHECK(self_consistency_gate(random_field(7), p).passed);
        CHECK(self_consistency_gate(streamfunction_field(), p).passed);

        ManufacturedField bad = rest_field();
        bad.u = [](const Jet& x, const Jet&, const Jet&) { return Jet::variable(std::sin(x.value()), X); };
        const GateReport g = self_consistency_gate(bad, p);
        CHECK_FALSE(g.passed);
        CHECK(g.worst == "u.dx");
        CHECK_THROWS_AS(ns_residual(bad, p), InvalidArgument);
    }

    TEST_CASE("ns_residual fixtures") {
        const RegimeParams p(0.1, 0.1, 1.0, 1.0);
        const NSResidual rest = ns_residual(rest_field(), p);
        for (double v : rest.values()) CHECK(v == 0.0);

        const NSResidual psi = ns_residual(streamfunction_field(), p);
        CHECK(psi.continuity < 1e-13);
        CHECK(psi.no_slip < 1e-15);
        CHECK(psi.momentum_x > 1e-3);

        const NSResidual a = ns_residual(random_field(42), p);
        const NSResidual b = ns_residual(random_field(42), p);
        CHECK(a.values() == b.values());
        for (double v : a.values()) CHECK(v > 0.0);
        CHECK(ns_residual(random_field(43), p).values() != a.values());

        ManufacturedField partial = rest_field();
        partial.p = nullptr;
        CHECK_THROWS_AS(ns_residual(partial, p), InvalidArgument);
    }

    TEST_CASE("equation tags") {
        for (const char* tag : {"eq8", "eq10", "eq11", "eq14", "eq15", "eq20", "eq21", "eq14_vs_15"}) {
            CHECK(equation_tag(parse_equation(tag)) == tag);
        }
        CHECK(claimed_order(Equation::eq8) == 6);
        CHECK(claimed_order(Equation::eq15) == 4);
        CHECK(claimed_order(Equation::eq14) == 0);
        try {
            parse_equation("eq99");
            FAIL("expected throw");
        } catch (const InvalidArgument& e) {
            CHECK(e.field() == "equation");
        }
    }

    TEST_CASE("model residuals vanish on the rest state") {
        const RegimeParams p(0.1, 0.1, 1.0, 1.0);
        for (Equation eq : {Equation::eq8, Equation::eq10, Equation::eq11, Equation::eq14, Equation::eq15,
                            Equation::eq20, Equation::eq21}) {
            CHECK(model_residual(eq, rest_field(), p).value == 0.0);
        }
    }

    TEST_CASE("the literal pressure and depth-integrated forms are identities") {
        const RegimeParams p(0.1, 0.2, 1.0, 1.0);
        Probes probes;
        probes.nx = 4;
        probes.ny = 3;
        // A field far from the ansatz: the identities do not depend on it.
        const ManufacturedField f = random_field(3);
        CHECK(model_residual(Equation::eq11, f, p, probes).value < 1e-9);
        CHECK(model_residual(Equation::eq14, f, p, probes).value < 1e-9);
        CHECK(model_residual(Equation::eq14_vs_15, f, p, probes).value > 1e-4);
    }

    TEST_CASE("model residuals need the right fields") {
        const RegimeParams p(0.1, 0.1, 1.0, 1.0);
        ManufacturedField f = ansatz_flow(p);
        f.layer_u = nullptr;
        CHECK_THROWS_AS(model_residual(Equation::eq21, f, p), InvalidArgument);
        CHECK_THROWS_AS(model_residual(Equation::eq21, ansatz_flow(p), p.without_layer()), InvalidArgument);
    }

    TEST_CASE("loglog slope of a power law") {
        CHECK(loglog_slope({0.2, 0.1, 0.05}, {3 * 0.0016, 3 * 0.0001, 3 * 0.00000625}) ==
              doctest::Approx(4.0).epsilon(1e-12));
    }

    TEST_CASE("order study: ansatz reduction at slope four") {
        const RegimeParams base(0.1, 0.1, 1.0, 1.0);
        const OrderStudyReport r = order_study(Equation::eq14_vs_15, ansatz_factory(), {0.2, 0.1, 0.05}, base);
        CHECK(r.pass);
        CHECK(r.slope > 3.7);
        REQUIRE(r.literal_slope);
        CHECK(*r.literal_slope < 2.3);
        CHECK(r.residuals == order_study(Equation::eq14_vs_15, ansatz_factory(), {0.2, 0.1, 0.05}, base).residuals);

        const nlohmann::json j = to_json(r);
        for (const char* key : {"equation", "mu_values", "residuals", "slope", "pass"}) CHECK(j.contains(key));
        CHECK(j["equation"] == "eq14_vs_15");
        const std::string csv = to_csv(r);
        CHECK(csv.rfind("mu,residual,literal_residual\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    }

    TEST_CASE("order study verdicts") {
        const RegimeParams base(0.1, 0.1, 1.0, 1.0);
        auto rest = [](const RegimeParams&) { return rest_field(); };
        const OrderStudyReport r = order_study(Equation::eq15, rest, {0.2, 0.1, 0.05}, base);
        CHECK(r.exact);
        CHECK(r.pass);

        AnsatzSpec slip;
        slip.wall_slip = 0.5;
        const OrderStudyReport bad = order_study(Equation::eq21, ansatz_factory(slip), {0.2, 0.1, 0.05}, base);
        CHECK_FALSE(bad.pass);
        CHECK(bad.diagnostic.find("does not decay") != std::string::npos);

        CHECK_THROWS_AS(order_study(Equation::eq15, rest, {0.2, 0.1}, base), InvalidArgument);
        CHECK_THROWS_AS(order_study(Equation::eq15, rest, {0.1, 0.2, 0.05}, base), InvalidArgument);
    }

    TEST_CASE("Lemma 1 with the hypothesis satisfied") {
        const RegimeParams p(0.1, 0.1, 1.0, 1.0);
        auto eta = [](const Jet& x, const Jet&) { return cos(x) + 0.3 * sin(2.0 * x); };
        auto F = [&](const Jet& x, const Jet& y, const Jet& t) {
            return (y - 0.1 * eta(x, t)) * sin(x) * (1.0 + y * y);
        };
        const double L = 2.0 * std::numbers::pi;
        const LemmaReport fine = lemma1_check(F, eta, Grid1D(1024, 0.0, L), p);
        CHECK(fine.hypothesis_holds);
        CHECK(fine.tag() == "hypothesis-satisfied");
        CHECK(fine.residual < 1e-8);
        const double r1 = lemma1_check(F, eta, Grid1D(32, 0.0, L), p).residual;
        const double r2 = lemma1_check(F, eta, Grid1D(64, 0.0, L), p).residual;
        CHECK(std::log2(r1 / r2) == doctest::Approx(4.0).epsilon(0.1));
    }

    TEST_CASE("Lemma 1 with the hypothesis violated") {
        const RegimeParams p(0.1, 0.1, 1.0, 1.0);
        auto eta = [](const Jet& x, const Jet&) { return cos(x); };
        auto one = [](const Jet&, const Jet&, const Jet&) { return Jet(1.0); };
        const double L = 2.0 * std::numbers::pi;
        double prev = 0.0;
        for (int nx : {64, 128, 256, 512, 1024}) {
            const LemmaReport r = lemma1_check(one, eta, Grid1D(nx, 0.0, L), p);
            CHECK_FALSE(r.hypothesis_holds);
            CHECK(r.tag() == "hypothesis-violated");
            CHECK(r.residual >= prev);
            prev = r.residual;
        }
        // max |d/dx (eps eta)| = eps
        CHECK(prev == doctest::Approx(0.1).epsilon(1e-6));

        auto zero = [](const Jet&, const Jet&, const Jet&) { return Jet(0.0); };
        CHECK(lemma1_check(zero, eta, Grid1D(64, 0.0, L), p).residual == 0.0);
    }

    TEST_CASE("spectral shift") {
        const int n = 32;
        const double L = 2.0 * std::numbers::pi;
        Field f(n);
        for (int i = 0; i < n; ++i) f[i] = std::sin(3.0 * L * i / n) + 0.5 * std::cos(L * i / n);
        const Field g = spectral_shift(f, L, 0.37);
        for (int i = 0; i < n; ++i) {
            const double x = L * i / n - 0.37;
            CHECK(g[i] == doctest::Approx(std::sin(3.0 * x) + 0.5 * std::cos(x)).epsilon(1e-12));
        }
    }

    TEST_CASE("Galilean check: identity boost and mutation") {
        const RegimeParams p(0.1, 0.1, 1.0, 0.0);
        const SolitaryWave w = classical_solitary(0.2, p.mu());
        const double L = 14.0 / w.kappa;
        const Grid1D g(128, -L / 2, L / 2);
        const BulkState s0 = solitary_state(g, p, 0.2, 0.0);
        BulkOptions opt;
        opt.stencil_order = 4;
        opt.time_scheme = TimeScheme::rk4;
        const BulkSolver solver(g, p, opt);
        CHECK(galilean_check(solver, s0, 0.0, 0.2).discrepancy == 0.0);
        const double good = galilean_check(solver, s0, 0.5, 0.5).discrepancy;
        opt.variant = BracketVariant::ubar_ux;
        const double bad = galilean_check(BulkSolver(g, p, opt), s0, 0.5, 0.5).discrepancy;
        CHECK(bad > 20.0 * good);
        CHECK_THROWS_AS(galilean_check(BulkSolver(g, p.with_mu(0.1).without_layer(), opt), s0, 0.5, -1.0),
                        InvalidArgument);
    }

    TEST_CASE("conservation audit") {
        const RegimeParams p(0.1, 0.1, 1.0, 10.0);
        const SolitaryWave w = classical_solitary(0.2, p.mu());
        const double L = 28.0 / w.kappa;
        const Grid1D g(128, -L / 2, L / 2);

        const CoupledSolver inviscid(BulkSolver(g, p.without_layer()), std::nullopt);
        const CoupledSolver coupled(BulkSolver(g, p), BoundaryLayer(GridBL(g, 32, 10.0), p));
        for (const CoupledSolver* solver : {&inviscid, &coupled}) {
            CoupledState s = solver->initial_state(solitary_state(g, p, 0.2, 0.0), LayerInit::plug);
            RunRecorder rec(*solver);
            rec.sample(s);
            const double dt = 0.5 * solver->stable_dt(s);
            for (int k = 0; k < 40; ++k) {
                CouplingData cd;
                s = solver->step(s, dt, &cd);
                rec.observe(cd, dt);
                if (k % 10 == 9) rec.sample(s);
            }
            const DiagnosticsRecord d = conservation_audit(rec.log());
            CHECK(d.time.size() == 5);
            CHECK(rec.log().coupled == (solver == &coupled));
            CHECK(d.mass_drift_rate < (solver == &coupled ? 1e-8 : 1e-10));
            CHECK(d.max_mass_residual < 1e-8);
            CHECK_FALSE(d.mass_flag);
        }
        CHECK_THROWS_AS(conservation_audit(RunLog{}), InvalidArgument);
    }
}
