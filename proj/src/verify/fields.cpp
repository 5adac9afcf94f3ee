#include "viscsgn/verify/fields.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace viscsgn::verify {

namespace {

double fd4(const std::function<double(double)>& f, double z, double h) {
    return (8.0 * (f(z + h) - f(z - h)) - (f(z + 2 * h) - f(z - 2 * h))) / (12.0 * h);
}

Jet seed(double v, Var s) { return Jet::variable(v, s); }

struct Checker {
    GateReport report;
    double tolerance;

    void compare(double exact, double approx, const std::string& label) {
        const double err = std::abs(exact - approx) / std::max(1.0, std::abs(exact));
        if (err > report.max_error) {
            report.max_error = err;
            report.worst = label;
        }
        if (err > tolerance) report.passed = false;
    }

    // First derivatives against differences of values, second derivatives
    // against differences of the jet's first derivatives.
    void check3(const Field3& f, const std::string& name, double x, double y, double t) {
        if (!f) return;
        const double h = 1e-3;
        const std::array<double, 3> at{x, y, t};
        const Jet j = f(seed(x, X), seed(y, Y), seed(t, T));
        static const char* names = "xyt";
        for (int i = 0; i < 3; ++i) {
            auto along = [&](int comp) {
                return [&, comp](double z) {
                    std::array<double, 3> q = at;
                    q[i] = z;
                    const Jet k = f(seed(q[0], X), seed(q[1], Y), seed(q[2], T));
                    return comp < 0 ? k.value() : k.d(comp);
                };
            };
            compare(j.d(i), fd4(along(-1), at[i], h), name + ".d" + names[i]);
            for (int k = 0; k < 3; ++k) {
                compare(j.d2(k, i), fd4(along(k), at[i], h),
                        name + ".d" + names[k] + names[i]);
            }
        }
    }

    void check2(const Field2& f, const std::string& name, double x, double t) {
        if (!f) return;
        const double h = 1e-3;
        const Jet j = f(seed(x, X), seed(t, T));
        auto in_x = [&](int comp) {
            return [&, comp](double z) {
                const Jet k = f(seed(z, X), seed(t, T));
                return comp < 0 ? k.value() : k.d(comp);
            };
        };
        auto in_t = [&](int comp) {
            return [&, comp](double z) {
                const Jet k = f(seed(x, X), seed(z, T));
                return comp < 0 ? k.value() : k.d(comp);
            };
        };
        compare(j.dx(), fd4(in_x(-1), x, h), name + ".dx");
        compare(j.dt(), fd4(in_t(-1), t, h), name + ".dt");
        compare(j.dxx(), fd4(in_x(X), x, h), name + ".dxx");
        compare(j.dxt(), fd4(in_t(X), t, h), name + ".dxt");
        compare(j.dtt(), fd4(in_t(T), t, h), name + ".dtt");
    }
};

}  // namespace

GateReport self_consistency_gate(const ManufacturedField& field, const RegimeParams& params, double tolerance) {
    Checker c{{}, tolerance};
    const double top = params.epsilon();
    for (int i = 0; i < 5; ++i) {
        const double x = 2.0 * std::numbers::pi * (i + 0.37) / 5.0;
        const double t = 0.25 + 0.1 * i;
        c.check2(field.eta, "eta", x, t);
        for (int k = 0; k < 4; ++k) {
            const double y = -1.0 + (top + 1.0) * (k + 0.5) / 4.0;
            c.check3(field.u, "u", x, y, t);
            c.check3(field.v, "v", x, y, t);
            c.check3(field.p, "p", x, y, t);
            c.check3(field.layer_u, "layer_u", x, 2.5 * k + 0.3, t);
        }
    }
    return c.report;
}

ManufacturedField rest_field() {
    ManufacturedField f;
    f.name = "rest";
    auto zero3 = [](const Jet&, const Jet&, const Jet&) { return Jet(0.0); };
    f.u = zero3;
    f.v = zero3;
    f.p = zero3;
    f.layer_u = zero3;
    f.eta = [](const Jet&, const Jet&) { return Jet(0.0); };
    return f;
}

ManufacturedField streamfunction_field() {
    ManufacturedField f;
    f.name = "streamfunction";
    // psi = (y+1)^2 sin(x-t) cos(y)
    f.u = [](const Jet& x, const Jet& y, const Jet& t) {
        const Jet b = y + 1.0;
        return sin(x - t) * (2.0 * b * cos(y) - b * b * sin(y));
    };
    f.v = [](const Jet& x, const Jet& y, const Jet& t) {
        const Jet b = y + 1.0;
        return -(b * b) * cos(y) * cos(x - t);
    };
    f.p = [](const Jet& x, const Jet& y, const Jet& t) { return 0.1 * cos(x + y - t); };
    f.eta = [](const Jet& x, const Jet& t) { return 0.5 * cos(x - t); };
    return f;
}

ManufacturedField random_field(std::uint64_t seed_value) {
    std::mt19937_64 gen(seed_value);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::array<double, 16> c{};
    for (double& v : c) v = coef(gen);

    ManufacturedField f;
    f.name = "random";
    f.u = [c](const Jet& x, const Jet& y, const Jet& t) {
        return c[0] * sin(x + c[1] * t) + c[2] * y * cos(2.0 * x) + c[3] * y * y * sin(x - t);
    };
    f.v = [c](const Jet& x, const Jet& y, const Jet& t) {
        return c[4] * cos(x + c[5] * t) * (y + 1.0) + c[6] * sin(2.0 * x + y);
    };
    f.p = [c](const Jet& x, const Jet& y, const Jet& t) {
        return c[7] * cos(x - c[8] * t) + c[9] * y * sin(x) + c[10] * exp(0.3 * y) * cos(t);
    };
    f.eta = [c](const Jet& x, const Jet& t) { return c[11] * cos(x - t) + c[12] * sin(2.0 * x + c[13] * t); };
    f.layer_u = [c](const Jet& x, const Jet& g, const Jet& t) { return c[14] * tanh(g) * sin(x - c[15] * t); };
    return f;
}

ManufacturedField ansatz_flow(const RegimeParams& params, const AnsatzSpec& spec) {
    const double eps = params.epsilon();
    const double yb = -1.0 + params.mu2() * params.gamma_inf();
    const double mu2 = params.mu2();
    const double corr = spec.correction;

    auto eta = [](const Jet& x, const Jet& t) { return cos(x - t) + 0.3 * sin(2.0 * x + 0.5 * t); };
    auto ubar = [](const Jet& x, const Jet& t) { return 0.5 * sin(x - t) + 0.2 * cos(2.0 * x - 0.3 * t); };

    ManufacturedField f;
    f.name = "ansatz";
    f.eta = eta;
    f.u = [=](const Jet& x, const Jet& y, const Jet& t) {
        const Jet depth = 1.0 + eps * eta(x, t) - mu2 * params.gamma_inf();
        const Jet s = (y - yb) / depth;
        const Jet g = cos(x + 0.7 * t);
        return ubar(x, t) + mu2 * corr * g * (s * s - 1.0 / 3.0);
    };
    const double slip = spec.wall_slip;
    f.layer_u = [=](const Jet& x, const Jet& gamma, const Jet& t) { return ubar(x, t) * (tanh(gamma) + slip); };
    return f;
}

}  // namespace viscsgn::verify
