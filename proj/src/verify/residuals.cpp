#include "viscsgn/verify/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "viscsgn/error.hpp"
#include "viscsgn/verify/parallel.hpp"
#include "viscsgn/verify/quadrature.hpp"

namespace viscsgn::verify {

namespace {

struct TagEntry {
    Equation eq;
    const char* tag;
    int order;
};

constexpr TagEntry kTags[] = {
    {Equation::eq8, "eq8", 6},        {Equation::eq10, "eq10", 4},   {Equation::eq10_typeset, "eq10_typeset", 0},
    {Equation::eq11, "eq11", 0},      {Equation::eq14, "eq14", 0},   {Equation::eq15, "eq15", 4},
    {Equation::eq14_vs_15, "eq14_vs_15", 4}, {Equation::eq20, "eq20", 4}, {Equation::eq21, "eq21", 4},
};

Jet var(double v, Var s) { return Jet::variable(v, s); }

/// Exact flow quantities of one manufactured configuration.
class Column {
public:
    Column(const ManufacturedField& field, const RegimeParams& params, const Probes& probes)
        : f_(field),
          eps_(params.epsilon()),
          mu_(params.mu()),
          mu2_(params.mu2()),
          gi_(params.gamma_inf()),
          R_(params.R()),
          yb_(-1.0 + params.mu2() * params.gamma_inf()),
          n_(probes.quadrature),
          h_(probes.fd_step) {}

    double mu() const { return mu_; }
    double mu2() const { return mu2_; }
    double eps() const { return eps_; }
    double R() const { return R_; }
    double y_bottom() const { return yb_; }
    double gamma_inf() const { return gi_; }

    /// u with (x, y, t) all independent: partial derivatives.
    Jet u(double x, double y, double t) const { return f_.u(var(x, X), var(y, Y), var(t, T)); }
    Jet eta(double x, double t) const { return f_.eta(var(x, X), var(t, T)); }
    double surface(double x, double t) const { return eps_ * f_.eta(Jet(x), Jet(t)).value(); }

    /// int_{y_b}^{eps eta} u^power dy as a jet in (x, t).
    Jet column_integral(double x, double t, int power) const {
        const Jet jx = var(x, X), jt = var(t, T);
        const Jet top = eps_ * f_.eta(jx, jt);
        auto integrand = [&](const Jet& y) {
            const Jet v = f_.u(jx, y, jt);
            return power == 1 ? v : v * v;
        };
        return integrate(integrand, Jet(yb_), top, n_);
    }

    Jet depth(double x, double t) const {
        return 1.0 + eps_ * f_.eta(var(x, X), var(t, T)) - mu2_ * gi_;
    }

    Jet ubar(double x, double t) const { return column_integral(x, t, 1) / depth(x, t); }

    /// Kinematic condition: eps (eta_t + u eta_x) at the surface.
    double v_surf(double x, double t) const {
        const Jet e = eta(x, t);
        const double us = u(x, eps_ * e.value(), t).value();
        return eps_ * (e.dt() + us * e.dx());
    }

    double v_surf_x(double x, double t) const {
        return fd8([&](double z) { return v_surf(z, t); }, x, h_);
    }
    double v_surf_t(double x, double t) const {
        return fd8([&](double z) { return v_surf(x, z); }, t, h_);
    }

    /// v = v_surf - int_{eps eta}^y u_x.
    double v(double x, double y, double t) const {
        const double ys = surface(x, t);
        return v_surf(x, t) - integrate([&](double yp) { return u(x, yp, t).dx(); }, ys, y, n_);
    }
    double v_x(double x, double y, double t) const {
        return fd8([&](double z) { return v(z, y, t); }, x, h_);
    }
    double v_t(double x, double y, double t) const {
        return fd8([&](double z) { return v(x, y, z); }, t, h_);
    }
    double v_xx(double x, double y, double t) const {
        return fd8_second([&](double z) { return v(z, y, t); }, x, h_);
    }

    /// p = eps eta - mu^2 int_{eps eta}^y (v_t + u v_x + v v_y).
    double p(double x, double y, double t) const {
        const double ys = surface(x, t);
        auto integrand = [&](double yp) {
            const Jet uj = u(x, yp, t);
            return v_t(x, yp, t) + uj.value() * v_x(x, yp, t) - v(x, yp, t) * uj.dx();
        };
        return ys - mu2_ * integrate(integrand, ys, y, n_);
    }
    double p_x(double x, double y, double t) const {
        return fd8([&](double z) { return p(z, y, t); }, x, h_);
    }

    /// u_t + u u_x + v u_y + p_x.
    double euler_x(double x, double y, double t) const {
        const Jet uj = u(x, y, t);
        return uj.dt() + uj.value() * uj.dx() + v(x, y, t) * uj.dy() + p_x(x, y, t);
    }

    double material_v_surf(double x, double t, double ub) const {
        return v_surf_t(x, t) + ub * v_surf_x(x, t);
    }

    /// ubar_xt + ubar ubar_xx - X with X = ubar_x^2 or ubar ubar_x.
    static double accel(const Jet& ub, bool literal) {
        const double last = literal ? ub.value() * ub.dx() : ub.dx() * ub.dx();
        return ub.dxt() + ub.value() * ub.dxx() - last;
    }

    /// Bracket of the pressure relation at height y, term by term.
    double pressure_bracket(double x, double y, double t, bool typeset) const {
        const Jet e = eta(x, t);
        const double ys = eps_ * e.value();
        const double uxs = u(x, ys, t).dx();
        const double vs = v_surf(x, t);
        const double iu = integrate([&](double yp) { return u(x, yp, t).value(); }, ys, y, n_);
        const double iux = integrate([&](double yp) { return u(x, yp, t).dx(); }, ys, y, n_);
        const double tail = nested_tail(x, y, t);
        const double first = (y - ys) * (v_surf_t(x, t) + uxs * eps_ * e.dt());
        const double gx = v_surf_x(x, t) + uxs * eps_ * e.dx();
        const double second = typeset ? iu * (gx - iux * vs) : iu * gx - iux * vs;
        return first + second + tail;
    }

    /// -int int u_xt - int (u int u_xx) + int (u_x int u_x), all from eps eta to y.
    double nested_tail(double x, double y, double t) const {
        const double ys = surface(x, t);
        auto inner = [&](double yp) {
            const Jet uj = u(x, yp, t);
            double ixt = 0.0, ixx = 0.0, ix = 0.0;
            const GaussRule& rule = gauss_legendre(n_);
            const double half = 0.5 * (yp - ys), mid = 0.5 * (yp + ys);
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const Jet w = u(x, mid + half * rule.nodes[k], t);
                ixt += rule.weights[k] * w.dxt();
                ixx += rule.weights[k] * w.dxx();
                ix += rule.weights[k] * w.dx();
            }
            return -ixt * half - uj.value() * ixx * half + uj.dx() * ix * half;
        };
        return integrate(inner, ys, y, n_);
    }

    double pressure_model(double x, double y, double t, bool typeset) const {
        return surface(x, t) - mu2_ * pressure_bracket(x, y, t, typeset);
    }

    /// eps eta + mu^2 [H D v_surf + H^2/2 A].
    double layer_pressure_model(double x, double t) const {
        const Jet ub = ubar(x, t);
        const double H = depth(x, t).value();
        return surface(x, t) + mu2_ * (H * material_v_surf(x, t, ub.value()) + 0.5 * H * H * accel(ub, false));
    }

    /// Ansatz pressure: eps eta - mu^2 [(y - eps eta) D v_surf - (y - eps eta)^2/2 A].
    double pressure_ansatz(double x, double y, double t) const {
        const Jet ub = ubar(x, t);
        const double d = y - surface(x, t);
        return surface(x, t) - mu2_ * (d * material_v_surf(x, t, ub.value()) - 0.5 * d * d * accel(ub, false));
    }

    double bracket14(double x, double t) const {
        const Jet e = eta(x, t);
        const double ys = eps_ * e.value();
        const double H = depth(x, t).value();
        const Jet ubj = ubar(x, t);
        const double ub = ubj.value(), ubx = ubj.dx();
        const Jet us = u(x, ys, t);
        const double vs = v_surf(x, t);
        const double a1 = material_v_surf(x, t, ub) + eps_ * e.dt() * (us.dx() - ubx) +
                          eps_ * e.dx() * (ub * us.dx() - ubx * us.value());
        auto double_int = [&](auto&& g) {
            return integrate([&](double y) { return integrate(g, ys, y, n_); }, yb_, ys, n_);
        };
        const double j1 = double_int([&](double yp) { return u(x, yp, t).value() - ub; });
        const double j2 = double_int([&](double yp) { return u(x, yp, t).dx() - ubx; });
        // nested_tail already carries the signs of the triple-integral term.
        const double j3 = integrate([&](double y) { return nested_tail(x, y, t); }, yb_, ys, n_);
        return -0.5 * H * H * a1 + j1 * (v_surf_x(x, t) + us.dx() * eps_ * e.dx()) - j2 * vs + j3;
    }

    double lhs14(double x, double t) const {
        const Jet e = eta(x, t);
        const Jet I1 = column_integral(x, t, 1);
        const Jet I2 = column_integral(x, t, 2);
        const Jet H = depth(x, t);
        const Jet ub = I1 / H;
        const double ubot = u(x, yb_, t).value();
        const double bx = fd8([&](double z) { return bracket14(z, t); }, x, h_);
        return H.value() * ub.dt() + I2.dx() + H.value() * eps_ * e.dx() +
               (ub.value() - ubot) * (eps_ * e.dt() + I1.dx()) - ub.value() * I1.dx() - mu2_ * bx;
    }

    double bracket15(double x, double t, bool literal) const {
        const Jet ub = ubar(x, t);
        const double H = depth(x, t).value();
        return -0.5 * H * H * material_v_surf(x, t, ub.value()) - H * H * H / 6.0 * accel(ub, literal);
    }

    double lhs15(double x, double t, bool literal) const {
        const Jet H = depth(x, t);
        const Jet ub = ubar(x, t);
        const double ubot = u(x, yb_, t).value();
        const double flux_x = H.dx() * ub.value() + H.value() * ub.dx();
        const double bx = fd8([&](double z) { return bracket15(z, t, literal); }, x, h_);
        return H.value() * ub.dt() + H.value() * ub.value() * ub.dx() + H.value() * H.dx() +
               (ub.value() - ubot) * (H.dt() + flux_x) - mu2_ * bx;
    }

    /// int_{y_b}^{eps eta} (u_t + u u_x + v u_y + p_x) dy.
    double integrated_euler_x(double x, double t) const {
        return integrate([&](double y) { return euler_x(x, y, t); }, yb_, surface(x, t), n_);
    }

    // Boundary layer, gamma in the y slot.
    Jet ul(double x, double g, double t) const { return f_.layer_u(var(x, X), var(g, Y), var(t, T)); }
    double vl(double x, double g, double t) const {
        return -mu2_ * integrate([&](double gp) { return ul(x, gp, t).dx(); }, 0.0, g, n_);
    }
    double layer_p_gamma(double x, double g, double t) const {
        const Jet uj = ul(x, g, t);
        const double v = vl(x, g, t);
        const double vx = fd8([&](double z) { return vl(z, g, t); }, x, h_);
        const double vt = fd8([&](double z) { return vl(x, g, z); }, t, h_);
        const double vxx = fd8_second([&](double z) { return vl(z, g, t); }, x, h_);
        const double vg = -mu2_ * uj.dx();
        const double vgg = -mu2_ * uj.dxy();
        const double mu8 = mu2_ * mu2_ * mu2_ * mu2_;
        return -mu2_ * (mu2_ * (vt + uj.value() * vx + v * vg / mu2_) - mu8 / R_ * vxx - mu2_ / R_ * vgg);
    }
    /// Layer pressure integrated down from gamma_inf, matched to the bulk there.
    double layer_p(double x, double g, double t) const {
        return p(x, yb_, t) + integrate([&](double gp) { return layer_p_gamma(x, gp, t); }, gi_, g, n_);
    }

private:
    const ManufacturedField& f_;
    double eps_, mu_, mu2_, gi_, R_, yb_;
    int n_;
    double h_;
};

std::vector<double> x_probes(const Probes& probes) {
    std::vector<double> xs(static_cast<std::size_t>(probes.nx));
    for (int i = 0; i < probes.nx; ++i) xs[i] = 2.0 * std::numbers::pi * (i + 0.25) / probes.nx;
    return xs;
}

/// Interior heights of the column [lo, hi].
std::vector<double> column_probes(double lo, double hi, int n) {
    std::vector<double> ys(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) ys[k] = lo + (hi - lo) * (k + 0.5) / n;
    return ys;
}

double max_over(const std::vector<double>& xs, const std::function<double(double)>& f) {
    std::vector<double> out(xs.size(), 0.0);
    parallel_for(static_cast<int>(xs.size()), [&](int i) { out[i] = std::abs(f(xs[i])); });
    return *std::max_element(out.begin(), out.end());
}

void require(const Field3& f, const char* name) {
    if (!f) throw InvalidArgument("fields", std::string("missing ") + name);
}

void require_gate(const ManufacturedField& field, const RegimeParams& params) {
    const GateReport gate = self_consistency_gate(field, params);
    if (!gate.passed) {
        throw InvalidArgument("fields", "self-consistency gate failed at " + gate.worst + " (error " +
                                            std::to_string(gate.max_error) + ")");
    }
}

}  // namespace

Equation parse_equation(std::string_view tag) {
    for (const auto& e : kTags) {
        if (tag == e.tag) return e.eq;
    }
    throw InvalidArgument("equation", "unknown tag '" + std::string(tag) + "'");
}

std::string equation_tag(Equation eq) {
    for (const auto& e : kTags) {
        if (e.eq == eq) return e.tag;
    }
    return "?";
}

int claimed_order(Equation eq) {
    for (const auto& e : kTags) {
        if (e.eq == eq) return e.order;
    }
    return 0;
}

NSResidual ns_residual(const ManufacturedField& field, const RegimeParams& params, const Probes& probes) {
    require(field.u, "u");
    require(field.v, "v");
    require(field.p, "p");
    if (!field.eta) throw InvalidArgument("fields", "missing eta");
    require_gate(field, params);

    const double eps = params.epsilon(), mu = params.mu(), mu2 = params.mu2();
    const double inv_re = mu > 0.0 ? 1.0 / params.reynolds() : 0.0;
    const double t = probes.time;
    auto at = [&](const Field3& f, double x, double y) { return f(var(x, X), var(y, Y), var(t, T)); };

    NSResidual r;
    const std::vector<double> xs = x_probes(probes);
    std::vector<NSResidual> per(xs.size());
    parallel_for(static_cast<int>(xs.size()), [&](int i) {
        const double x = xs[i];
        NSResidual& q = per[i];
        const Jet e = field.eta(var(x, X), var(t, T));
        const double ys = eps * e.value();
        std::vector<double> ys_probe = column_probes(-1.0, ys, probes.ny);
        ys_probe.push_back(-1.0);
        ys_probe.push_back(ys);
        for (double y : ys_probe) {
            const Jet u = at(field.u, x, y), v = at(field.v, x, y), p = at(field.p, x, y);
            const double mx = u.dt() + u.value() * u.dx() + v.value() * u.dy() -
                              inv_re * (mu * u.dxx() + u.dyy() / (mu > 0.0 ? mu : 1.0)) + p.dx();
            const double my = mu2 * (v.dt() + u.value() * v.dx() + v.value() * v.dy()) -
                              mu2 * inv_re * (mu * v.dxx() + v.dyy() / (mu > 0.0 ? mu : 1.0)) + p.dy();
            q.momentum_x = std::max(q.momentum_x, std::abs(mx));
            q.momentum_y = std::max(q.momentum_y, std::abs(my));
            q.continuity = std::max(q.continuity, std::abs(u.dx() + v.dy()));
        }
        // Surface: stress balance along n = (-eps eta_x, 1), then the kinematic condition.
        const Jet u = at(field.u, x, ys), v = at(field.v, x, ys), p = at(field.p, x, ys);
        const double nx = -eps * e.dx();
        const double pe = p.value() - ys;
        const double sxx = 2.0 * inv_re * mu * u.dx();
        const double sxy = inv_re * (u.dy() + mu2 * v.dx());
        const double syy = 2.0 * inv_re * mu * v.dy();
        const double d1 = -pe * nx + sxx * nx + sxy;
        const double d2 = -pe + sxy * nx + syy;
        q.dynamic = std::max(std::abs(d1), std::abs(d2));
        const double kin = eps * (e.dt() + u.value() * e.dx()) - v.value();
        q.kinematic = eps > 0.0 ? std::abs(kin) / eps : std::abs(kin);
        const Jet ub = at(field.u, x, -1.0), vb = at(field.v, x, -1.0);
        q.no_slip = std::max(std::abs(ub.value()), std::abs(vb.value()));
    });
    for (const NSResidual& q : per) {
        r.momentum_x = std::max(r.momentum_x, q.momentum_x);
        r.momentum_y = std::max(r.momentum_y, q.momentum_y);
        r.continuity = std::max(r.continuity, q.continuity);
        r.dynamic = std::max(r.dynamic, q.dynamic);
        r.kinematic = std::max(r.kinematic, q.kinematic);
        r.no_slip = std::max(r.no_slip, q.no_slip);
    }
    return r;
}

ModelResidual model_residual(Equation eq, const ManufacturedField& field, const RegimeParams& params,
                             const Probes& probes) {
    require(field.u, "u");
    if (!field.eta) throw InvalidArgument("fields", "missing eta");
    if (eq == Equation::eq21) {
        require(field.layer_u, "layer_u");
        if (!params.has_layer() || params.mu() <= 0.0) {
            throw InvalidArgument("params", "eq21 needs mu > 0 and a boundary layer");
        }
    }
    require_gate(field, params);

    const Column c(field, params, probes);
    const double t = probes.time;
    const std::vector<double> xs = x_probes(probes);
    ModelResidual out;
    out.equation = eq;

    auto column_max = [&](const std::function<double(double, double)>& f) {
        return max_over(xs, [&](double x) {
            double m = 0.0;
            for (double y : column_probes(c.y_bottom(), c.surface(x, t), probes.ny)) m = std::max(m, std::abs(f(x, y)));
            return m;
        });
    };

    switch (eq) {
        case Equation::eq8: {
            if (c.mu() <= 0.0) break;
            const double inv_re = 1.0 / params.reynolds();
            out.value = column_max([&](double x, double y) {
                const Jet u = c.u(x, y, t);
                const double rx = inv_re * (c.mu() * u.dxx() + u.dyy() / c.mu());
                const double vyy = -u.dxy();
                const double ry = c.mu2() * inv_re * (c.mu() * c.v_xx(x, y, t) + vyy / c.mu());
                return std::max(std::abs(rx), std::abs(ry));
            });
            break;
        }
        case Equation::eq10:
            out.value = column_max([&](double x, double y) { return c.pressure_ansatz(x, y, t) - c.p(x, y, t); });
            break;
        case Equation::eq10_typeset:
            out.value = column_max([&](double x, double y) { return c.pressure_model(x, y, t, true) - c.p(x, y, t); });
            break;
        case Equation::eq11:
            out.value = column_max([&](double x, double y) {
                const Jet u = c.u(x, y, t);
                const Jet e = c.eta(x, t);
                const double ys = c.surface(x, t);
                const double iux =
                    integrate([&](double yp) { return c.u(x, yp, t).dx(); }, ys, y, probes.quadrature);
                const double bx =
                    fd8([&](double z) { return c.pressure_bracket(z, y, t, false); }, x, probes.fd_step);
                const double lhs = u.dt() + u.value() * u.dx() + u.dy() * (c.v_surf(x, t) - iux) +
                                   c.eps() * e.dx() - c.mu2() * bx;
                return lhs - c.euler_x(x, y, t);
            });
            break;
        case Equation::eq14:
            out.value = max_over(xs, [&](double x) { return c.lhs14(x, t) - c.integrated_euler_x(x, t); });
            break;
        case Equation::eq15:
            out.value = max_over(xs, [&](double x) { return c.lhs15(x, t, false) - c.integrated_euler_x(x, t); });
            out.literal_variant =
                max_over(xs, [&](double x) { return c.lhs15(x, t, true) - c.integrated_euler_x(x, t); });
            break;
        case Equation::eq14_vs_15:
            out.value = max_over(xs, [&](double x) { return c.lhs14(x, t) - c.lhs15(x, t, false); });
            out.literal_variant = max_over(xs, [&](double x) { return c.lhs14(x, t) - c.lhs15(x, t, true); });
            break;
        case Equation::eq20:
            out.value = max_over(xs, [&](double x) { return c.layer_pressure_model(x, t) - c.p(x, c.y_bottom(), t); });
            break;
        case Equation::eq21: {
            const double mu6 = std::pow(c.mu2(), 3);
            const double h = probes.fd_step;
            const double momentum = max_over(xs, [&](double x) {
                auto b20 = [&](double z) { return c.layer_pressure_model(z, t) - c.surface(z, t); };
                const double forcing = c.eps() * c.eta(x, t).dx() + fd8(b20, x, h);
                double m = 0.0;
                for (double g : column_probes(0.0, c.gamma_inf(), probes.ny)) {
                    const Jet u = c.ul(x, g, t);
                    const double px = fd8([&](double z) { return c.layer_p(z, g, t); }, x, h);
                    m = std::max(m, std::abs(-mu6 / c.R() * u.dxx() + px - forcing));
                }
                return m;
            });
            const double wall = max_over(xs, [&](double x) { return c.ul(x, 0.0, t).value(); });
            out.value = std::max(momentum, wall);
            break;
        }
    }
    return out;
}

}  // namespace viscsgn::verify
