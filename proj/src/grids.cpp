#include "viscsgn/grids.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "viscsgn/error.hpp"
#include "viscsgn/io.hpp"

namespace viscsgn {

Grid1D::Grid1D(int nx, double x0, double x1, bool periodic)
    : nx_(nx), x0_(x0), x1_(x1), periodic_(periodic) {
    if (nx < 8) throw InvalidArgument("nx", "at least 8 nodes required");
    if (!(x1 > x0)) throw InvalidArgument("domain", "x1 must exceed x0");
    dx_ = periodic ? (x1 - x0) / nx : (x1 - x0) / (nx - 1);
}

Field Grid1D::nodes() const {
    Field x(static_cast<std::size_t>(nx_));
    for (int i = 0; i < nx_; ++i) x[i] = this->x(i);
    return x;
}

GridBL::GridBL(Grid1D base, int ngamma, double gamma_inf, Stretching stretching, double ratio)
    : base_(base), stretching_(stretching), ratio_(ratio) {
    if (ngamma < 3) throw InvalidArgument("ngamma", "at least 3 gamma nodes required");
    if (!(gamma_inf > 0.0)) throw InvalidArgument("gamma_inf", "must be positive for a layer grid");
    gamma_.resize(static_cast<std::size_t>(ngamma));
    const int cells = ngamma - 1;
    if (stretching == Stretching::uniform) {
        ratio_ = 1.0;
        for (int j = 0; j < ngamma; ++j) gamma_[j] = gamma_inf * j / cells;
    } else {
        if (!(ratio >= 1.0 && ratio <= 1.2)) {
            throw InvalidArgument("ratio", "geometric stretching ratio must lie in [1, 1.2]");
        }
        // first spacing d0 with sum_{k<cells} d0 r^k = gamma_inf
        const double total = ratio == 1.0 ? cells : (std::pow(ratio, cells) - 1.0) / (ratio - 1.0);
        double d = gamma_inf / total;
        gamma_[0] = 0.0;
        for (int j = 1; j < ngamma; ++j) {
            gamma_[j] = gamma_[j - 1] + d;
            d *= ratio;
        }
    }
    gamma_.front() = 0.0;
    gamma_.back() = gamma_inf;
}

Field BLField::row(int j) const {
    Field r(static_cast<std::size_t>(nx_));
    for (int i = 0; i < nx_; ++i) r[i] = (*this)(i, j);
    return r;
}

Field ddx(std::span<const double> f, const Grid1D& grid) {
    const int n = grid.nx();
    if (static_cast<int>(f.size()) != n) throw InvalidArgument("field", "length does not match the grid");
    Field d(f.size());
    const double inv2h = 0.5 / grid.dx();
    for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv2h;
    if (grid.periodic()) {
        d[0] = (f[1] - f[n - 1]) * inv2h;
        d[n - 1] = (f[0] - f[n - 2]) * inv2h;
    } else {
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
    }
    return d;
}

Field ddx4(std::span<const double> f, const Grid1D& grid) {
    const int n = grid.nx();
    if (static_cast<int>(f.size()) != n) throw InvalidArgument("field", "length does not match the grid");
    if (!grid.periodic()) throw InvalidArgument("grid", "fourth-order stencil needs a periodic grid");
    Field d(f.size());
    const double inv12h = 1.0 / (12.0 * grid.dx());
    auto at = [&](int i) { return f[static_cast<std::size_t>((i % n + n) % n)]; };
    for (int i = 0; i < n; ++i) {
        d[i] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) * inv12h;
    }
    return d;
}

double integrate_gamma(std::span<const double> column, const GridBL& grid, double upper) {
    if (static_cast<int>(column.size()) != grid.ngamma()) {
        throw InvalidArgument("column", "length does not match ngamma");
    }
    if (!(upper >= 0.0) || upper > grid.gamma_inf() * (1.0 + 1e-14)) {
        throw InvalidArgument("upper", "must lie in [0, gamma_inf]");
    }
    double acc = 0.0;
    for (int j = 0; j + 1 < grid.ngamma(); ++j) {
        const double g0 = grid.gamma(j);
        const double g1 = grid.gamma(j + 1);
        if (upper >= g1) {
            acc += 0.5 * (g1 - g0) * (column[j] + column[j + 1]);
            continue;
        }
        if (upper > g0) {
            const double w = (upper - g0) / (g1 - g0);
            const double fu = column[j] + w * (column[j + 1] - column[j]);
            acc += 0.5 * (upper - g0) * (column[j] + fu);
        }
        break;
    }
    return acc;
}

void cumulative_gamma(std::span<const double> column, const GridBL& grid, std::span<double> out) {
    out[0] = 0.0;
    for (int j = 0; j + 1 < grid.ngamma(); ++j) {
        out[j + 1] = out[j] + 0.5 * grid.dgamma(j) * (column[j] + column[j + 1]);
    }
}

Field depth(const BulkState& state, const RegimeParams& params) {
    const double base = 1.0 - params.mu2() * params.gamma_inf();
    Field h(state.eta.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        h[i] = base + params.epsilon() * state.eta[i];
        if (!(h[i] > 0.0)) {
            throw DryStateError("dry state: depth " + std::to_string(h[i]) + " at node " + std::to_string(i));
        }
    }
    return h;
}

double max_abs(std::span<const double> f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sum(std::span<const double> f) {
    double s = 0.0;
    for (double v : f) s += v;
    return s;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

void write_field_csv(const std::filesystem::path& path, const Grid1D& grid, std::span<const double> f) {
    AtomicFile out(path);
    out.stream() << "x,value\n";
    for (int i = 0; i < grid.nx(); ++i) {
        out.stream() << format_number(grid.x(i)) << ',' << format_number(f[i]) << '\n';
    }
    out.commit();
}

void write_bl_csv(const std::filesystem::path& path, const GridBL& grid, const BLField& f) {
    AtomicFile out(path);
    auto& s = out.stream();
    s << "gamma\\x";
    for (int i = 0; i < grid.nx(); ++i) s << ',' << format_number(grid.base().x(i));
    s << '\n';
    for (int j = 0; j < grid.ngamma(); ++j) {
        s << format_number(grid.gamma(j));
        for (int i = 0; i < grid.nx(); ++i) s << ',' << format_number(f(i, j));
        s << '\n';
    }
    out.commit();
}

}  // namespace viscsgn
