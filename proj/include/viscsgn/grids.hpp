#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "viscsgn/regime.hpp"

namespace viscsgn {

using Field = std::vector<double>;

/// Uniform 1D grid in x. Periodic grids omit the duplicate end node.
class Grid1D {
public:
    Grid1D(int nx, double x0, double x1, bool periodic = true);

    int nx() const { return nx_; }
    double x0() const { return x0_; }
    double x1() const { return x1_; }
    double length() const { return x1_ - x0_; }
    double dx() const { return dx_; }
    bool periodic() const { return periodic_; }
    double x(int i) const { return x0_ + dx_ * i; }
    Field nodes() const;

    bool operator==(const Grid1D&) const = default;

private:
    int nx_;
    double x0_;
    double x1_;
    double dx_;
    bool periodic_;
};

enum class Stretching { uniform, geometric };

/// Tensor grid (x, gamma) for the boundary layer. gamma runs from the wall
/// (0) to gamma_inf, optionally clustered at the wall with a geometric ratio.
class GridBL {
public:
    GridBL(Grid1D base, int ngamma, double gamma_inf, Stretching stretching = Stretching::uniform,
           double ratio = 1.0);

    const Grid1D& base() const { return base_; }
    int nx() const { return base_.nx(); }
    int ngamma() const { return static_cast<int>(gamma_.size()); }
    double gamma_inf() const { return gamma_.back(); }
    Stretching stretching() const { return stretching_; }
    double ratio() const { return ratio_; }
    double gamma(int j) const { return gamma_[static_cast<std::size_t>(j)]; }
    /// Spacing gamma(j+1) - gamma(j).
    double dgamma(int j) const { return gamma_[j + 1] - gamma_[j]; }
    std::span<const double> gammas() const { return gamma_; }

private:
    Grid1D base_;
    std::vector<double> gamma_;
    Stretching stretching_;
    double ratio_;
};

/// Field over a GridBL. Stored column-major in gamma: each x-column is contiguous.
class BLField {
public:
    BLField() = default;
    BLField(int nx, int ngamma, double value = 0.0)
        : nx_(nx), ng_(ngamma), data_(static_cast<std::size_t>(nx) * ngamma, value) {}
    explicit BLField(const GridBL& grid, double value = 0.0) : BLField(grid.nx(), grid.ngamma(), value) {}

    int nx() const { return nx_; }
    int ngamma() const { return ng_; }
    double& operator()(int i, int j) { return data_[index(i, j)]; }
    double operator()(int i, int j) const { return data_[index(i, j)]; }
    std::span<double> column(int i) { return {data_.data() + index(i, 0), static_cast<std::size_t>(ng_)}; }
    std::span<const double> column(int i) const {
        return {data_.data() + index(i, 0), static_cast<std::size_t>(ng_)};
    }
    Field row(int j) const;
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const BLField&) const = default;

private:
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * ng_ + j; }

    int nx_ = 0;
    int ng_ = 0;
    std::vector<double> data_;
};

/// Surface elevation and depth-averaged velocity of the Euler region.
struct BulkState {
    Field eta;
    Field ubar;
    double time = 0.0;
};

/// Horizontal velocity inside the boundary layer.
struct BLState {
    BLField u;
    double time = 0.0;
};

/// Second-order centered x-derivative; periodic wrap or one-sided second
/// order at the edges of a bounded grid.
Field ddx(std::span<const double> f, const Grid1D& grid);

/// Fourth-order centered x-derivative (periodic grids only).
Field ddx4(std::span<const double> f, const Grid1D& grid);

/// Trapezoidal integral of one gamma-column from 0 to upper (linear
/// interpolation inside the last cell).
double integrate_gamma(std::span<const double> column, const GridBL& grid, double upper);

/// Cumulative trapezoidal integral of one column, out[j] = int_0^gamma_j.
void cumulative_gamma(std::span<const double> column, const GridBL& grid, std::span<double> out);

/// Depth of the Euler region 1 + eps*eta - mu^2*gamma_inf. Throws DryStateError
/// if it is not strictly positive everywhere.
Field depth(const BulkState& state, const RegimeParams& params);

/// Maximum-norm and grid inner product helpers.
double max_abs(std::span<const double> f);
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> f);

/// Writes "x,value" rows.
void write_field_csv(const std::filesystem::path& path, const Grid1D& grid, std::span<const double> f);
/// Dense matrix: header row of x, then one row per gamma node (first column gamma).
void write_bl_csv(const std::filesystem::path& path, const GridBL& grid, const BLField& f);

/// Round-trip scientific formatting used for every numeric CSV entry.
std::string format_number(double v);

}  // namespace viscsgn
