#include "viscsgn/linear_solve.hpp"

#include <cmath>
#include <string>

#include "viscsgn/error.hpp"

namespace viscsgn {

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n) {
        throw SolverError("tridiagonal: band sizes do not match");
    }
    std::vector<double> c(n);
    double beta = diag[0];
    if (beta == 0.0) throw SolverError("tridiagonal: zero pivot in row 0");
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        c[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * c[i];
        if (beta == 0.0 || !std::isfinite(beta)) {
            throw SolverError("tridiagonal: zero pivot in row " + std::to_string(i));
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i + 1] * rhs[i + 1];
}

void solve_cyclic_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<double> rhs) {
    const std::size_t n = diag.size();
    if (n < 3) throw SolverError("cyclic tridiagonal: need at least 3 unknowns");
    const double alpha = upper[n - 1];  // A(n-1, 0)
    const double beta = lower[0];       // A(0, n-1)
    const double gamma = -diag[0];

    // A = B + u v^T with u = (gamma, 0, ..., alpha), v = (1, 0, ..., beta/gamma).
    std::vector<double> bdiag(diag.begin(), diag.end());
    bdiag[0] -= gamma;
    bdiag[n - 1] -= alpha * beta / gamma;

    solve_tridiagonal(lower, bdiag, upper, rhs);
    std::vector<double> z(n, 0.0);
    z[0] = gamma;
    z[n - 1] = alpha;
    solve_tridiagonal(lower, bdiag, upper, z);

    const double fact = (rhs[0] + beta * rhs[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i) rhs[i] -= fact * z[i];
}

}  // namespace viscsgn
