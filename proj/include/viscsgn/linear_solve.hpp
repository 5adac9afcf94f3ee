#pragma once

#include <span>
#include <vector>

namespace viscsgn {

/// Thomas algorithm. lower[0] and upper[n-1] are ignored. rhs is overwritten
/// with the solution. Throws SolverError on a vanishing pivot.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

/// Cyclic tridiagonal system (lower[0] couples row 0 to n-1, upper[n-1] couples
/// row n-1 to 0), solved with the Sherman-Morrison correction.
void solve_cyclic_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<double> rhs);

}  // namespace viscsgn
