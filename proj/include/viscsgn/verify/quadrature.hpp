#pragma once

#include <functional>
#include <vector>

namespace viscsgn::verify {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule, cached per n. Exact for polynomials of degree 2n - 1.
const GaussRule& gauss_legendre(int n);

/// Integral of f over [a, b] with the n-point rule; a > b gives the signed value.
template <class R, class F>
R integrate(const F& f, const R& a, const R& b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const R half = (b - a) * 0.5;
    const R mid = (b + a) * 0.5;
    R acc(0.0);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) acc += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return acc * half;
}

/// Eighth-order central first derivative of a scalar function.
double fd8(const std::function<double(double)>& f, double z, double h);

/// Eighth-order central second derivative of a scalar function.
double fd8_second(const std::function<double(double)>& f, double z, double h);

}  // namespace viscsgn::verify
