#include "viscsgn/verify/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "viscsgn/error.hpp"

namespace viscsgn::verify {

const GaussRule& gauss_legendre(int n) {
    static std::mutex lock;
    static std::map<int, GaussRule> cache;
    if (n < 1) throw InvalidArgument("n", "quadrature needs at least one node");
    std::lock_guard<std::mutex> guard(lock);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

namespace {

constexpr double kD1[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
constexpr double kD2[5] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};

}  // namespace

double fd8(const std::function<double(double)>& f, double z, double h) {
    double acc = 0.0;
    for (int k = 1; k <= 4; ++k) acc += kD1[k - 1] * (f(z + k * h) - f(z - k * h));
    return acc / h;
}

double fd8_second(const std::function<double(double)>& f, double z, double h) {
    double acc = kD2[0] * f(z);
    for (int k = 1; k <= 4; ++k) acc += kD2[k] * (f(z + k * h) + f(z - k * h));
    return acc / (h * h);
}

}  // namespace viscsgn::verify
