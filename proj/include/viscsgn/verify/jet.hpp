#pragma once

#include <array>
#include <cmath>

namespace viscsgn::verify {

/// Variable slots of a jet.
enum Var { X = 0, Y = 1, T = 2 };

/**
 * @brief Second-order truncated Taylor jet in (x, y, t).
 *
 * Carries a value, its gradient and its Hessian, propagated exactly through
 * arithmetic and the elementary functions below (forward-mode
 * differentiation). Manufactured fields written with jets therefore expose
 * analytic first and second derivatives.
 */
class Jet {
public:
    Jet() = default;
    Jet(double c) : v_(c) {}  // NOLINT: constants convert implicitly

    static Jet variable(double value, Var slot) {
        Jet j(value);
        j.g_[slot] = 1.0;
        return j;
    }

    double value() const { return v_; }
    double d(int i) const { return g_[i]; }
    double d2(int i, int j) const { return h_[i][j]; }

    double dx() const { return g_[X]; }
    double dy() const { return g_[Y]; }
    double dt() const { return g_[T]; }
    double dxx() const { return h_[X][X]; }
    double dxy() const { return h_[X][Y]; }
    double dxt() const { return h_[X][T]; }
    double dyy() const { return h_[Y][Y]; }
    double dyt() const { return h_[Y][T]; }
    double dtt() const { return h_[T][T]; }

    /// f(a) given f, f' and f'' evaluated at a.value().
    static Jet chain(const Jet& a, double f, double f1, double f2) {
        Jet r(f);
        for (int i = 0; i < 3; ++i) r.g_[i] = f1 * a.g_[i];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) r.h_[i][j] = f1 * a.h_[i][j] + f2 * a.g_[i] * a.g_[j];
        }
        return r;
    }

    Jet& operator+=(const Jet& b) {
        v_ += b.v_;
        for (int i = 0; i < 3; ++i) {
            g_[i] += b.g_[i];
            for (int j = 0; j < 3; ++j) h_[i][j] += b.h_[i][j];
        }
        return *this;
    }
    Jet& operator-=(const Jet& b) { return *this += -b; }
    Jet& operator*=(const Jet& b) { return *this = *this * b; }
    Jet& operator/=(const Jet& b) { return *this = *this / b; }

    friend Jet operator-(const Jet& a) {
        Jet r = a;
        r.v_ = -r.v_;
        for (int i = 0; i < 3; ++i) {
            r.g_[i] = -r.g_[i];
            for (int j = 0; j < 3; ++j) r.h_[i][j] = -r.h_[i][j];
        }
        return r;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(a.v_ * b.v_);
        for (int i = 0; i < 3; ++i) r.g_[i] = a.v_ * b.g_[i] + b.v_ * a.g_[i];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                r.h_[i][j] = a.v_ * b.h_[i][j] + b.v_ * a.h_[i][j] + a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i];
            }
        }
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        const double x = b.v_;
        return a * chain(b, 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
    }

private:
    double v_ = 0.0;
    std::array<double, 3> g_{};
    std::array<std::array<double, 3>, 3> h_{};
};

inline Jet sin(const Jet& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return Jet::chain(a, s, c, -s);
}
inline Jet cos(const Jet& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return Jet::chain(a, c, -s, -c);
}
inline Jet exp(const Jet& a) {
    const double e = std::exp(a.value());
    return Jet::chain(a, e, e, e);
}
inline Jet sqrt(const Jet& a) {
    const double s = std::sqrt(a.value());
    return Jet::chain(a, s, 0.5 / s, -0.25 / (s * a.value()));
}
inline Jet tanh(const Jet& a) {
    const double th = std::tanh(a.value());
    const double s2 = 1.0 - th * th;
    return Jet::chain(a, th, s2, -2.0 * th * s2);
}
inline Jet square(const Jet& a) { return a * a; }

}  // namespace viscsgn::verify
