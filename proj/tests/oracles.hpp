#pragma once

// Reference values computed independently of the library: closed forms and
// plain composite Simpson sums. Nothing here calls into levypot.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Lambda through complex arithmetic: 2 Re(1/(1+z)) + 2 Re(1/(1+z)^2).
inline double lambda(std::complex<double> z) {
    const auto w = 1.0 / (1.0 + z);
    return 2.0 * w.real() + 2.0 * (w * w).real();
}

// One-potential density of |xi|^alpha in d = 1 at the origin (alpha > 1):
// (1/pi) int_0^inf dxi / (1 + xi^alpha).
inline double stable_v0(double alpha) { return 1.0 / (alpha * std::sin(pi / alpha)); }

// Psi = |xi|^2 / 2 in d = 1: v(x) = exp(-sqrt2 |x|) / sqrt2.
inline double brownian_v_1d(double x) { return std::exp(-std::sqrt(2.0) * std::abs(x)) / std::sqrt(2.0); }

// Psi = |xi|^2 in d = 3: v(r) = exp(-r) / (4 pi r).
inline double brownian_v_3d(double r) { return std::exp(-r) / (4.0 * pi * r); }

// Riesz energy of Lebesgue measure on [0,1] with gauge |x|^-s.
inline double riesz_unit_interval(double s) { return 2.0 / ((1.0 - s) * (2.0 - s)); }

// Mean of |x|^-s over [-h/2, h/2].
inline double riesz_cell_mean(double h, double s) { return std::pow(h / 2.0, -s) / (1.0 - s); }

// Direct double sum of a symmetric gauge against two atomic measures.
template <class K>
double double_sum(const K& k, const std::vector<double>& x, const std::vector<double>& wx,
                  const std::vector<double>& y, const std::vector<double>& wy) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) s += wx[i] * wy[j] * k(x[i] - y[j]);
    return s;
}

// Intersection dimension of N stable indices in R^d, by exact rational
// arithmetic on indices given in hundredths.
inline double intersection_dimension(const std::vector<int>& alpha_hundredths, int d) {
    long long sum = 0;
    for (int a : alpha_hundredths) sum += a;
    const long long excess = sum - 100LL * (static_cast<long long>(alpha_hundredths.size()) - 1) * d;
    return excess > 0 ? static_cast<double>(excess) / 100.0 : 0.0;
}

}  // namespace oracle
