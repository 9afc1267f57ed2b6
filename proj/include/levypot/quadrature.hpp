#pragma once

#include <functional>
#include <span>
#include <vector>

#include "levypot/common.hpp"

namespace levypot {

enum class QuadScheme { Radial1D, Tensor, TimePlane2D };
enum class TailPolicy { PowerLawExtrapolate, Truncate };

// Deterministic quadrature plan shared by every integral in the library.
// `r_max` is the truncation radius (frequency cutoff, or time horizon for
// TimePlane2D); `n_nodes` is a node budget whose meaning depends on the
// scheme (nodes per panel for Radial1D, per-axis budget for Tensor).
struct QuadratureSpec {
    QuadScheme scheme = QuadScheme::Radial1D;
    int tensor_dim = 1;
    double r_max = 1.0e4;
    int n_nodes = 64;
    TailPolicy tail_policy = TailPolicy::PowerLawExtrapolate;
    double rel_tol = 1.0e-8;

    void validate() const;
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error (tail estimate for improper parts)
    bool converged = true;
};

using Fn1 = std::function<double(double)>;

// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
[[nodiscard]] const GaussRule& gauss_legendre(int n);

// Composite Gauss-Legendre with `panels` equal panels.
[[nodiscard]] double integrate_gl(const Fn1& f, double a, double b, int panels, int order);

// Globally adaptive Gauss-Kronrod (G7/K15) on [a, b].
[[nodiscard]] IntegralResult integrate_adaptive(const Fn1& f, double a, double b,
                                                double rel_tol, double abs_tol = 0.0,
                                                int max_intervals = 4000);

// Integral over [0, b] of f where f(r) ~ r^p near the origin (p > -1). The
// substitution r = b u^(1/(1+p)) removes the singular factor.
[[nodiscard]] IntegralResult integrate_power_origin(const Fn1& f, double b, double p,
                                                    double rel_tol);

// Integral over [a, inf) of a non-oscillating f with a power-law tail.
// Geometric panels up to r_max; the remainder is extrapolated from the
// ratio of the last two panels (PowerLawExtrapolate) or only estimated
// (Truncate). A non-decaying panel ratio marks the result nonconverged with
// an infinite error.
[[nodiscard]] IntegralResult integrate_power_tail(const Fn1& f, double a, double r_max,
                                                  TailPolicy policy, double rel_tol);

enum class Trig { Cos, Sin };

// Integral over [0, inf) of g(xi) cos(omega xi) or g(xi) sin(omega xi) for a
// g that is eventually smooth and monotone. Half-period panels past an
// initial segment; the alternating panel series is accelerated by iterated
// averaging of its partial sums.
[[nodiscard]] IntegralResult integrate_oscillatory(const Fn1& g, double omega, Trig kind,
                                                   double rel_tol, double initial = 1.0,
                                                   int max_panels = 20000);

// Tensor Gauss-Legendre over an axis-aligned box.
using FnD = std::function<double(std::span<const double>)>;
[[nodiscard]] double integrate_box(const FnD& f, std::span<const double> lower,
                                   std::span<const double> upper, int order);

}  // namespace levypot
