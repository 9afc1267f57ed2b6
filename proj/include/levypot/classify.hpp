#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levypot/common.hpp"
#include "levypot/exponents.hpp"
#include "levypot/kernels.hpp"
#include "levypot/measures.hpp"
#include "levypot/quadrature.hpp"

namespace levypot {

// N independent isotropic stable processes on R^d.
struct StableSystem {
    std::vector<double> alphas;
    int d = 1;

    void validate() const;
    [[nodiscard]] double alpha_sum() const;
    [[nodiscard]] std::size_t n() const noexcept { return alphas.size(); }
};

[[nodiscard]] bool range_has_positive_measure(const StableSystem& sys);  // sum alpha > d
[[nodiscard]] double range_dimension(const StableSystem& sys);           // min(d, sum alpha)
[[nodiscard]] bool intersections_exist(const StableSystem& sys);         // (N-1) d < sum alpha
[[nodiscard]] double intersection_dimension(const StableSystem& sys);    // [sum alpha - (N-1) d]_+
// Stable potential density ~ |x|^(alpha-d): N-fold points iff N (d - alpha) < d, always when alpha >= d.
[[nodiscard]] bool multiple_points_allowed(double alpha, int d, int n);
// Two stable subordinators meet iff alpha1 + alpha2 > 1.
[[nodiscard]] bool subordinator_meet(double alpha1, double alpha2);

enum class VerdictKind { Convergent, Divergent, Inconclusive };
[[nodiscard]] std::string to_string(VerdictKind k);

struct ConvergenceVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    double exponent = 0.0;     // fitted growth exponent of the shell increments
    bool logarithmic = false;  // Divergent by the log-growth rule
    std::vector<double> radii;
    std::vector<double> partials;  // I(R) at each radius
    std::string note;
};

// f over R^dim (dim <= 4). Coordinates come in blocks of `block` axes
// (one block per process variable); neighbouring blocks get Gauss rules of
// different order so that no node lands exactly on a diagonal ridge
// xi^i = -xi^j, where a factor peaks over a region of width 1.
struct ProbeIntegrand {
    int dim = 1;
    std::function<double(std::span<const double>)> f;
    std::string name;
    int block = 0;  // 0: a single block
};

struct ProbePlan {
    double r0 = 4.0;
    int doublings = 12;
    double slope_band = 0.1;
    double log_growth_bound = 4.0;  // I(R_max) / I(r0) above this with flat increments => log divergence
    double log_slope_band = 0.03;   // "flat" for the log rule
};

// Partial integrals over cubes [-R, R]^dim at R = r0 2^m. The log of the
// shell increments is fitted against log R over the second half of the
// schedule: slope < -band => Convergent, slope > band => Divergent, and a
// flat slope (within log_slope_band) with total growth beyond the bound =>
// Divergent (logarithmic). Anything else is Inconclusive.
[[nodiscard]] ConvergenceVerdict numeric_convergence_probe(const ProbeIntegrand& integrand, const ProbePlan& plan = {},
                                                           Exec exec = Exec::Parallel);

using VerdictFn = std::function<ConvergenceVerdict(double)>;

struct BisectionResult {
    double value = 0.0;
    int evaluations = 0;
    int inconclusive = 0;
};

// sup{s in [lo, hi] : test(s) Convergent} with sup of the empty set = lo.
// Inconclusive verdicts lower the upper bracket. Throws InvalidArgument
// naming both s values when a Convergent verdict sits above a Divergent one.
[[nodiscard]] BisectionResult dimension_by_bisection(const VerdictFn& test, double lo, double hi, double tol);

// Integral tests as probe integrands.
// K_Psi over R^d (positive Lebesgue measure of the range / point hitting).
[[nodiscard]] ProbeIntegrand kernel_integrand(const ExponentVector& psi);
// Intersection of the N ranges: the point-hitting test of (X_1 - X_N, ...,
// X_(N-1) - X_N), prod_(j<N) K_j(xi^j) K_N(xi^1 + ... + xi^(N-1)) over
// (R^d)^(N-1). The component with the slowest kernel decay takes the
// diagonal slot.
[[nodiscard]] ProbeIntegrand intersection_integrand(const ExponentVector& psi);
// Intersection inside F: |mu_hat(xi^1 + ... + xi^N)|^2 prod_j K_j(xi^j) over (R^d)^N.
[[nodiscard]] ProbeIntegrand intersection_in_set_integrand(const ExponentVector& psi, const AtomicMeasure& mu);
// The global Fourier dimension test:
// prod_j K_j(xi^j) / (1 + |xi^1 + ... + xi^N|^(d-s)) over (R^d)^N.
[[nodiscard]] ProbeIntegrand dimension_integrand(const ExponentVector& psi, double s);
// Subordinator meeting criterion near the origin, mapped to t = 1/y on [1, inf):
// (1 + |t|)^-(alpha1 + alpha2).
[[nodiscard]] ProbeIntegrand subordinator_integrand(double alpha1, double alpha2);

// Verdict of the analytic dimension test for a stable system: Convergent iff
// s < sum alpha - (N-1) d.
[[nodiscard]] VerdictFn stable_dimension_test(const StableSystem& sys);
// Numeric dimension test through the probe.
[[nodiscard]] VerdictFn numeric_dimension_test(const StableSystem& sys, const ProbePlan& plan = {});

[[nodiscard]] ExponentVector stable_exponents(const StableSystem& sys);

// Q(x) = int [v_1(x + y) + v_1(x - y)] / 2 u_2(y) dy in d = 1 for two single
// processes with bounded potential densities (the two-process meeting gauge).
[[nodiscard]] Kernel meeting_kernel(const LevyExponent& first, const LevyExponent& second, const QuadratureSpec& quad);

}  // namespace levypot
