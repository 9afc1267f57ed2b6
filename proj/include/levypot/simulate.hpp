#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "levypot/classify.hpp"
#include "levypot/common.hpp"
#include "levypot/measures.hpp"

namespace levypot {

struct MCConfig {
    int trials = 1000;
    double time_horizon = 1.0;
    int n_steps = 1000;
    double epsilon = 0.1;
    std::uint64_t seed = 1;
    std::vector<double> box_scales;

    void validate() const;
};

struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(trials)
    int trials = 0;
};

[[nodiscard]] MCEstimate summarize(std::span<const double> samples);

using Rng = std::mt19937_64;

// Independent stream for (seed, index, purpose), split by counter so that
// trial-level parallelism never changes which numbers a trial sees.
[[nodiscard]] Rng stream(std::uint64_t seed, std::uint64_t index, std::uint64_t purpose = 0);

// One increment over time dt of the stable law with exponent
// |scale xi|^alpha (1 - i beta sgn(xi) tan(pi alpha / 2)).
[[nodiscard]] double sample_stable_increment(double alpha, double beta, double scale, double dt, Rng& rng);
// Positive stable variate with Laplace transform exp(-lambda^a), 0 < a < 1.
[[nodiscard]] double sample_positive_stable(double a, Rng& rng);

struct Path {
    int dim = 1;
    std::vector<double> coords;  // (n_steps + 1) x dim, row-major
    [[nodiscard]] std::size_t size() const { return coords.size() / dim; }
    [[nodiscard]] std::span<const double> at(std::size_t k) const { return {coords.data() + k * dim, std::size_t(dim)}; }
    void write_csv(std::ostream& os, double dt) const;  // t,x1,...,xd
};

// Exponent (scale |xi|)^alpha, started at the origin, sampled at T k / n_steps.
// d = 1 uses the symmetric stable sampler; d >= 2 with alpha < 2 subordinates
// Brownian motion by an (alpha/2)-stable subordinator.
[[nodiscard]] Path sample_isotropic_stable_path(double alpha, int d, double T, int n_steps, Rng& rng,
                                                double scale = 1.0);

// Fraction of trials in which the additive field X_1(t_1) + ... + X_N(t_N)
// on the uniform grid [0, T]^N comes within epsilon of the target (each
// atom counts as its cell when the target records one). N <= 2.
[[nodiscard]] MCEstimate hitting_frequency(const StableSystem& sys, const AtomicMeasure& target, const MCConfig& cfg,
                                           Exec exec = Exec::Parallel);
[[nodiscard]] MCEstimate hitting_frequency(const StableSystem& sys, const SetDiscretization& target,
                                           const MCConfig& cfg, Exec exec = Exec::Parallel);
// Same trials for every radius (common random numbers): frequencies are
// nonincreasing as epsilon shrinks.
[[nodiscard]] std::vector<MCEstimate> hitting_profile(const StableSystem& sys, const AtomicMeasure& target,
                                                      const MCConfig& cfg, const std::vector<double>& epsilons,
                                                      Exec exec = Exec::Parallel);

// Fraction of trials with min_(s,t) |X_1(s) - X_2(t)| < epsilon, where X_2
// starts at (1, 0, ..., 0).
[[nodiscard]] MCEstimate intersection_frequency(double alpha1, double alpha2, int d, const MCConfig& cfg,
                                                Exec exec = Exec::Parallel);
[[nodiscard]] std::vector<MCEstimate> intersection_profile(double alpha1, double alpha2, int d, const MCConfig& cfg,
                                                           const std::vector<double>& epsilons,
                                                           Exec exec = Exec::Parallel);
// min over pairs of |a_i - b_j|, capped at `radius`: a spatial hash with
// cells of width `radius`, and the quadratic scan it must agree with.
[[nodiscard]] double min_pair_distance(const Path& a, const Path& b, double radius);
[[nodiscard]] double min_pair_distance_bruteforce(const Path& a, const Path& b, double radius);

// Least-squares slope of log(occupied boxes) against log(1 / scale). A cloud
// with a single distinct point returns 0.
[[nodiscard]] double box_dimension_estimate(int dim, std::span<const double> coords, const std::vector<double>& scales);
// T^(1/alpha) 2^-k for k = 8..15.
[[nodiscard]] std::vector<double> range_box_scales(double alpha, double T);

struct GaussianDensity {
    double mean = 0.0;
    double sd = 1.0;
    double mass = 1.0;
    [[nodiscard]] double operator()(double x) const;
};

struct SojournConfig {
    int trials = 10000;
    double time_horizon = 16.0;  // two-sided time window [-T, T]
    double dt = 0.01;
    double half_width = 40.0;  // starting points uniform on [-L, L]
    int strata = 16;           // starting points per path
    std::uint64_t seed = 1;

    void validate() const;
};

struct SojournEstimate {
    MCEstimate first;   // int E[Sf(x)] dx
    MCEstimate second;  // int E[Sf(x)^2] dx
};

// S f(x) = (1/2) int f(x + X(t)) e^-|t| dt over two-sided time, X(t) = -X'(-t)
// for t < 0, for the symmetric 1D stable exponent |xi|^alpha.
[[nodiscard]] SojournEstimate sojourn_mc(double alpha, const GaussianDensity& f, const SojournConfig& cfg,
                                         Exec exec = Exec::Parallel);

}  // namespace levypot
