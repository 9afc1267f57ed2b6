#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levypot/classify.hpp"
#include "levypot/common.hpp"
#include "levypot/exponents.hpp"
#include "levypot/kernels.hpp"
#include "levypot/measures.hpp"
#include "levypot/quadrature.hpp"

namespace levypot {

enum class DiagonalPolicy { Regularized, Infinite };

// Symmetric n x n matrix of gauge values between atoms, row-major.
struct EnergyMatrix {
    std::size_t n = 0;
    std::vector<double> entries;
    std::string source;
    DiagonalPolicy policy = DiagonalPolicy::Regularized;
    AtomicMeasure atoms = AtomicMeasure::dirac({0.0});

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

// entries[i][j] = (kappa(x_i - x_j) + kappa(x_j - x_i)) / 2 for i != j. The
// diagonal is the cell average of the gauge (Regularized) or kappa(0)
// (Infinite). `cell` overrides the cell recorded on the atoms.
[[nodiscard]] EnergyMatrix assemble_matrix(const Kernel& gauge, const AtomicMeasure& atoms, DiagonalPolicy policy,
                                           std::optional<Point> cell = std::nullopt, Exec exec = Exec::Parallel);
[[nodiscard]] EnergyMatrix assemble_matrix(const Kernel& gauge, const SetDiscretization& disc, DiagonalPolicy policy,
                                           Exec exec = Exec::Parallel);
// Gauge v, the symmetrized potential density of the exponent vector.
[[nodiscard]] EnergyMatrix assemble_matrix(const ExponentVector& psi, const SetDiscretization& disc,
                                           const QuadratureSpec& quad, DiagonalPolicy policy,
                                           Exec exec = Exec::Parallel);

struct SolverOptions {
    double tol = 1e-8;  // relative Frank-Wolfe gap
    int max_iter = 50000;
    std::vector<double> initial;  // empty: uniform
    int resync_every = 256;       // recompute the gradient from scratch
};

struct EquilibriumResult {
    std::vector<double> weights;
    double energy = 0.0;
    double capacity = 0.0;
    int iterations = 0;
    double fw_gap = 0.0;  // relative: (E - min_i (Mw)_i) / E
    bool converged = false;
    std::vector<double> energy_history;  // energy after each iteration, starting value first
};

// Away-step Frank-Wolfe with exact line search on w^T M w over the simplex.
[[nodiscard]] EquilibriumResult solve_equilibrium(const EnergyMatrix& m, const SolverOptions& opts = {});

// C_s with gauge |x - y|^-s, the Riesz kernel of index d - s.
[[nodiscard]] EquilibriumResult bessel_riesz_capacity(const SetDiscretization& disc, double s,
                                                      const SolverOptions& opts = {}, Exec exec = Exec::Parallel);

enum class TriState { True, False, Inconclusive };
[[nodiscard]] std::string to_string(TriState t);

struct PointCapacity {
    TriState positive = TriState::Inconclusive;
    std::string method;  // "tail-rule" or "probe"
    std::optional<ConvergenceVerdict> evidence;
};

// cap_Psi({0}) > 0 iff K_Psi is integrable: decided by tail exponents when
// known, otherwise by the numeric probe.
[[nodiscard]] PointCapacity point_capacity_test(const ExponentVector& psi, const ProbePlan& plan = {});

struct FlatCheck {
    EquilibriumResult result;
    double tv_distance = 0.0;  // (1/2) sum |w_i - 1/n|
    std::size_t cells = 0;
    bool flat = false;  // tv_distance < 0.05
};

// Equilibrium of the potential-density gauge on a uniform grid, compared to
// normalized Lebesgue measure.
[[nodiscard]] FlatCheck flat_equilibrium_check(const ExponentVector& psi, const CubeGrid& grid,
                                               const QuadratureSpec& quad, const SolverOptions& opts = {},
                                               Exec exec = Exec::Parallel);

}  // namespace levypot
