#pragma once

#include <functional>

#include "levypot/common.hpp"
#include "levypot/exponents.hpp"
#include "levypot/kernels.hpp"
#include "levypot/measures.hpp"
#include "levypot/quadrature.hpp"

namespace levypot {

struct EnergyReport {
    double value = 0.0;          // in [0, inf]
    double tail_estimate = 0.0;  // error estimate of the extrapolated tail
    bool converged = true;
};

// How atom pairs at the same location are treated in atomic double sums.
//   Exact: use kappa(0), so an infinite gauge gives an infinite energy.
//   Drop: skip coincident pairs (off-diagonal sum only).
//   CellAverage: replace kappa(0) by the mean of kappa over the atom's cell,
//                which approximates the continuum energy of the smeared measure.
enum class DiagonalMode { Exact, Drop, CellAverage };

// E_kappa(mu, nu) = sum_ij w_i v_j (kappa(x_i - y_j) + kappa(y_j - x_i)) / 2.
[[nodiscard]] double mutual_energy_real(const Kernel& k, const AtomicMeasure& mu, const AtomicMeasure& nu,
                                        DiagonalMode mode = DiagonalMode::Exact, Exec exec = Exec::Parallel);

// Which transform of mu enters |mu_hat|^2.
enum class Smoothing { Atomic, Cell };

// I_Psi(mu) = (2 pi)^-d int |mu_hat|^2 K_Psi. An atomic mu has |mu_hat|^2 with
// a positive mean, so the energy is infinite exactly when K_Psi is not
// integrable; that case is decided from tail exponents without quadrature.
[[nodiscard]] EnergyReport energy_fourier(const ExponentVector& psi, const AtomicMeasure& mu,
                                          const QuadratureSpec& quad, Smoothing smoothing = Smoothing::Atomic,
                                          Exec exec = Exec::Parallel);

using SpectrumFn = std::function<Complex(std::span<const double>)>;

// I_Psi(f) for a function given through its transform f_hat. `bandwidth`
// bounds the oscillation rate of |f_hat|^2 (0 for non-oscillating).
[[nodiscard]] EnergyReport energy_fourier_fn(const ExponentVector& psi, const SpectrumFn& fhat,
                                             const QuadratureSpec& quad, double bandwidth = 0.0,
                                             Exec exec = Exec::Parallel);

struct IdentityCheck {
    double real_side = 0.0;
    double fourier_side = 0.0;
    double rel_gap = 0.0;
    bool converged = true;
};

// E_{kappa * nu}(mu) against (2 pi)^-d int kappa_hat Re(nu_hat) |mu_hat|^2.
[[nodiscard]] IdentityCheck energy_identity_check(const Kernel& k, const AtomicMeasure& nu, const AtomicMeasure& mu,
                                                  const QuadratureSpec& quad, Exec exec = Exec::Parallel);

// Riesz energy of mu with gauge |x|^-s (s = d - alpha) on the real side,
// against c_{d,alpha} (2 pi)^-d int |xi|^-alpha |mu_hat|^2. The real side
// uses `mode` for coincident atoms; the Fourier side uses the cell-smoothed
// transform when mu records a cell.
[[nodiscard]] IdentityCheck riesz_identity_check(double s, const AtomicMeasure& mu, const QuadratureSpec& quad,
                                                 DiagonalMode mode = DiagonalMode::CellAverage,
                                                 Exec exec = Exec::Parallel);

// 4^-N (2 pi)^-d int |f_hat|^2 prod_j Lambda(Psi_j) for a one-dimensional
// source (d = 1) or an isotropic radial f_hat.
[[nodiscard]] EnergyReport sojourn_second_moment(const ExponentVector& psi, const SpectrumFn& fhat,
                                                 const QuadratureSpec& quad, double bandwidth = 0.0,
                                                 Exec exec = Exec::Parallel);

struct SojournBounds {
    double upper = 0.0;           // I_Psi(f)
    double lower = 0.0;            // ((2 - c^2) / 2)^N I_Psi(f), or 0 when c >= sqrt(2)
    double lower_corrected = 0.0;  // (min(1, 2 - c^2) / 2)^N I_Psi(f), or 0 when c >= sqrt(2)
    double sector_constant = 0.0;  // largest c over the components
};

// `sector_grid` feeds sector_constant for every component.
[[nodiscard]] SojournBounds sojourn_bounds(const ExponentVector& psi, const SpectrumFn& fhat,
                                           const QuadratureSpec& quad, const std::vector<Point>& sector_grid,
                                           double bandwidth = 0.0);

// (2 pi)^-d int g over R^d for an integrand that depends on |xi| only through
// `profile` (already angle-averaged for d >= 2). `origin_exponent` is the
// power of the profile at 0. Exposed for tests and the classifier.
[[nodiscard]] EnergyReport spectral_radial(const Fn1& profile, int dim, double origin_exponent, double bandwidth,
                                           const QuadratureSpec& quad, Exec exec = Exec::Parallel);

}  // namespace levypot
