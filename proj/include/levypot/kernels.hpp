#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levypot/common.hpp"
#include "levypot/exponents.hpp"
#include "levypot/quadrature.hpp"

namespace levypot {

using PointFn = std::function<double(std::span<const double>)>;
using CellAverageFn = std::function<double(std::span<const double> cell)>;

// A gauge kappa: R^d -> [0, inf], finite off the origin.
struct Kernel {
    int dim = 1;
    std::string name;
    PointFn eval;
    PointFn fourier;  // empty when no closed form is known
    bool radial = false;
    // kappa(x) ~ |x|^origin_exponent near 0 (0 for bounded kernels).
    double origin_exponent = 0.0;
    // kappa_hat(xi) ~ |xi|^fourier_origin_exponent near 0.
    double fourier_origin_exponent = 0.0;
    // Mean of kappa over a cell centred at the origin; when empty the
    // generic numeric average is used.
    CellAverageFn cell_average;

    [[nodiscard]] double operator()(std::span<const double> x) const { return eval(x); }
    [[nodiscard]] bool has_fourier() const { return static_cast<bool>(fourier); }
};

// |x|^(alpha - d) with transform c_{d,alpha} |xi|^-alpha; +inf at 0.
[[nodiscard]] Kernel riesz_kernel(int dim, double alpha);
[[nodiscard]] Kernel constant_kernel(int dim, double value);
// exp(-|x|^2 / (2 width^2)); transform (2 pi)^(d/2) width^d exp(-width^2 |xi|^2 / 2).
[[nodiscard]] Kernel gaussian_kernel(int dim, double width);
// exp(-rate |x|) in d = 1; transform 2 rate / (rate^2 + xi^2).
[[nodiscard]] Kernel exponential_kernel(double rate);

// Mean of the kernel over an axis-aligned cell of the given widths centred
// at the origin. Uses the kernel's own formula when present; otherwise a
// ball of equal volume for radial kernels, or a direct average in d = 1.
[[nodiscard]] double cell_average(const Kernel& k, std::span<const double> cell);

// Lambda(z) from its closed form; requires Re z >= 0.
[[nodiscard]] double lambda_closed(Complex z);
// Lambda(z) from the defining double integral over [-T, T]^2, T = quad.r_max.
// Throws NonConvergence when the truncated mass exceeds quad.rel_tol.
[[nodiscard]] double lambda_bruteforce(Complex z, const QuadratureSpec& quad);

struct LambdaRow {
    Complex z;
    double closed = 0.0;
    double brute = 0.0;
    double upper = 0.0;            // 4 Re(1 / (1 + z))
    double sector_c = 0.0;         // |Im z| / (1 + Re z)
    bool sector = false;           // sector_c < sqrt(2)
    double lower = 0.0;            // 2 (2 - c^2) Re(1 / (1 + z)) at c = sector_c
    double lower_corrected = 0.0;  // 2 min(1, 2 - c^2) Re(1 / (1 + z))
};

// Re z in {0, 1.25, 2.5, 3.75, 5} x Im z in {-5, -2, 0.5, 3}.
[[nodiscard]] std::vector<Complex> default_lambda_grid();
// Brute force with T = 30 unless quad says otherwise.
[[nodiscard]] LambdaRow lambda_row(Complex z, const QuadratureSpec& quad);
[[nodiscard]] QuadratureSpec lambda_quadrature();

// c_{d,alpha} in kappa_alpha_hat = c kappa_{d-alpha}, calibrated so the
// real-side and Fourier-side Riesz energies of a Gaussian agree.
[[nodiscard]] double riesz_constant(int dim, double alpha);

// Symmetrized one-potential density v with v_hat = K_Psi (or, unsymmetrized,
// the density u of a single one-dimensional process).
class PotentialDensity {
public:
    PotentialDensity(ExponentVector source, QuadratureSpec quad, bool symmetrized = true);

    [[nodiscard]] double operator()(std::span<const double> x) const;
    [[nodiscard]] double at_radius(double r) const;  // symmetrized only
    [[nodiscard]] bool finite_at_origin() const;
    [[nodiscard]] int dim() const noexcept { return source_.dim(); }
    [[nodiscard]] const ExponentVector& source() const noexcept { return source_; }
    [[nodiscard]] const QuadratureSpec& quadrature() const noexcept { return quad_; }
    [[nodiscard]] bool symmetrized() const noexcept { return symmetrized_; }
    // Mean of v over [-h/2, h/2] (d = 1), from (1/pi) int K(xi) sinc(xi h / 2).
    [[nodiscard]] double cell_average_1d(double h) const;

private:
    double signed_1d(double x) const;

    ExponentVector source_;
    QuadratureSpec quad_;
    bool symmetrized_;
};

[[nodiscard]] double potential_density_v(const PotentialDensity& pd, std::span<const double> x);

// Gauge backed by v. Values are memoized on |x| quantized to 1e-12 so that
// repeated pair distances are computed once and results do not depend on
// evaluation order.
[[nodiscard]] Kernel potential_kernel(const PotentialDensity& pd);

// True iff k(0) >= k(x) - tol for every sample. Requires a known transform.
[[nodiscard]] bool kernel_sup_check(const Kernel& k, const std::vector<Point>& samples, double tol = 1e-9);

}  // namespace levypot
