#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "levypot/common.hpp"

namespace levypot {

// Psi(xi) = (scale |xi|)^alpha.
struct IsotropicStable {
    double alpha = 2.0;
    double scale = 1.0;
};

// Psi(xi) = diffusivity |xi|^2 / 2.
struct BrownianIsotropic {
    double diffusivity = 1.0;
};

// Psi(xi) = |scale xi|^alpha (1 - i beta sgn(xi) tan(pi alpha / 2)), d = 1,
// alpha != 1 when beta != 0.
struct Skewed1DStable {
    double alpha = 1.5;
    double beta = 0.0;
    double scale = 1.0;
};

// X(t) = b t, so Psi(xi) = -i b.xi.
struct PureDrift {
    Point b;
};

class LevyExponent;

// Independent sum: Psi = sum of the parts.
struct SumOf {
    std::vector<LevyExponent> parts;
};

// Large-|xi| growth rates of Re Psi and |Psi|; the kernel
// Re(1/(1+Psi)) then decays like |xi|^-(2 abs_rate - re_rate).
struct TailRates {
    double re_rate = 0.0;
    double abs_rate = 0.0;
    [[nodiscard]] double kernel_decay() const { return 2.0 * abs_rate - re_rate; }
};

class LevyExponent {
public:
    using Family = std::variant<IsotropicStable, BrownianIsotropic, Skewed1DStable, PureDrift, SumOf>;

    LevyExponent(Family family, int dim);

    [[nodiscard]] Complex operator()(std::span<const double> xi) const;
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] const Family& family() const noexcept { return family_; }

    // True when Psi depends on |xi| only (stable, Brownian and sums of them).
    [[nodiscard]] bool is_isotropic() const;
    // Psi along a ray: Psi(r e_1). Meaningful for isotropic exponents and d = 1.
    [[nodiscard]] Complex radial(double r) const;
    // Known in closed form for every family in d = 1 and for isotropic ones in
    // any dimension; empty otherwise.
    [[nodiscard]] std::optional<TailRates> tail_rates() const;
    [[nodiscard]] bool is_symmetric() const;

private:
    Family family_;
    int dim_;
};

[[nodiscard]] LevyExponent isotropic_stable(int dim, double alpha, double scale = 1.0);
[[nodiscard]] LevyExponent brownian(int dim, double diffusivity = 1.0);
[[nodiscard]] LevyExponent skewed_stable(double alpha, double beta, double scale = 1.0);
[[nodiscard]] LevyExponent pure_drift(Point b);
[[nodiscard]] LevyExponent sum_of(std::vector<LevyExponent> parts);

// The N-tuple (Psi_1, ..., Psi_N) of an additive process.
class ExponentVector {
public:
    explicit ExponentVector(std::vector<LevyExponent> components);

    [[nodiscard]] std::size_t size() const noexcept { return components_.size(); }
    [[nodiscard]] int dim() const noexcept { return components_.front().dim(); }
    [[nodiscard]] const LevyExponent& operator[](std::size_t j) const { return components_[j]; }
    [[nodiscard]] const std::vector<LevyExponent>& components() const noexcept { return components_; }

    [[nodiscard]] bool is_isotropic() const;
    // Decay exponent p of K_Psi(xi) ~ |xi|^-p when every factor is analytic.
    [[nodiscard]] std::optional<double> kernel_decay() const;

private:
    std::vector<LevyExponent> components_;
};

[[nodiscard]] Complex eval_exponent(const LevyExponent& exp, std::span<const double> xi);

// K_Psi(xi) = prod_j Re(1 / (1 + Psi_j(xi))).
[[nodiscard]] double k_psi(const ExponentVector& psi, std::span<const double> xi);
// The same product along a ray, for isotropic vectors (or d = 1).
[[nodiscard]] double k_psi_radial(const ExponentVector& psi, double r);

// max over the grid of |Im Psi| / (1 + Re Psi). The sector condition with
// c < sqrt(2) holds on the grid iff the result is below sqrt(2).
[[nodiscard]] double sector_constant(const LevyExponent& exp, const std::vector<Point>& grid);

}  // namespace levypot
