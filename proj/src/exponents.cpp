#include "levypot/exponents.hpp"

#include <algorithm>

namespace levypot {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

void validate_family(const LevyExponent::Family& family, int dim) {
    std::visit(
        Overloaded{
            [](const IsotropicStable& f) {
                require(f.alpha > 0.0 && f.alpha <= 2.0, "alpha", "must lie in (0, 2]");
                require(f.scale > 0.0, "scale", "must be positive");
            },
            [](const BrownianIsotropic& f) {
                require(f.diffusivity > 0.0, "diffusivity", "must be positive");
            },
            [dim](const Skewed1DStable& f) {
                require(dim == 1, "dim", "skewed stable exponents are one-dimensional");
                require(f.alpha > 0.0 && f.alpha <= 2.0, "alpha", "must lie in (0, 2]");
                require(f.beta >= -1.0 && f.beta <= 1.0, "beta", "must lie in [-1, 1]");
                require(f.scale > 0.0, "scale", "must be positive");
                require(!(f.alpha == 1.0 && f.beta != 0.0), "beta",
                        "skewed exponents with alpha = 1 are not supported");
            },
            [dim](const PureDrift& f) {
                require(static_cast<int>(f.b.size()) == dim, "b", "drift length must equal dim");
                for (double x : f.b) require(std::isfinite(x), "b", "must be finite");
            },
            [dim](const SumOf& f) {
                require(!f.parts.empty(), "parts", "a sum needs at least one component");
                for (const auto& p : f.parts) require(p.dim() == dim, "dim", "all parts must share dim");
            },
        },
        family);
}

Complex stable_1d(double alpha, double beta, double scale, double xi) {
    if (xi == 0.0) return {0.0, 0.0};
    const double mag = std::pow(std::abs(scale * xi), alpha);
    if (beta == 0.0 || alpha == 2.0) return {mag, 0.0};
    const double sgn = xi > 0.0 ? 1.0 : -1.0;
    return {mag, -mag * beta * sgn * std::tan(0.5 * kPi * alpha)};
}

}  // namespace

LevyExponent::LevyExponent(Family family, int dim) : family_(std::move(family)), dim_(dim) {
    require(dim >= 1, "dim", "must be positive");
    validate_family(family_, dim_);
}

Complex LevyExponent::operator()(std::span<const double> xi) const {
    require(static_cast<int>(xi.size()) == dim_, "xi", "dimension mismatch with exponent");
    return std::visit(
        Overloaded{
            [&](const IsotropicStable& f) -> Complex {
                const double r = norm(xi);
                return {r == 0.0 ? 0.0 : std::pow(f.scale * r, f.alpha), 0.0};
            },
            [&](const BrownianIsotropic& f) -> Complex { return {0.5 * f.diffusivity * dot(xi, xi), 0.0}; },
            [&](const Skewed1DStable& f) -> Complex { return stable_1d(f.alpha, f.beta, f.scale, xi[0]); },
            [&](const PureDrift& f) -> Complex { return {0.0, -dot(f.b, xi)}; },
            [&](const SumOf& f) -> Complex {
                Complex s{0.0, 0.0};
                for (const auto& p : f.parts) s += p(xi);
                return s;
            },
        },
        family_);
}

bool LevyExponent::is_isotropic() const {
    return std::visit(Overloaded{
                          [](const IsotropicStable&) { return true; },
                          [](const BrownianIsotropic&) { return true; },
                          [](const Skewed1DStable& f) { return f.beta == 0.0; },
                          [](const PureDrift& f) {
                              return std::all_of(f.b.begin(), f.b.end(), [](double x) { return x == 0.0; });
                          },
                          [](const SumOf& f) {
                              return std::all_of(f.parts.begin(), f.parts.end(),
                                                 [](const LevyExponent& p) { return p.is_isotropic(); });
                          },
                      },
                      family_);
}

Complex LevyExponent::radial(double r) const {
    Point xi(dim_, 0.0);
    xi[0] = r;
    return (*this)(xi);
}

std::optional<TailRates> LevyExponent::tail_rates() const {
    if (dim_ != 1 && !is_isotropic()) return std::nullopt;
    return std::visit(
        Overloaded{
            [](const IsotropicStable& f) -> std::optional<TailRates> { return TailRates{f.alpha, f.alpha}; },
            [](const BrownianIsotropic&) -> std::optional<TailRates> { return TailRates{2.0, 2.0}; },
            [](const Skewed1DStable& f) -> std::optional<TailRates> { return TailRates{f.alpha, f.alpha}; },
            [](const PureDrift& f) -> std::optional<TailRates> {
                const bool zero = std::all_of(f.b.begin(), f.b.end(), [](double x) { return x == 0.0; });
                return zero ? TailRates{0.0, 0.0} : TailRates{0.0, 1.0};
            },
            [](const SumOf& f) -> std::optional<TailRates> {
                TailRates out{0.0, 0.0};
                for (const auto& p : f.parts) {
                    auto r = p.tail_rates();
                    if (!r) return std::nullopt;
                    out.re_rate = std::max(out.re_rate, r->re_rate);
                    out.abs_rate = std::max(out.abs_rate, r->abs_rate);
                }
                return out;
            },
        },
        family_);
}

bool LevyExponent::is_symmetric() const {
    return std::visit(Overloaded{
                          [](const IsotropicStable&) { return true; },
                          [](const BrownianIsotropic&) { return true; },
                          [](const Skewed1DStable& f) { return f.beta == 0.0 || f.alpha == 2.0; },
                          [](const PureDrift& f) {
                              return std::all_of(f.b.begin(), f.b.end(), [](double x) { return x == 0.0; });
                          },
                          [](const SumOf& f) {
                              return std::all_of(f.parts.begin(), f.parts.end(),
                                                 [](const LevyExponent& p) { return p.is_symmetric(); });
                          },
                      },
                      family_);
}

LevyExponent isotropic_stable(int dim, double alpha, double scale) {
    return LevyExponent(IsotropicStable{alpha, scale}, dim);
}
LevyExponent brownian(int dim, double diffusivity) {
    return LevyExponent(BrownianIsotropic{diffusivity}, dim);
}
LevyExponent skewed_stable(double alpha, double beta, double scale) {
    return LevyExponent(Skewed1DStable{alpha, beta, scale}, 1);
}
LevyExponent pure_drift(Point b) {
    const int d = static_cast<int>(b.size());
    return LevyExponent(PureDrift{std::move(b)}, d);
}
LevyExponent sum_of(std::vector<LevyExponent> parts) {
    require(!parts.empty(), "parts", "a sum needs at least one component");
    const int d = parts.front().dim();
    return LevyExponent(SumOf{std::move(parts)}, d);
}

ExponentVector::ExponentVector(std::vector<LevyExponent> components) : components_(std::move(components)) {
    require(!components_.empty(), "components", "N must be at least 1");
    const int d = components_.front().dim();
    for (const auto& c : components_) require(c.dim() == d, "components", "all components must share dim");
}

bool ExponentVector::is_isotropic() const {
    return std::all_of(components_.begin(), components_.end(),
                       [](const LevyExponent& c) { return c.is_isotropic(); });
}

std::optional<double> ExponentVector::kernel_decay() const {
    double total = 0.0;
    for (const auto& c : components_) {
        auto r = c.tail_rates();
        if (!r) return std::nullopt;
        total += r->kernel_decay();
    }
    return total;
}

Complex eval_exponent(const LevyExponent& exp, std::span<const double> xi) { return exp(xi); }

namespace {
double resolvent_re(Complex z) {
    const Complex w = 1.0 + z;
    return w.real() / std::norm(w);
}
}  // namespace

double k_psi(const ExponentVector& psi, std::span<const double> xi) {
    double k = 1.0;
    for (const auto& c : psi.components()) k *= resolvent_re(c(xi));
    return k;
}

double k_psi_radial(const ExponentVector& psi, double r) {
    double k = 1.0;
    for (const auto& c : psi.components()) k *= resolvent_re(c.radial(r));
    return k;
}

double sector_constant(const LevyExponent& exp, const std::vector<Point>& grid) {
    require(!grid.empty(), "grid", "must be nonempty");
    double c = 0.0;
    for (const auto& xi : grid) {
        const Complex z = exp(xi);
        c = std::max(c, std::abs(z.imag()) / (1.0 + z.real()));
    }
    return c;
}

}  // namespace levypot
