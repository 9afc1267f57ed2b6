#include "levypot/kernels.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace levypot {

namespace {

double radius_of(std::span<const double> x) { return norm(x); }

Point along_axis(int d, double r) {
    Point x(d, 0.0);
    x[0] = r;
    return x;
}

}  // namespace

Kernel riesz_kernel(int dim, double alpha) {
    require(dim >= 1, "dim", "must be positive");
    require(alpha > 0.0 && alpha < dim, "alpha", "Riesz index must lie in (0, d)");
    const double c = riesz_constant(dim, alpha);
    const double p = alpha - dim;
    Kernel k;
    k.dim = dim;
    k.name = "riesz";
    k.radial = true;
    k.origin_exponent = p;
    k.fourier_origin_exponent = -alpha;
    k.eval = [p](std::span<const double> x) {
        const double r = radius_of(x);
        return r == 0.0 ? kInf : std::pow(r, p);
    };
    k.fourier = [c, alpha](std::span<const double> xi) {
        const double r = radius_of(xi);
        return r == 0.0 ? kInf : c * std::pow(r, -alpha);
    };
    if (dim == 1) {
        // mean of |u|^-s over [-h/2, h/2]
        const double s = -p;
        k.cell_average = [s](std::span<const double> cell) {
            return std::pow(0.5 * cell[0], -s) / (1.0 - s);
        };
    }
    return k;
}

Kernel constant_kernel(int dim, double value) {
    require(value >= 0.0, "value", "must be nonnegative");
    Kernel k;
    k.dim = dim;
    k.name = "constant";
    k.radial = true;
    k.eval = [value](std::span<const double>) { return value; };
    k.cell_average = [value](std::span<const double>) { return value; };
    return k;
}

Kernel gaussian_kernel(int dim, double width) {
    require(width > 0.0, "width", "must be positive");
    Kernel k;
    k.dim = dim;
    k.name = "gaussian";
    k.radial = true;
    const double w2 = width * width;
    const double amp = std::pow(2.0 * kPi * w2, 0.5 * dim);
    k.eval = [w2](std::span<const double> x) { return std::exp(-dot(x, x) / (2.0 * w2)); };
    k.fourier = [w2, amp](std::span<const double> xi) { return amp * std::exp(-0.5 * w2 * dot(xi, xi)); };
    return k;
}

Kernel exponential_kernel(double rate) {
    require(rate > 0.0, "rate", "must be positive");
    Kernel k;
    k.dim = 1;
    k.name = "exponential";
    k.radial = true;
    k.eval = [rate](std::span<const double> x) { return std::exp(-rate * std::abs(x[0])); };
    k.fourier = [rate](std::span<const double> xi) { return 2.0 * rate / (rate * rate + xi[0] * xi[0]); };
    return k;
}

double cell_average(const Kernel& k, std::span<const double> cell) {
    require(static_cast<int>(cell.size()) == k.dim, "cell", "one width per axis");
    if (k.cell_average) return k.cell_average(cell);
    const int d = k.dim;
    if (k.radial || d == 1) {
        double volume = 1.0;
        for (double h : cell) volume *= h;
        // ball (interval in d = 1) of the same volume
        const double unit_ball = std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
        const double rho = std::pow(volume / unit_ball, 1.0 / d);
        auto profile = [&](double r) { return k.eval(along_axis(d, r)) * std::pow(r, d - 1); };
        const auto res = integrate_power_origin(profile, rho, k.origin_exponent + d - 1.0, 1e-10);
        double avg = d / std::pow(rho, d) * res.value;
        if (d == 1 && !k.radial) {
            auto neg = [&](double r) { return k.eval(along_axis(1, -r)); };
            const auto res2 = integrate_power_origin(neg, rho, k.origin_exponent, 1e-10);
            avg = 0.5 * (avg + res2.value / rho);
        }
        return avg;
    }
    require(k.origin_exponent >= 0.0, "kernel", "singular non-radial kernels have no numeric cell average");
    std::vector<double> lo(d), hi(d);
    for (int a = 0; a < d; ++a) {
        lo[a] = -0.5 * cell[a];
        hi[a] = 0.5 * cell[a];
    }
    double volume = 1.0;
    for (double h : cell) volume *= h;
    return integrate_box(k.eval, lo, hi, 8) / volume;
}

double lambda_closed(Complex z) {
    require(z.real() >= 0.0, "z", "Lambda requires Re z >= 0");
    const Complex w = 1.0 + z;
    const double a = 1.0 + z.real();
    const double b = z.imag();
    const double m2 = std::norm(w);
    return 2.0 * a / m2 + 2.0 * (a * a - b * b) / (m2 * m2);
}

double lambda_bruteforce(Complex z, const QuadratureSpec& quad) {
    require(z.real() >= 0.0, "z", "Lambda requires Re z >= 0");
    quad.validate();
    const double T = quad.r_max;
    const int panels = quad.n_nodes;
    constexpr int order = 10;
    const Complex zc = std::conj(z);

    auto integrand = [&](double t, double s) -> Complex {
        const double r = t - s;
        const Complex sigma = r >= 0.0 ? z : zc;
        return std::exp(-std::abs(t) - std::abs(s) - std::abs(r) * sigma);
    };
    const GaussRule& rule = gauss_legendre(order);
    auto segment = [&](auto&& f, double a, double b, int n) {
        Complex total{0.0, 0.0};
        if (b <= a) return total;
        const double h = (b - a) / n;
        for (int p = 0; p < n; ++p) {
            const double mid = a + (p + 0.5) * h;
            Complex s{0.0, 0.0};
            for (int i = 0; i < order; ++i) s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
            total += 0.5 * h * s;
        }
        return total;
    };
    // inner integral over t with breakpoints at 0 and s, where the integrand kinks
    auto inner = [&](double s) {
        std::array<double, 4> cuts{-T, std::min(0.0, s), std::max(0.0, s), T};
        Complex total{0.0, 0.0};
        for (int k = 0; k < 3; ++k) {
            const double len = cuts[k + 1] - cuts[k];
            const int n = std::max(1, static_cast<int>(std::ceil(panels * len / T)));
            total += segment([&](double t) { return integrand(t, s); }, cuts[k], cuts[k + 1], n);
        }
        return total;
    };
    const Complex value = segment(inner, -T, 0.0, panels) + segment(inner, 0.0, T, panels);

    // everything outside the square is bounded by the mass of exp(-|t|-|s|) there
    const double outside = 4.0 - 4.0 * (1.0 - std::exp(-T)) * (1.0 - std::exp(-T));
    if (outside > quad.rel_tol * std::abs(value.real()))
        throw NonConvergence("lambda_bruteforce: truncated mass " + std::to_string(outside) +
                             " exceeds tolerance; increase r_max");
    return value.real();
}

std::vector<Complex> default_lambda_grid() {
    std::vector<Complex> out;
    for (double re : {0.0, 1.25, 2.5, 3.75, 5.0})
        for (double im : {-5.0, -2.0, 0.5, 3.0}) out.emplace_back(re, im);
    return out;
}

QuadratureSpec lambda_quadrature() {
    QuadratureSpec q;
    q.r_max = 30.0;
    q.n_nodes = 96;
    q.rel_tol = 1e-8;
    return q;
}

LambdaRow lambda_row(Complex z, const QuadratureSpec& quad) {
    LambdaRow row;
    row.z = z;
    row.closed = lambda_closed(z);
    row.brute = lambda_bruteforce(z, quad);
    const double re = std::real(1.0 / (1.0 + z));
    row.upper = 4.0 * re;
    row.sector_c = std::abs(z.imag()) / (1.0 + z.real());
    row.sector = row.sector_c < std::sqrt(2.0);
    const double c2 = row.sector_c * row.sector_c;
    row.lower = row.sector ? 2.0 * (2.0 - c2) * re : 0.0;
    row.lower_corrected = row.sector ? 2.0 * std::min(1.0, 2.0 - c2) * re : 0.0;
    return row;
}

double riesz_constant(int dim, double alpha) {
    require(dim >= 1, "dim", "must be positive");
    require(alpha > 0.0 && alpha < dim, "alpha", "must lie in (0, d)");
    // Standard Gaussian mu: |mu_hat|^2 = exp(-|xi|^2) and x - y ~ N(0, 2 I).
    // Real side: E|Z|^(alpha-d) = |S| (4 pi)^(-d/2) int r^(alpha-1) e^(-r^2/4) dr.
    // Fourier side without the constant: (2 pi)^-d |S| int r^(d-1-alpha) e^(-r^2) dr.
    auto radial = [](double p, double a) {
        auto f = [p, a](double r) { return std::pow(r, p) * std::exp(-a * r * r); };
        const double cut = 12.0 / std::sqrt(a);
        const auto head = integrate_power_origin(f, cut, p, 1e-13);
        const auto tail = integrate_adaptive(f, cut, 4.0 * cut, 1e-13);
        return head.value + tail.value;
    };
    const double real_side = radial(alpha - 1.0, 0.25) / std::pow(4.0 * kPi, 0.5 * dim);
    const double fourier_side = radial(dim - 1.0 - alpha, 1.0) / std::pow(2.0 * kPi, dim);
    return real_side / fourier_side;
}

PotentialDensity::PotentialDensity(ExponentVector source, QuadratureSpec quad, bool symmetrized)
    : source_(std::move(source)), quad_(quad), symmetrized_(symmetrized) {
    quad_.validate();
    const int d = source_.dim();
    require(d == 1 || d == 3, "dim", "numeric inversion supports d = 1 and d = 3");
    if (d == 3) require(source_.is_isotropic(), "components", "d = 3 inversion needs isotropic exponents");
    if (!symmetrized_)
        require(source_.size() == 1 && d == 1, "symmetrized",
                "unsymmetrized densities are supported for a single one-dimensional process");
    for (const auto& c : source_.components()) {
        if (const auto* s = std::get_if<Skewed1DStable>(&c.family()))
            require(s->alpha != 1.0 || s->beta == 0.0, "alpha", "alpha = 1 skewed inversion unsupported");
    }
}

bool PotentialDensity::finite_at_origin() const {
    const auto decay = source_.kernel_decay();
    return decay && *decay > dim();
}

double PotentialDensity::at_radius(double r) const {
    const int d = dim();
    const double tol = quad_.rel_tol;
    auto K = [this](double xi) { return k_psi_radial(source_, xi); };
    if (r == 0.0) {
        if (!finite_at_origin()) return kInf;
        auto f = [&](double xi) { return std::pow(xi, d - 1) * K(xi); };
        const auto head = integrate_adaptive(f, 0.0, 1.0, tol * 0.1);
        const auto tail = integrate_power_tail(f, 1.0, quad_.r_max, TailPolicy::PowerLawExtrapolate, tol);
        if (!tail.converged && !std::isfinite(tail.error))
            throw NonConvergence("potential density: tail of K_Psi does not decay");
        const double integral = head.value + tail.value;
        return d == 1 ? integral / kPi : integral / (2.0 * kPi * kPi);
    }
    IntegralResult res;
    if (d == 1) {
        res = integrate_oscillatory(K, r, Trig::Cos, tol, 8.0);
        res.value /= kPi;
    } else {
        res = integrate_oscillatory([&](double xi) { return xi * K(xi); }, r, Trig::Sin, tol, 8.0);
        res.value /= 2.0 * kPi * kPi * r;
    }
    if (!res.converged && res.error > 1e3 * tol * std::abs(res.value) + 1e-12)
        throw NonConvergence("potential density: oscillatory quadrature did not converge at r = " +
                             std::to_string(r));
    return res.value;
}

double PotentialDensity::signed_1d(double x) const {
    if (symmetrized_ || x == 0.0) return at_radius(std::abs(x));
    // u(x) = (1/pi) int_0^inf [cos(xi x) Re R + sin(xi x) Im R],  R = 1/(1+Psi)
    const LevyExponent& psi = source_[0];
    auto R = [&psi](double xi) { return 1.0 / (1.0 + psi.radial(xi)); };
    const double w = std::abs(x);
    const double sgn = x > 0.0 ? 1.0 : -1.0;
    const auto c = integrate_oscillatory([&](double xi) { return R(xi).real(); }, w, Trig::Cos, quad_.rel_tol, 8.0);
    const auto s = integrate_oscillatory([&](double xi) { return R(xi).imag(); }, w, Trig::Sin, quad_.rel_tol, 8.0);
    return (c.value + sgn * s.value) / kPi;
}

double PotentialDensity::operator()(std::span<const double> x) const {
    require(static_cast<int>(x.size()) == dim(), "x", "dimension mismatch");
    if (dim() == 1) return signed_1d(x[0]);
    return at_radius(norm(x));
}

double PotentialDensity::cell_average_1d(double h) const {
    require(dim() == 1, "dim", "one-dimensional cells only");
    require(h > 0.0, "h", "must be positive");
    // (1/h) int_{-h/2}^{h/2} v = (1/pi) int_0^inf K(xi) sin(xi h/2) / (xi h/2) dxi
    auto g = [&](double xi) { return k_psi_radial(source_, xi) / (0.5 * h * xi); };
    const auto res = integrate_oscillatory(
        [&](double xi) { return xi == 0.0 ? k_psi_radial(source_, 0.0) * 0.0 : g(xi); }, 0.5 * h, Trig::Sin,
        quad_.rel_tol, 8.0);
    return res.value / kPi;
}

double potential_density_v(const PotentialDensity& pd, std::span<const double> x) { return pd(x); }

Kernel potential_kernel(const PotentialDensity& pd) {
    require(pd.symmetrized(), "symmetrized", "gauges use the symmetrized density");
    struct Memo {
        std::mutex mu;
        std::map<long long, double> values;
    };
    auto memo = std::make_shared<Memo>();
    auto density = std::make_shared<PotentialDensity>(pd);
    constexpr double kQuantum = 1e-12;

    Kernel k;
    k.dim = pd.dim();
    k.name = "potential";
    k.radial = true;
    k.origin_exponent = 0.0;
    if (!pd.finite_at_origin()) {
        const auto decay = pd.source().kernel_decay();
        // v(x) ~ |x|^(p-d) near 0 when the decay p of K_Psi is below d
        k.origin_exponent = decay && *decay < pd.dim() ? *decay - pd.dim() : -1e-3;
    }
    k.eval = [memo, density](std::span<const double> x) {
        const double r = norm(x);
        if (r > 1e6) return density->at_radius(r);
        const long long key = std::llround(r / kQuantum);
        {
            std::lock_guard lock(memo->mu);
            if (auto it = memo->values.find(key); it != memo->values.end()) return it->second;
        }
        const double v = density->at_radius(static_cast<double>(key) * kQuantum);
        std::lock_guard lock(memo->mu);
        memo->values.emplace(key, v);
        return v;
    };
    const ExponentVector source = pd.source();
    k.fourier = [source](std::span<const double> xi) { return k_psi(source, xi); };
    if (pd.dim() == 1) k.cell_average = [density](std::span<const double> cell) { return density->cell_average_1d(cell[0]); };
    return k;
}

bool kernel_sup_check(const Kernel& k, const std::vector<Point>& samples, double tol) {
    require(k.has_fourier(), "kernel", "sup check needs a kernel of positive type (known transform)");
    const double at_zero = k.eval(Point(k.dim, 0.0));
    for (const auto& x : samples) {
        require(static_cast<int>(x.size()) == k.dim, "samples", "dimension mismatch");
        if (at_zero < k.eval(x) - tol) return false;
    }
    return true;
}

}  // namespace levypot
