#include "levypot/classify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace levypot {

void StableSystem::validate() const {
    require(!alphas.empty(), "alphas", "need at least one process");
    require(d >= 1, "dim", "must be positive");
    for (double a : alphas) require(a > 0.0 && a <= 2.0, "alpha", "each index must lie in (0, 2]");
}

double StableSystem::alpha_sum() const { return std::accumulate(alphas.begin(), alphas.end(), 0.0); }

namespace {

// sum alpha - level, with rounding noise from summing decimal indices
// (0.1 + 0.2 and the like) snapped to an exact zero.
double excess_over(const StableSystem& sys, double level) {
    const double e = sys.alpha_sum() - level;
    return std::abs(e) <= 1e-12 * std::max(1.0, level) ? 0.0 : e;
}

}  // namespace

bool range_has_positive_measure(const StableSystem& sys) {
    sys.validate();
    return excess_over(sys, sys.d) > 0.0;
}

double range_dimension(const StableSystem& sys) {
    sys.validate();
    return std::min<double>(sys.d, sys.alpha_sum());
}

bool intersections_exist(const StableSystem& sys) {
    sys.validate();
    return excess_over(sys, static_cast<double>(sys.n() - 1) * sys.d) > 0.0;
}

double intersection_dimension(const StableSystem& sys) {
    sys.validate();
    return std::max(0.0, excess_over(sys, static_cast<double>(sys.n() - 1) * sys.d));
}

bool multiple_points_allowed(double alpha, int d, int n) {
    require(alpha > 0.0 && alpha <= 2.0, "alpha", "must lie in (0, 2]");
    require(d >= 1, "dim", "must be positive");
    require(n >= 1, "n", "must be positive");
    if (alpha >= d) return true;
    return n * (d - alpha) < d;
}

bool subordinator_meet(double alpha1, double alpha2) {
    require(alpha1 > 0.0 && alpha1 < 1.0, "alpha1", "subordinator index must lie in (0, 1)");
    require(alpha2 > 0.0 && alpha2 < 1.0, "alpha2", "subordinator index must lie in (0, 1)");
    return alpha1 + alpha2 > 1.0;
}

std::string to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Convergent: return "convergent";
        case VerdictKind::Divergent: return "divergent";
        default: return "inconclusive";
    }
}

namespace {

struct AxisPanel {
    double lo, hi;
    int level;  // 0 inside [-r0, r0], k + 1 in the k-th ring
};

struct ProbeResolution {
    int center_panels, ring_panels, order;
};

ProbeResolution resolution_for(int dim) {
    switch (dim) {
        case 1: return {8, 4, 8};
        case 2: return {8, 2, 6};
        case 3: return {4, 1, 5};
        default: return {2, 1, 3};
    }
}

double resolvent_re(Complex z) {
    const Complex w = 1.0 + z;
    return w.real() / std::norm(w);
}

// prod_(j<n) K_j(xi^j) over consecutive d-blocks of x; `sum` receives xi^1 + ... + xi^n.
double block_product(const ExponentVector& psi, std::span<const double> x, std::size_t n, Point& scratch, Point& sum) {
    const int d = psi.dim();
    std::fill(sum.begin(), sum.end(), 0.0);
    double k = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (int a = 0; a < d; ++a) {
            scratch[a] = x[j * d + a];
            sum[a] += scratch[a];
        }
        k *= resolvent_re(psi[j](scratch));
    }
    return k;
}

}  // namespace

ConvergenceVerdict numeric_convergence_probe(const ProbeIntegrand& integrand, const ProbePlan& plan, Exec exec) {
    const int D = integrand.dim;
    require(D >= 1 && D <= 4, "dim", "tensor probe supports total dimension 1..4");
    require(plan.r0 > 0.0, "r0", "must be positive");
    require(plan.doublings >= 4, "doublings", "need at least 4 doublings");
    const auto res = resolution_for(D);
    const int M = plan.doublings;

    std::vector<AxisPanel> axis;
    for (int p = 0; p < res.center_panels; ++p) {
        const double h = 2.0 * plan.r0 / res.center_panels;
        axis.push_back({-plan.r0 + p * h, -plan.r0 + (p + 1) * h, 0});
    }
    for (int k = 0; k < M; ++k) {
        const double a = plan.r0 * std::ldexp(1.0, k), b = 2.0 * a;
        const double h = (b - a) / res.ring_panels;
        for (int p = 0; p < res.ring_panels; ++p) {
            axis.push_back({a + p * h, a + (p + 1) * h, k + 1});
            axis.push_back({-a - (p + 1) * h, -a - p * h, k + 1});
        }
    }
    const std::size_t P = axis.size();
    std::size_t cells = 1;
    for (int a = 0; a < D; ++a) cells *= P;

    const int block = integrand.block > 0 ? integrand.block : D;
    std::array<int, 4> order{};
    std::array<const GaussRule*, 4> rule{};
    std::size_t nodes = 1;
    for (int a = 0; a < D; ++a) {
        order[a] = res.order + (a / block) % 2;
        rule[a] = &gauss_legendre(order[a]);
        nodes *= order[a];
    }

    std::vector<double> value(cells);
    std::vector<int> level(cells);
    for_each_index(cells, exec, [&](std::size_t c) {
        std::array<std::size_t, 4> idx{};
        std::size_t rem = c;
        int lvl = 0;
        double vol = 1.0;
        for (int a = 0; a < D; ++a) {
            idx[a] = rem % P;
            rem /= P;
            lvl = std::max(lvl, axis[idx[a]].level);
            vol *= 0.5 * (axis[idx[a]].hi - axis[idx[a]].lo);
        }
        level[c] = lvl;
        Point x(D);
        double s = 0.0;
        for (std::size_t q = 0; q < nodes; ++q) {
            std::size_t r = q;
            double w = 1.0;
            for (int a = 0; a < D; ++a) {
                const int i = static_cast<int>(r % order[a]);
                r /= order[a];
                const auto& pan = axis[idx[a]];
                x[a] = 0.5 * (pan.lo + pan.hi) + 0.5 * (pan.hi - pan.lo) * rule[a]->nodes[i];
                w *= rule[a]->weights[i];
            }
            s += w * integrand.f(x);
        }
        value[c] = vol * s;
    });

    std::vector<std::vector<double>> by_level(M + 1);
    for (std::size_t c = 0; c < cells; ++c) by_level[level[c]].push_back(value[c]);
    std::vector<double> shell(M + 1);
    for (int m = 0; m <= M; ++m) shell[m] = pairwise_sum(by_level[m]);

    ConvergenceVerdict v;
    double acc = 0.0;
    for (int m = 0; m <= M; ++m) {
        acc += shell[m];
        v.radii.push_back(plan.r0 * std::ldexp(1.0, m));
        v.partials.push_back(acc);
    }
    if (!std::all_of(v.partials.begin(), v.partials.end(), [](double x) { return std::isfinite(x); })) {
        v.note = "non-finite partial integral";
        return v;
    }
    // slope of log(increment) vs log R over the second half of the schedule
    std::vector<double> xs, ys;
    for (int m = M / 2 + 1; m <= M; ++m) {
        if (shell[m] <= 0.0) {
            v.note = "non-positive shell increment at R = " + std::to_string(v.radii[m]);
            return v;
        }
        xs.push_back(std::log(v.radii[m]));
        ys.push_back(std::log(shell[m]));
    }
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    v.exponent = sxy / sxx;
    if (v.exponent < -plan.slope_band) {
        v.kind = VerdictKind::Convergent;
    } else if (v.exponent > plan.slope_band) {
        v.kind = VerdictKind::Divergent;
    } else if (std::abs(v.exponent) <= plan.log_slope_band &&
               v.partials.back() > plan.log_growth_bound * v.partials.front()) {
        v.kind = VerdictKind::Divergent;
        v.logarithmic = true;
    } else {
        v.note = "increment slope inside the undecided band";
    }
    return v;
}

BisectionResult dimension_by_bisection(const VerdictFn& test, double lo, double hi, double tol) {
    require(hi > lo, "bracket", "need lo < hi");
    require(tol > 0.0, "tol", "must be positive");
    BisectionResult out;
    auto eval = [&](double s) {
        ++out.evaluations;
        const auto v = test(s);
        if (v.kind == VerdictKind::Inconclusive) ++out.inconclusive;
        return v.kind;
    };
    const auto at_lo = eval(lo);
    const auto at_hi = eval(hi);
    if (at_lo == VerdictKind::Divergent && at_hi == VerdictKind::Convergent)
        throw InvalidArgument("test", "non-monotone verdicts: divergent at s = " + std::to_string(lo) +
                                          ", convergent at s = " + std::to_string(hi));
    if (at_hi == VerdictKind::Convergent) {
        out.value = hi;
        return out;
    }
    if (at_lo == VerdictKind::Divergent) {
        out.value = lo;
        return out;
    }
    double a = lo, b = hi;
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (eval(mid) == VerdictKind::Convergent) a = mid;
        else b = mid;
    }
    out.value = a;
    return out;
}

ProbeIntegrand kernel_integrand(const ExponentVector& psi) {
    return {psi.dim(), [psi](std::span<const double> xi) { return k_psi(psi, xi); }, "kernel"};
}

ProbeIntegrand intersection_integrand(const ExponentVector& psi) {
    require(psi.size() >= 2, "components", "intersections need N >= 2");
    const int d = psi.dim();
    const int D = static_cast<int>(psi.size() - 1) * d;
    require(D <= 4, "dim", "(N - 1) d must be at most 4 for the numeric probe");
    std::vector<LevyExponent> parts = psi.components();
    auto decay = [](const LevyExponent& e) {
        const auto r = e.tail_rates();
        return r ? r->kernel_decay() : 0.0;
    };
    const auto slowest = std::min_element(parts.begin(), parts.end(), [&](const LevyExponent& a, const LevyExponent& b) {
        return decay(a) < decay(b);
    });
    std::rotate(slowest, slowest + 1, parts.end());
    const ExponentVector ordered(std::move(parts));
    return {D,
            [ordered, d](std::span<const double> x) {
                Point scratch(d), sum(d);
                const std::size_t n = ordered.size();
                const double k = block_product(ordered, x, n - 1, scratch, sum);
                return k * resolvent_re(ordered[n - 1](sum));
            },
            "intersection", d};
}

ProbeIntegrand intersection_in_set_integrand(const ExponentVector& psi, const AtomicMeasure& mu) {
    const int d = psi.dim();
    require(mu.dim() == d, "measure", "dimension mismatch with exponents");
    const int D = static_cast<int>(psi.size()) * d;
    require(D <= 4, "dim", "N d must be at most 4 for the numeric probe");
    return {D,
            [psi, mu, d](std::span<const double> x) {
                Point scratch(d), sum(d);
                const double k = block_product(psi, x, psi.size(), scratch, sum);
                return k * std::norm(fourier_measure(mu, sum));
            },
            "intersection_in_set", d};
}

ProbeIntegrand dimension_integrand(const ExponentVector& psi, double s) {
    const int d = psi.dim();
    require(s > 0.0 && s < d, "s", "must lie in (0, d)");
    const int D = static_cast<int>(psi.size()) * d;
    require(D <= 4, "dim", "N d must be at most 4 for the numeric probe");
    return {D,
            [psi, s, d](std::span<const double> x) {
                Point scratch(d), sum(d);
                const double k = block_product(psi, x, psi.size(), scratch, sum);
                return k / (1.0 + std::pow(norm(sum), d - s));
            },
            "dimension", d};
}

ProbeIntegrand subordinator_integrand(double alpha1, double alpha2) {
    require(alpha1 > 0.0 && alpha1 < 1.0, "alpha1", "subordinator index must lie in (0, 1)");
    require(alpha2 > 0.0 && alpha2 < 1.0, "alpha2", "subordinator index must lie in (0, 1)");
    const double a = alpha1 + alpha2;
    return {1, [a](std::span<const double> t) { return std::pow(1.0 + std::abs(t[0]), -a); }, "subordinator"};
}

ExponentVector stable_exponents(const StableSystem& sys) {
    sys.validate();
    std::vector<LevyExponent> parts;
    for (double a : sys.alphas) parts.push_back(isotropic_stable(sys.d, a));
    return ExponentVector(std::move(parts));
}

VerdictFn stable_dimension_test(const StableSystem& sys) {
    sys.validate();
    const double threshold = excess_over(sys, static_cast<double>(sys.n() - 1) * sys.d);
    return [threshold](double s) {
        ConvergenceVerdict v;
        v.exponent = s - threshold;
        if (s < threshold) {
            v.kind = VerdictKind::Convergent;
        } else {
            v.kind = VerdictKind::Divergent;
            v.logarithmic = s == threshold;
        }
        v.note = "analytic";
        return v;
    };
}

VerdictFn numeric_dimension_test(const StableSystem& sys, const ProbePlan& plan) {
    const ExponentVector psi = stable_exponents(sys);
    return [psi, plan](double s) { return numeric_convergence_probe(dimension_integrand(psi, s), plan); };
}

Kernel meeting_kernel(const LevyExponent& first, const LevyExponent& second, const QuadratureSpec& quad) {
    require(first.dim() == 1 && second.dim() == 1, "dim", "meeting gauge is one-dimensional");
    const ExponentVector one({first}), two({second});
    const PotentialDensity v1(one, quad, true), u2(two, quad, false);
    require(v1.finite_at_origin() && u2.finite_at_origin(), "alpha",
            "meeting gauge needs bounded potential densities");
    const Kernel v1k = potential_kernel(v1);

    struct Memo {
        std::mutex mu;
        std::map<double, double> values;
    };
    auto u2_memo = std::make_shared<Memo>();
    auto u2_ptr = std::make_shared<PotentialDensity>(u2);
    auto u2_at = [u2_memo, u2_ptr](double y) {
        {
            std::lock_guard lock(u2_memo->mu);
            if (auto it = u2_memo->values.find(y); it != u2_memo->values.end()) return it->second;
        }
        const double v = (*u2_ptr)(Point{y});
        std::lock_guard lock(u2_memo->mu);
        u2_memo->values.emplace(y, v);
        return v;
    };
    const double tol = quad.rel_tol;
    Kernel k;
    k.dim = 1;
    k.name = "meeting";
    k.radial = true;
    k.eval = [v1k, u2_at, tol](std::span<const double> x) {
        const double x0 = std::abs(x[0]);
        auto g = [&](double y) {
            const Point a{x0 + y}, b{x0 - y};
            return 0.5 * (v1k.eval(a) + v1k.eval(b)) * u2_at(y);
        };
        const double A = 8.0 + x0;
        const double body = integrate_adaptive(g, -A, A, tol * 10, 0.0, 200).value;
        const double right = integrate_power_tail(g, A, 64.0 * A, TailPolicy::PowerLawExtrapolate, tol * 10).value;
        const double left =
            integrate_power_tail([&](double y) { return g(-y); }, A, 64.0 * A, TailPolicy::PowerLawExtrapolate, tol * 10)
                .value;
        return body + right + left;
    };
    k.fourier = [one, two](std::span<const double> xi) { return k_psi(one, xi) * k_psi(two, xi); };
    return k;
}

}  // namespace levypot
