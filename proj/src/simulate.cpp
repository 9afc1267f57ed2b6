#include "levypot/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace levypot {

namespace {

constexpr double kBudget = 2e10;  // grid evaluations per run

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform_open(Rng& rng) {
    // (0, 1): never exactly 0 so that logs and powers stay finite
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double exponential(Rng& rng) { return -std::log(uniform_open(rng)); }

double normal(Rng& rng) {
    // Box-Muller: two draws per variate on every standard library
    const double u = uniform_open(rng), v = uniform_open(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * v);
}

double box_distance(std::span<const double> x, std::span<const double> c, const std::optional<Point>& cell) {
    double s = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
        double g = std::abs(x[a] - c[a]);
        if (cell) g = std::max(0.0, g - 0.5 * (*cell)[a]);
        s += g * g;
    }
    return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

std::vector<MCEstimate> indicator_profile(const std::vector<double>& min_dist, const std::vector<double>& epsilons) {
    std::vector<MCEstimate> out;
    std::vector<double> hits(min_dist.size());
    for (double eps : epsilons) {
        for (std::size_t t = 0; t < min_dist.size(); ++t) hits[t] = min_dist[t] < eps ? 1.0 : 0.0;
        out.push_back(summarize(hits));
    }
    return out;
}

void check_epsilons(const std::vector<double>& epsilons) {
    require(!epsilons.empty(), "epsilon", "needs at least one radius");
    for (double e : epsilons) require(e > 0.0 && std::isfinite(e), "epsilon", "must be positive");
}

struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& k) const noexcept {
        std::uint64_t h = 0x84222325cbf29ce4ULL;
        for (auto v : k) {
            std::uint64_t s = h ^ static_cast<std::uint64_t>(v);
            h = splitmix64(s);
        }
        return h;
    }
};

}  // namespace

void MCConfig::validate() const {
    require(trials >= 100, "trials", "reported estimates need at least 100 trials");
    require(time_horizon > 0.0 && std::isfinite(time_horizon), "time_horizon", "must be positive");
    require(n_steps >= 1, "n_steps", "must be positive");
    require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon", "must be positive");
    for (double s : box_scales) require(s > 0.0, "box_scales", "scales must be positive");
}

MCEstimate summarize(std::span<const double> samples) {
    require(!samples.empty(), "samples", "empty sample");
    const double n = static_cast<double>(samples.size());
    const double mean = pairwise_sum(samples) / n;
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = (samples[i] - mean) * (samples[i] - mean);
    const double var = samples.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n), static_cast<int>(samples.size())};
}

Rng stream(std::uint64_t seed, std::uint64_t index, std::uint64_t purpose) {
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state = a ^ (index * 0xd1b54a32d192ed03ULL);
    std::uint64_t b = splitmix64(state);
    state = b ^ (purpose * 0xaef17502108ef2d9ULL);
    std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state))};
    return Rng(seq);
}

double sample_stable_increment(double alpha, double beta, double scale, double dt, Rng& rng) {
    require(alpha > 0.0 && alpha <= 2.0, "alpha", "must lie in (0, 2]");
    require(beta >= -1.0 && beta <= 1.0, "beta", "must lie in [-1, 1]");
    require(!(alpha == 1.0 && beta != 0.0), "beta", "alpha = 1 with beta != 0 is unsupported");
    require(scale > 0.0, "scale", "must be positive");
    require(dt > 0.0, "dt", "must be positive");
    const double v = kPi * (uniform_open(rng) - 0.5);
    const double w = exponential(rng);
    double x;
    if (alpha == 1.0) {
        x = std::tan(v);
    } else {
        const double t = beta * std::tan(0.5 * kPi * alpha);
        const double b = std::atan(t) / alpha;
        const double s = std::pow(1.0 + t * t, 0.5 / alpha);
        x = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
            std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
    }
    return std::pow(dt, 1.0 / alpha) * scale * x;
}

double sample_positive_stable(double a, Rng& rng) {
    require(a > 0.0 && a < 1.0, "alpha", "subordinator index must lie in (0, 1)");
    const double u = kPi * uniform_open(rng);
    const double e = exponential(rng);
    return std::sin(a * u) / std::pow(std::sin(u), 1.0 / a) * std::pow(std::sin((1.0 - a) * u) / e, (1.0 - a) / a);
}

void Path::write_csv(std::ostream& os, double dt) const {
    os << 't';
    for (int a = 0; a < dim; ++a) os << ",x" << a + 1;
    os << '\n';
    os.precision(17);
    for (std::size_t k = 0; k < size(); ++k) {
        os << dt * static_cast<double>(k);
        for (double v : at(k)) os << ',' << v;
        os << '\n';
    }
}

Path sample_isotropic_stable_path(double alpha, int d, double T, int n_steps, Rng& rng, double scale) {
    require(alpha > 0.0 && alpha <= 2.0, "alpha", "must lie in (0, 2]");
    require(d >= 1, "dim", "must be at least 1");
    require(T > 0.0, "time_horizon", "must be positive");
    require(n_steps >= 1, "n_steps", "must be positive");
    require(scale > 0.0, "scale", "must be positive");
    const double dt = T / n_steps;
    Path p;
    p.dim = d;
    p.coords.assign(static_cast<std::size_t>(n_steps + 1) * d, 0.0);
    for (int k = 1; k <= n_steps; ++k) {
        double* prev = p.coords.data() + (k - 1) * d;
        double* cur = p.coords.data() + k * d;
        if (d == 1 && alpha < 2.0) {
            cur[0] = prev[0] + sample_stable_increment(alpha, 0.0, scale, dt, rng);
            continue;
        }
        // B(2 S) with E exp(-lambda S(dt)) = exp(-dt lambda^(alpha/2)); S = dt at alpha = 2
        const double clock = alpha == 2.0 ? dt : std::pow(dt, 2.0 / alpha) * sample_positive_stable(0.5 * alpha, rng);
        const double sd = scale * std::sqrt(2.0 * clock);
        for (int a = 0; a < d; ++a) cur[a] = prev[a] + sd * normal(rng);
    }
    return p;
}

std::vector<MCEstimate> hitting_profile(const StableSystem& sys, const AtomicMeasure& target, const MCConfig& cfg,
                                        const std::vector<double>& epsilons, Exec exec) {
    sys.validate();
    cfg.validate();
    check_epsilons(epsilons);
    require(sys.n() <= 2, "alphas", "hitting grids support N <= 2");
    require(target.dim() == sys.d, "target", "dimension mismatch with the system");
    const double grid = std::pow(cfg.n_steps + 1.0, static_cast<double>(sys.n()));
    require(grid * static_cast<double>(target.size()) * cfg.trials <= kBudget, "trials",
            "budget exceeded: trials x grid size x target size above 2e10");

    const int d = sys.d;
    std::vector<double> min_dist(cfg.trials);
    for_each_index(static_cast<std::size_t>(cfg.trials), exec, [&](std::size_t t) {
        std::vector<Path> paths;
        for (std::size_t j = 0; j < sys.n(); ++j) {
            Rng rng = stream(cfg.seed, t, j);
            paths.push_back(sample_isotropic_stable_path(sys.alphas[j], d, cfg.time_horizon, cfg.n_steps, rng));
        }
        double best = kInf;
        Point x(d);
        for (std::size_t i = 0; i < target.size(); ++i) {
            const auto c = target.point(i);
            if (paths.size() == 1) {
                for (std::size_t k = 0; k < paths[0].size(); ++k)
                    best = std::min(best, box_distance(paths[0].at(k), c, target.cell()));
            } else {
                for (std::size_t k = 0; k < paths[0].size(); ++k)
                    for (std::size_t l = 0; l < paths[1].size(); ++l) {
                        for (int a = 0; a < d; ++a) x[a] = paths[0].at(k)[a] + paths[1].at(l)[a];
                        best = std::min(best, box_distance(x, c, target.cell()));
                    }
            }
        }
        min_dist[t] = best;
    });
    return indicator_profile(min_dist, epsilons);
}

MCEstimate hitting_frequency(const StableSystem& sys, const AtomicMeasure& target, const MCConfig& cfg, Exec exec) {
    return hitting_profile(sys, target, cfg, {cfg.epsilon}, exec).front();
}

MCEstimate hitting_frequency(const StableSystem& sys, const SetDiscretization& target, const MCConfig& cfg,
                             Exec exec) {
    return hitting_frequency(sys, discretize(target), cfg, exec);
}

double min_pair_distance_bruteforce(const Path& a, const Path& b, double radius) {
    double best = radius;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) best = std::min(best, distance(a.at(i), b.at(j)));
    return best;
}

double min_pair_distance(const Path& a, const Path& b, double radius) {
    require(a.dim == b.dim, "dim", "paths differ in dimension");
    require(radius > 0.0, "epsilon", "must be positive");
    const int d = a.dim;
    std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, KeyHash> cells;
    std::vector<std::int64_t> key(d);
    for (std::size_t j = 0; j < b.size(); ++j) {
        for (int k = 0; k < d; ++k) key[k] = static_cast<std::int64_t>(std::floor(b.at(j)[k] / radius));
        cells[key].push_back(j);
    }
    double best = radius;
    std::vector<std::int64_t> base(d), probe(d);
    int neighbours = 1;
    for (int k = 0; k < d; ++k) neighbours *= 3;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int k = 0; k < d; ++k) base[k] = static_cast<std::int64_t>(std::floor(a.at(i)[k] / radius));
        for (int code = 0; code < neighbours; ++code) {
            int c = code;
            for (int k = 0; k < d; ++k, c /= 3) probe[k] = base[k] + (c % 3) - 1;
            const auto it = cells.find(probe);
            if (it == cells.end()) continue;
            for (std::size_t j : it->second) best = std::min(best, distance(a.at(i), b.at(j)));
        }
    }
    return best;
}

std::vector<MCEstimate> intersection_profile(double alpha1, double alpha2, int d, const MCConfig& cfg,
                                             const std::vector<double>& epsilons, Exec exec) {
    StableSystem{{alpha1, alpha2}, d}.validate();
    cfg.validate();
    check_epsilons(epsilons);
    const double radius = *std::max_element(epsilons.begin(), epsilons.end());
    std::vector<double> min_dist(cfg.trials);
    for_each_index(static_cast<std::size_t>(cfg.trials), exec, [&](std::size_t t) {
        Rng r1 = stream(cfg.seed, t, 0), r2 = stream(cfg.seed, t, 1);
        const Path p1 = sample_isotropic_stable_path(alpha1, d, cfg.time_horizon, cfg.n_steps, r1);
        Path p2 = sample_isotropic_stable_path(alpha2, d, cfg.time_horizon, cfg.n_steps, r2);
        for (std::size_t k = 0; k < p2.size(); ++k) p2.coords[k * d] += 1.0;
        min_dist[t] = min_pair_distance(p1, p2, radius);
    });
    return indicator_profile(min_dist, epsilons);
}

MCEstimate intersection_frequency(double alpha1, double alpha2, int d, const MCConfig& cfg, Exec exec) {
    return intersection_profile(alpha1, alpha2, d, cfg, {cfg.epsilon}, exec).front();
}

double box_dimension_estimate(int dim, std::span<const double> coords, const std::vector<double>& scales) {
    require(dim >= 1, "dim", "must be at least 1");
    require(coords.size() % dim == 0, "points", "coordinate count is not a multiple of the dimension");
    const std::size_t n = coords.size() / dim;
    require(n >= 1000, "points", "needs at least 1000 points");
    require(scales.size() >= 4, "scales", "needs at least 4 scales");
    for (double s : scales) require(s > 0.0, "scales", "scales must be positive");

    bool single = true;
    for (std::size_t i = 1; i < n && single; ++i)
        for (int a = 0; a < dim; ++a)
            if (coords[i * dim + a] != coords[a]) single = false;
    if (single) return 0.0;

    std::vector<double> xs, ys;
    std::vector<std::int64_t> key(dim);
    for (double s : scales) {
        std::unordered_set<std::vector<std::int64_t>, KeyHash> boxes;
        for (std::size_t i = 0; i < n; ++i) {
            for (int a = 0; a < dim; ++a) key[a] = static_cast<std::int64_t>(std::floor(coords[i * dim + a] / s));
            boxes.insert(key);
        }
        xs.push_back(std::log(1.0 / s));
        ys.push_back(std::log(static_cast<double>(boxes.size())));
    }
    const double m = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= m, my /= m;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
    require(sxx > 0.0, "scales", "needs at least two distinct scales");
    return sxy / sxx;
}

std::vector<double> range_box_scales(double alpha, double T) {
    std::vector<double> out;
    for (int k = 8; k <= 15; ++k) out.push_back(std::pow(T, 1.0 / alpha) * std::ldexp(1.0, -k));
    return out;
}

double GaussianDensity::operator()(double x) const {
    const double z = (x - mean) / sd;
    return mass * std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * kPi));
}

void SojournConfig::validate() const {
    require(trials >= 100, "trials", "reported estimates need at least 100 trials");
    require(time_horizon > 0.0, "time_horizon", "must be positive");
    require(dt > 0.0 && dt < time_horizon, "dt", "must lie in (0, time_horizon)");
    require(half_width > 0.0, "half_width", "must be positive");
    require(strata >= 1, "strata", "must be positive");
}

SojournEstimate sojourn_mc(double alpha, const GaussianDensity& f, const SojournConfig& cfg, Exec exec) {
    require(alpha > 0.0 && alpha <= 2.0, "alpha", "must lie in (0, 2]");
    require(f.sd > 0.0, "sd", "must be positive");
    cfg.validate();
    const double L = cfg.half_width;
    // mass of f in the outer quarter of the window or beyond
    const double outside = f.mass * 0.5 *
                           (std::erfc((0.75 * L - f.mean) / (f.sd * std::numbers::sqrt2)) +
                            std::erfc((0.75 * L + f.mean) / (f.sd * std::numbers::sqrt2)));
    require(outside <= 1e-3, "half_width", "too small: f has mass above 1e-3 near the window edge");

    const int n = static_cast<int>(std::lround(cfg.time_horizon / cfg.dt));
    const double reach = 8.5 * f.sd;
    std::vector<double> weights(n);  // int over [t_k, t_k+1] of e^-t
    for (int k = 0; k < n; ++k) weights[k] = std::exp(-k * cfg.dt) - std::exp(-(k + 1) * cfg.dt);

    std::vector<double> first(cfg.trials), second(cfg.trials);
    for_each_index(static_cast<std::size_t>(cfg.trials), exec, [&](std::size_t t) {
        Rng rng = stream(cfg.seed, t, 0);
        std::vector<double> fwd(n + 1, 0.0), bwd(n + 1, 0.0);
        for (int k = 1; k <= n; ++k) fwd[k] = fwd[k - 1] + sample_stable_increment(alpha, 0.0, 1.0, cfg.dt, rng);
        for (int k = 1; k <= n; ++k) bwd[k] = bwd[k - 1] - sample_stable_increment(alpha, 0.0, 1.0, cfg.dt, rng);
        std::vector<double> values(cfg.strata), squares(cfg.strata);
        std::vector<double> fa(n + 1), fb(n + 1), terms(2 * n);
        for (int m = 0; m < cfg.strata; ++m) {
            const double x = -L + 2.0 * L * (m + uniform_open(rng)) / cfg.strata;
            for (int k = 0; k <= n; ++k) {
                fa[k] = std::abs(x + fwd[k] - f.mean) > reach ? 0.0 : f(x + fwd[k]);
                fb[k] = std::abs(x + bwd[k] - f.mean) > reach ? 0.0 : f(x + bwd[k]);
            }
            for (int k = 0; k < n; ++k) {
                terms[2 * k] = 0.5 * (fa[k] + fa[k + 1]) * weights[k];
                terms[2 * k + 1] = 0.5 * (fb[k] + fb[k + 1]) * weights[k];
            }
            const double s = 0.5 * pairwise_sum(terms);
            values[m] = s;
            squares[m] = s * s;
        }
        first[t] = 2.0 * L * pairwise_sum(values) / cfg.strata;
        second[t] = 2.0 * L * pairwise_sum(squares) / cfg.strata;
    });
    return {summarize(first), summarize(second)};
}

}  // namespace levypot
