#include "levypot/quadrature.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <queue>

namespace levypot {

void QuadratureSpec::validate() const {
    require(r_max > 0.0 && std::isfinite(r_max), "r_max", "must be positive and finite");
    require(n_nodes >= 16, "n_nodes", "must be at least 16");
    require(rel_tol > 0.0, "rel_tol", "must be positive");
    require(tensor_dim >= 1, "tensor_dim", "must be positive");
}

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

double integrate_gl(const Fn1& f, double a, double b, int panels, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double s = 0.0;
        for (int i = 0; i < order; ++i) s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += 0.5 * h * s;
    }
    return total;
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const Fn1& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * kWgk[7];
    double g = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        k += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

IntegralResult integrate_adaptive(const Fn1& f, double a, double b, double rel_tol,
                                  double abs_tol, int max_intervals) {
    if (a == b) return {};
    std::priority_queue<Segment> heap;
    Segment first = kronrod15(f, a, b);
    double value = first.value;
    double error = first.error;
    heap.push(first);
    int count = 1;
    while (error > std::max(abs_tol, rel_tol * std::abs(value)) && count < max_intervals) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval exhausted in floating point
            heap.push(worst);
            break;
        }
        Segment left = kronrod15(f, worst.a, mid);
        Segment right = kronrod15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // re-sum to shed the drift of the running totals
    double v = 0.0, e = 0.0;
    std::vector<Segment> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    for (const auto& s : segs) {
        v += s.value;
        e += s.error;
    }
    const bool ok = e <= std::max(abs_tol, rel_tol * std::abs(v)) * 1.0000001 || e < 1e-300;
    return {v, e, ok};
}

IntegralResult integrate_power_origin(const Fn1& f, double b, double p, double rel_tol) {
    require(p > -1.0, "exponent", "origin singularity must be integrable (p > -1)");
    const double m = 1.0 / (1.0 + p);
    auto h = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double r = b * std::pow(u, m);
        return f(r) * b * m * std::pow(u, m - 1.0);
    };
    return integrate_adaptive(h, 0.0, 1.0, rel_tol, 0.0, 2000);
}

IntegralResult integrate_power_tail(const Fn1& f, double a, double r_max, TailPolicy policy,
                                    double rel_tol) {
    require(a > 0.0, "a", "tail integration starts at a positive radius");
    std::vector<double> panels;
    double lo = a;
    while (panels.size() < 3 || 2.0 * lo <= r_max * (1.0 + 1e-12)) {
        const auto r = integrate_adaptive(f, lo, 2.0 * lo, rel_tol * 0.1, 0.0, 400);
        panels.push_back(r.value);
        lo *= 2.0;
        if (panels.size() > 200) break;
    }
    const double body = pairwise_sum(panels);
    const std::size_t k = panels.size() - 1;
    auto tail_from = [&](std::size_t i) -> double {
        const double prev = panels[i - 1], last = panels[i];
        if (last == 0.0) return 0.0;
        if (prev == 0.0 || (prev > 0) != (last > 0)) return kInf;
        const double q = last / prev;
        if (q >= 1.0) return kInf;
        return last * q / (1.0 - q);
    };
    const double tail = tail_from(k);
    const double tail_prev = tail_from(k - 1);
    if (!std::isfinite(tail)) return {body, kInf, false};

    IntegralResult out;
    if (policy == TailPolicy::PowerLawExtrapolate) {
        out.value = body + tail;
        out.error = std::isfinite(tail_prev) ? std::abs(panels[k] + tail - tail_prev) : std::abs(tail);
    } else {
        out.value = body;
        out.error = std::abs(tail);
    }
    out.converged = out.error <= rel_tol * std::abs(out.value) || out.error == 0.0;
    return out;
}

namespace {

// Iterated averaging of the trailing partial sums (Euler transform of an
// alternating series).
double averaged_limit(std::span<const double> sums) {
    std::vector<double> t(sums.begin(), sums.end());
    while (t.size() > 1) {
        for (std::size_t i = 0; i + 1 < t.size(); ++i) t[i] = 0.5 * (t[i] + t[i + 1]);
        t.pop_back();
    }
    return t[0];
}

}  // namespace

IntegralResult integrate_oscillatory(const Fn1& g, double omega, Trig kind, double rel_tol,
                                     double initial, int max_panels) {
    require(omega > 0.0, "omega", "must be positive");
    auto trig = [kind](double t) { return kind == Trig::Cos ? std::cos(t) : std::sin(t); };
    auto integrand = [&](double x) { return g(x) * trig(omega * x); };

    const double h = kPi / omega;
    const double phase = kind == Trig::Cos ? 0.5 : 0.0;
    const double start = (std::ceil(std::max(initial, h) / h - phase) + phase) * h;
    const auto head = integrate_adaptive(integrand, 0.0, start, rel_tol * 0.1, 0.0, 20000);

    constexpr int kWindow = 20;
    constexpr int kMinPanels = 40;
    std::vector<double> sums;
    sums.reserve(1024);
    double running = head.value;
    double last_est = 0.0;
    int stable = 0;
    double scale = std::abs(head.value);
    for (int k = 0; k < max_panels; ++k) {
        const double lo = start + k * h;
        const auto panel = integrate_adaptive(integrand, lo, lo + h, rel_tol * 0.1, 0.0, 50);
        running += panel.value;
        scale = std::max(scale, std::abs(running));
        sums.push_back(running);
        if (k + 1 < kMinPanels) continue;
        const double est = averaged_limit(std::span(sums).last(kWindow));
        const double diff = std::abs(est - last_est);
        if (diff <= rel_tol * std::abs(est) + 1e-15 * scale) {
            if (++stable >= 3) return {est, diff + head.error, true};
        } else {
            stable = 0;
        }
        last_est = est;
    }
    const double est = averaged_limit(std::span(sums).last(kWindow));
    return {est, std::abs(est - last_est) + head.error, false};
}

double integrate_box(const FnD& f, std::span<const double> lower, std::span<const double> upper,
                     int order) {
    const std::size_t dim = lower.size();
    const GaussRule& rule = gauss_legendre(order);
    std::vector<int> idx(dim, 0);
    std::vector<double> x(dim);
    double jac = 1.0;
    for (std::size_t a = 0; a < dim; ++a) jac *= 0.5 * (upper[a] - lower[a]);
    double total = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t a = 0; a < dim; ++a) {
            const double mid = 0.5 * (lower[a] + upper[a]);
            const double half = 0.5 * (upper[a] - lower[a]);
            x[a] = mid + half * rule.nodes[idx[a]];
            w *= rule.weights[idx[a]];
        }
        total += w * f(x);
        std::size_t a = 0;
        while (a < dim && ++idx[a] == order) idx[a++] = 0;
        if (a == dim) break;
    }
    return total * jac;
}

}  // namespace levypot
