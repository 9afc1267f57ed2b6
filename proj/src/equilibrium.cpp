#include "levypot/equilibrium.hpp"

#include <algorithm>

namespace levypot {

EnergyMatrix assemble_matrix(const Kernel& gauge, const AtomicMeasure& atoms, DiagonalPolicy policy,
                             std::optional<Point> cell, Exec exec) {
    require(atoms.dim() == gauge.dim, "gauge", "dimension mismatch with the discretization");
    const std::size_t n = atoms.size();
    const int d = atoms.dim();
    EnergyMatrix m;
    m.n = n;
    m.source = gauge.name;
    m.policy = policy;
    m.atoms = atoms;
    m.entries.assign(n * n, 0.0);

    double diag = 0.0;
    if (policy == DiagonalPolicy::Regularized) {
        const auto& c = cell ? cell : atoms.cell();
        require(c.has_value(), "cell", "regularized diagonal needs a cell width");
        diag = cell_average(gauge, *c);
    } else {
        diag = gauge.eval(Point(d, 0.0));
    }
    for_each_index(n, exec, [&](std::size_t i) {
        Point diff(d), back(d);
        m.entries[i * n + i] = diag;
        for (std::size_t j = i + 1; j < n; ++j) {
            for (int a = 0; a < d; ++a) {
                diff[a] = atoms.point(i)[a] - atoms.point(j)[a];
                back[a] = -diff[a];
            }
            m.entries[i * n + j] = gauge.radial ? gauge.eval(diff) : 0.5 * (gauge.eval(diff) + gauge.eval(back));
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m.entries[j * n + i] = m.entries[i * n + j];
    return m;
}

EnergyMatrix assemble_matrix(const Kernel& gauge, const SetDiscretization& disc, DiagonalPolicy policy, Exec exec) {
    return assemble_matrix(gauge, discretize(disc), policy, std::nullopt, exec);
}

EnergyMatrix assemble_matrix(const ExponentVector& psi, const SetDiscretization& disc, const QuadratureSpec& quad,
                             DiagonalPolicy policy, Exec exec) {
    const PotentialDensity pd(psi, quad, true);
    return assemble_matrix(potential_kernel(pd), disc, policy, exec);
}

namespace {

std::vector<double> column_product(const EnergyMatrix& m, const std::vector<double>& w) {
    std::vector<double> g(m.n);
    std::vector<double> terms(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j) terms[j] = w[j] == 0.0 ? 0.0 : m(i, j) * w[j];
        g[i] = pairwise_sum(terms);
    }
    return g;
}

double quadratic(const std::vector<double>& w, const std::vector<double>& g) {
    std::vector<double> terms(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) terms[i] = w[i] * g[i];
    return pairwise_sum(terms);
}

}  // namespace

EquilibriumResult solve_equilibrium(const EnergyMatrix& full, const SolverOptions& opts) {
    require(full.n >= 1, "matrix", "empty matrix");
    require(opts.tol > 0.0, "tol", "must be positive");
    require(opts.max_iter >= 1, "max_iter", "must be positive");
    for (std::size_t i = 0; i < full.n; ++i)
        for (std::size_t j = 0; j < full.n; ++j) {
            require(full(i, j) == full(j, i), "matrix", "must be exactly symmetric");
            require(full(i, j) >= 0.0, "matrix", "entries must be nonnegative");
            if (i != j) require(std::isfinite(full(i, j)), "matrix", "off-diagonal entries must be finite");
        }

    // atoms whose self-energy is infinite carry no weight in a finite-energy measure
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < full.n; ++i)
        if (std::isfinite(full(i, i))) live.push_back(i);
    EquilibriumResult out;
    out.weights.assign(full.n, 0.0);
    if (live.empty()) {
        std::fill(out.weights.begin(), out.weights.end(), 1.0 / full.n);
        out.energy = kInf;
        out.capacity = 0.0;
        out.converged = true;
        out.energy_history = {kInf};
        return out;
    }
    EnergyMatrix m;
    m.n = live.size();
    m.entries.resize(m.n * m.n);
    for (std::size_t a = 0; a < m.n; ++a)
        for (std::size_t b = 0; b < m.n; ++b) m.entries[a * m.n + b] = full(live[a], live[b]);

    const std::size_t n = m.n;
    std::vector<double> w(n, 1.0 / n);
    if (!opts.initial.empty()) {
        require(opts.initial.size() == full.n, "initial", "length must match the matrix");
        double total = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            w[a] = opts.initial[live[a]];
            require(w[a] >= 0.0, "initial", "weights must be nonnegative");
            total += w[a];
        }
        require(total > 0.0, "initial", "needs positive mass on finite-energy atoms");
        for (double& x : w) x /= total;
    }
    std::vector<double> g = column_product(m, w);
    double energy = quadratic(w, g);
    out.energy_history.push_back(energy);

    double gap = kInf;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        if (it > 0 && it % opts.resync_every == 0) g = column_product(m, w);
        std::size_t toward = 0, away = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (g[i] < g[toward]) toward = i;
            if (w[i] > 0.0 && (away == n || g[i] > g[away])) away = i;
        }
        gap = (energy - g[toward]) / energy;
        if (gap <= opts.tol) break;
        const double fw_gain = energy - g[toward];
        const double away_gain = g[away] - energy;

        double slope, curvature, gamma_max;
        const bool forward = fw_gain >= away_gain || away == toward;
        if (forward) {
            slope = g[toward] - energy;  // d^T M w with d = e_toward - w
            curvature = m(toward, toward) - 2.0 * g[toward] + energy;
            gamma_max = 1.0;
        } else {
            slope = energy - g[away];  // d = w - e_away
            curvature = energy - 2.0 * g[away] + m(away, away);
            gamma_max = w[away] / (1.0 - w[away]);
        }
        if (slope >= 0.0) break;
        double gamma = curvature > 0.0 ? std::min(-slope / curvature, gamma_max) : gamma_max;
        const double delta = gamma * (2.0 * slope + gamma * curvature);
        if (forward) {
            for (std::size_t i = 0; i < n; ++i) {
                w[i] *= 1.0 - gamma;
                g[i] = (1.0 - gamma) * g[i] + gamma * m(i, toward);
            }
            w[toward] += gamma;
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                w[i] *= 1.0 + gamma;
                g[i] = (1.0 + gamma) * g[i] - gamma * m(i, away);
            }
            w[away] = gamma == gamma_max ? 0.0 : w[away] - gamma;
        }
        if (delta < 0.0) energy += delta;
        out.energy_history.push_back(energy);
    }
    out.iterations = it;
    out.fw_gap = gap;
    out.converged = gap <= opts.tol;

    // renormalize against drift and scatter back
    double total = 0.0;
    for (double x : w) total += std::max(0.0, x);
    for (std::size_t a = 0; a < n; ++a) out.weights[live[a]] = std::max(0.0, w[a]) / total;
    out.energy = energy;
    out.capacity = 1.0 / energy;
    return out;
}

EquilibriumResult bessel_riesz_capacity(const SetDiscretization& disc, double s, const SolverOptions& opts,
                                        Exec exec) {
    const int d = discretization_dim(disc);
    require(s > 0.0 && s < d, "s", "must lie in (0, d)");
    const Kernel k = riesz_kernel(d, d - s);
    const auto m = assemble_matrix(k, disc, DiagonalPolicy::Regularized, exec);
    return solve_equilibrium(m, opts);
}

std::string to_string(TriState t) {
    switch (t) {
        case TriState::True: return "true";
        case TriState::False: return "false";
        default: return "inconclusive";
    }
}

PointCapacity point_capacity_test(const ExponentVector& psi, const ProbePlan& plan) {
    PointCapacity out;
    if (const auto decay = psi.kernel_decay()) {
        out.method = "tail-rule";
        out.positive = *decay > psi.dim() ? TriState::True : TriState::False;
        return out;
    }
    out.method = "probe";
    require(psi.dim() <= 4, "dim", "numeric probe supports d <= 4");
    auto v = numeric_convergence_probe(kernel_integrand(psi), plan);
    out.positive = v.kind == VerdictKind::Convergent   ? TriState::True
                   : v.kind == VerdictKind::Divergent ? TriState::False
                                                      : TriState::Inconclusive;
    out.evidence = std::move(v);
    return out;
}

FlatCheck flat_equilibrium_check(const ExponentVector& psi, const CubeGrid& grid, const QuadratureSpec& quad,
                                 const SolverOptions& opts, Exec exec) {
    const auto m = assemble_matrix(psi, SetDiscretization{grid}, quad, DiagonalPolicy::Regularized, exec);
    FlatCheck out;
    out.result = solve_equilibrium(m, opts);
    out.cells = m.n;
    double tv = 0.0;
    for (double w : out.result.weights) tv += std::abs(w - 1.0 / m.n);
    out.tv_distance = 0.5 * tv;
    out.flat = out.tv_distance < 0.05;
    return out;
}

}  // namespace levypot
