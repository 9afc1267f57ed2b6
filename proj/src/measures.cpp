#include "levypot/measures.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace levypot {

AtomicMeasure::AtomicMeasure(int dim, std::vector<double> coords, std::vector<double> weights,
                             std::optional<Point> cell)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)), cell_(std::move(cell)) {
    require(dim_ >= 1, "dim", "must be positive");
    require(!weights_.empty(), "weights", "measure needs at least one atom");
    require(coords_.size() == weights_.size() * static_cast<std::size_t>(dim_), "points",
            "coordinate count must equal atoms * dim");
    double total = 0.0;
    for (double w : weights_) {
        require(w >= 0.0 && std::isfinite(w), "weights", "must be finite and nonnegative");
        total += w;
    }
    require(std::abs(total - 1.0) <= 1e-12 * std::max<double>(1.0, weights_.size() * 1e-3) + 1e-12,
            "weights", "must sum to 1");
    for (double x : coords_) require(std::isfinite(x), "points", "must be finite");
    if (cell_) {
        require(static_cast<int>(cell_->size()) == dim_, "cell", "one width per axis");
        for (double h : *cell_) require(h > 0.0, "cell", "widths must be positive");
    }
}

AtomicMeasure AtomicMeasure::dirac(Point x) {
    const int d = static_cast<int>(x.size());
    return AtomicMeasure(d, std::move(x), {1.0});
}

AtomicMeasure AtomicMeasure::translated(std::span<const double> shift) const {
    require(static_cast<int>(shift.size()) == dim_, "shift", "dimension mismatch");
    std::vector<double> c = coords_;
    for (std::size_t i = 0; i < size(); ++i)
        for (int a = 0; a < dim_; ++a) c[i * dim_ + a] += shift[a];
    return AtomicMeasure(dim_, std::move(c), weights_, cell_);
}

AtomicMeasure AtomicMeasure::with_weights(std::vector<double> weights) const {
    return AtomicMeasure(dim_, coords_, std::move(weights), cell_);
}

double AtomicMeasure::diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j) {
            double s = 0.0;
            for (int a = 0; a < dim_; ++a) {
                const double dx = coords_[i * dim_ + a] - coords_[j * dim_ + a];
                s += dx * dx;
            }
            best = std::max(best, s);
        }
    return std::sqrt(best);
}

void AtomicMeasure::write_csv(std::ostream& os) const {
    for (int a = 0; a < dim_; ++a) os << 'x' << (a + 1) << ',';
    os << "w\n";
    os.precision(17);
    for (std::size_t i = 0; i < size(); ++i) {
        for (int a = 0; a < dim_; ++a) os << coords_[i * dim_ + a] << ',';
        os << weights_[i] << '\n';
    }
}

AtomicMeasure AtomicMeasure::read_csv(std::istream& is) {
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), "csv", "missing header");
    int columns = 1;
    for (char ch : line) columns += ch == ',';
    require(columns >= 2, "csv", "need at least one coordinate column and w");
    const int d = columns - 1;
    std::vector<double> coords, weights;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            const double v = std::stod(cell);
            if (col < d) coords.push_back(v);
            else weights.push_back(v);
            ++col;
        }
        require(col == columns, "csv", "row has wrong column count");
    }
    return AtomicMeasure(d, std::move(coords), std::move(weights));
}

std::string discretization_kind(const SetDiscretization& spec) {
    static const char* names[] = {"cube_grid", "cantor_product", "two_point", "circle"};
    return names[spec.index()];
}

int discretization_dim(const SetDiscretization& spec) {
    switch (spec.index()) {
        case 0: return static_cast<int>(std::get<CubeGrid>(spec).bounds.size());
        case 1: return std::get<CantorProduct>(spec).dim;
        case 2: return std::get<TwoPoint>(spec).dim;
        default: return 2;
    }
}

namespace {

// Tensor product of per-axis coordinate lists; weights uniform.
AtomicMeasure tensorize(const std::vector<std::vector<double>>& axes, std::optional<Point> cell) {
    const int d = static_cast<int>(axes.size());
    std::size_t total = 1;
    for (const auto& ax : axes) total *= ax.size();
    std::vector<double> coords;
    coords.reserve(total * d);
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t k = 0; k < total; ++k) {
        for (int a = 0; a < d; ++a) coords.push_back(axes[a][idx[a]]);
        // last axis fastest
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < axes[a].size()) break;
            idx[a] = 0;
        }
    }
    std::vector<double> weights(total, 1.0 / static_cast<double>(total));
    return AtomicMeasure(d, std::move(coords), std::move(weights), std::move(cell));
}

std::vector<double> cantor_midpoints(double ratio, int level) {
    std::vector<std::pair<double, double>> intervals{{0.0, 1.0}};
    for (int l = 0; l < level; ++l) {
        std::vector<std::pair<double, double>> next;
        next.reserve(intervals.size() * 2);
        for (auto [a, b] : intervals) {
            const double len = (b - a) * ratio;
            next.emplace_back(a, a + len);
            next.emplace_back(b - len, b);
        }
        intervals = std::move(next);
    }
    std::vector<double> mids;
    mids.reserve(intervals.size());
    for (auto [a, b] : intervals) mids.push_back(0.5 * (a + b));
    return mids;
}

}  // namespace

AtomicMeasure discretize(const SetDiscretization& spec) {
    if (const auto* g = std::get_if<CubeGrid>(&spec)) {
        require(!g->bounds.empty(), "bounds", "need at least one axis");
        require(g->n_per_axis > 0, "n_per_axis", "must be positive");
        std::vector<std::vector<double>> axes;
        Point cell;
        for (const auto& iv : g->bounds) {
            require(iv.hi > iv.lo, "bounds", "each interval needs hi > lo");
            const double h = (iv.hi - iv.lo) / g->n_per_axis;
            std::vector<double> ax(g->n_per_axis);
            for (int i = 0; i < g->n_per_axis; ++i) ax[i] = iv.lo + (i + 0.5) * h;
            axes.push_back(std::move(ax));
            cell.push_back(h);
        }
        return tensorize(axes, cell);
    }
    if (const auto* c = std::get_if<CantorProduct>(&spec)) {
        require(c->ratio > 0.0 && c->ratio < 0.5, "ratio", "must lie in (0, 1/2)");
        require(c->level >= 0, "level", "must be nonnegative");
        require(c->dim >= 1, "dim", "must be positive");
        require(c->level * c->dim <= 24, "level", "too many points (2^(level*dim) > 2^24)");
        const auto mids = cantor_midpoints(c->ratio, c->level);
        std::vector<std::vector<double>> axes(c->dim, mids);
        const double h = std::pow(c->ratio, c->level);
        return tensorize(axes, Point(c->dim, h));
    }
    if (const auto* t = std::get_if<TwoPoint>(&spec)) {
        require(t->separation > 0.0, "separation", "must be positive");
        require(t->dim >= 1, "dim", "must be positive");
        std::vector<double> coords(2 * t->dim, 0.0);
        coords[0] = -0.5 * t->separation;
        coords[t->dim] = 0.5 * t->separation;
        return AtomicMeasure(t->dim, std::move(coords), {0.5, 0.5});
    }
    const auto& c = std::get<Circle>(spec);
    require(c.radius > 0.0, "radius", "must be positive");
    require(c.n >= 1, "n", "must be positive");
    std::vector<double> coords;
    coords.reserve(2 * c.n);
    for (int k = 0; k < c.n; ++k) {
        const double th = 2.0 * kPi * k / c.n;
        coords.push_back(c.radius * std::cos(th));
        coords.push_back(c.radius * std::sin(th));
    }
    const double arc = 2.0 * kPi * c.radius / c.n;
    return AtomicMeasure(2, std::move(coords), std::vector<double>(c.n, 1.0 / c.n), Point{arc, arc});
}

Complex fourier_measure(const AtomicMeasure& mu, std::span<const double> xi) {
    require(static_cast<int>(xi.size()) == mu.dim(), "xi", "dimension mismatch with measure");
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
        const double phase = dot(xi, mu.point(k));
        re += mu.weight(k) * std::cos(phase);
        im += mu.weight(k) * std::sin(phase);
    }
    return {re, im};
}

Complex fourier_measure_smoothed(const AtomicMeasure& mu, std::span<const double> xi) {
    Complex f = fourier_measure(mu, xi);
    if (!mu.cell()) return f;
    for (int a = 0; a < mu.dim(); ++a) {
        const double u = 0.5 * xi[a] * (*mu.cell())[a];
        if (u != 0.0) f *= std::sin(u) / u;
    }
    return f;
}

}  // namespace levypot
