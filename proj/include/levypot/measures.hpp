#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "levypot/common.hpp"

namespace levypot {

// Finitely supported probability measure. Points are stored row-major.
// `cell` optionally records the per-axis width of the uniform cell each atom
// stands in for; it enables the cell-smoothed transform and regularized
// diagonals, and is set by the grid-type discretizations.
class AtomicMeasure {
public:
    AtomicMeasure(int dim, std::vector<double> coords, std::vector<double> weights,
                  std::optional<Point> cell = std::nullopt);

    static AtomicMeasure dirac(Point x);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
    [[nodiscard]] std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
    [[nodiscard]] const std::vector<double>& coords() const noexcept { return coords_; }
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
    [[nodiscard]] const std::optional<Point>& cell() const noexcept { return cell_; }

    [[nodiscard]] AtomicMeasure translated(std::span<const double> shift) const;
    [[nodiscard]] AtomicMeasure with_weights(std::vector<double> weights) const;
    // Largest distance between two atoms.
    [[nodiscard]] double diameter() const;

    // CSV with header x1,...,xd,w.
    void write_csv(std::ostream& os) const;
    static AtomicMeasure read_csv(std::istream& is);

    friend bool operator==(const AtomicMeasure&, const AtomicMeasure&) = default;

private:
    int dim_;
    std::vector<double> coords_;
    std::vector<double> weights_;
    std::optional<Point> cell_;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

struct CubeGrid {
    std::vector<Interval> bounds;  // one per axis
    int n_per_axis = 1;
};

struct CantorProduct {
    double ratio = 1.0 / 3.0;
    int level = 0;
    int dim = 1;
};

struct TwoPoint {
    double separation = 1.0;
    int dim = 1;
};

struct Circle {
    double radius = 1.0;
    int n = 8;
};

using SetDiscretization = std::variant<CubeGrid, CantorProduct, TwoPoint, Circle>;

[[nodiscard]] std::string discretization_kind(const SetDiscretization& spec);
[[nodiscard]] int discretization_dim(const SetDiscretization& spec);

// Equal-weight point cloud: cell centers for CubeGrid, construction-interval
// midpoints for CantorProduct, +-separation/2 on the first axis for
// TwoPoint, equally spaced angles for Circle (d = 2).
[[nodiscard]] AtomicMeasure discretize(const SetDiscretization& spec);

// sum_k w_k exp(i xi.x_k).
[[nodiscard]] Complex fourier_measure(const AtomicMeasure& mu, std::span<const double> xi);

// Transform of the measure that spreads each atom uniformly over its cell:
// the atomic transform times prod_a sinc(xi_a h_a / 2). Equals the atomic
// transform when no cell is recorded.
[[nodiscard]] Complex fourier_measure_smoothed(const AtomicMeasure& mu, std::span<const double> xi);

}  // namespace levypot
