#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "levypot/energy.hpp"
#include "oracles.hpp"

using namespace levypot;

namespace {

AtomicMeasure random_measure(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-2.0, 2.0), w(0.1, 1.0);
    std::vector<double> x(n), ws(n);
    double tot = 0.0;
    for (int i = 0; i < n; ++i) {
        x[i] = u(rng);
        ws[i] = w(rng);
        tot += ws[i];
    }
    for (auto& v : ws) v /= tot;
    return AtomicMeasure(1, x, ws);
}

const QuadratureSpec kQuad = [] {
    QuadratureSpec q;
    q.rel_tol = 1e-8;
    return q;
}();

}  // namespace

TEST_CASE("real-side mutual energy equals the direct double sum") {
    std::mt19937_64 rng(21);
    auto k = gaussian_kernel(1, 0.6);
    for (int rep = 0; rep < 5; ++rep) {
        auto mu = random_measure(rng, 30), nu = random_measure(rng, 17);
        const double ref = oracle::double_sum([](double t) { return std::exp(-t * t / 0.72); }, mu.coords(),
                                              mu.weights(), nu.coords(), nu.weights());
        CHECK(mutual_energy_real(k, mu, nu) == doctest::Approx(ref).epsilon(1e-13));
        CHECK(mutual_energy_real(k, mu, nu, DiagonalMode::Exact, Exec::Serial) ==
              mutual_energy_real(k, mu, nu, DiagonalMode::Exact, Exec::Parallel));
        CHECK(mutual_energy_real(k, mu, nu) == doctest::Approx(mutual_energy_real(k, nu, mu)).epsilon(1e-14));
    }
}

TEST_CASE("diagonal modes") {
    auto k = riesz_kernel(1, 0.5);
    auto g = discretize(CubeGrid{{{0.0, 1.0}}, 16});
    CHECK(std::isinf(mutual_energy_real(k, g, g, DiagonalMode::Exact)));
    const double drop = mutual_energy_real(k, g, g, DiagonalMode::Drop);
    const double avg = mutual_energy_real(k, g, g, DiagonalMode::CellAverage);
    CHECK(std::isfinite(drop));
    CHECK(avg == doctest::Approx(drop + oracle::riesz_cell_mean(1.0 / 16, 0.5) / 16.0).epsilon(1e-12));
    auto bare = AtomicMeasure(1, {0.0, 0.5}, {0.5, 0.5});
    CHECK_THROWS_AS((void)mutual_energy_real(k, bare, bare, DiagonalMode::CellAverage), InvalidArgument);
}

TEST_CASE("fourier energy of point masses is the potential density at 0") {
    auto e = energy_fourier(ExponentVector({brownian(1)}), AtomicMeasure::dirac({0.3}), kQuad);
    CHECK(e.converged);
    CHECK(e.value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    auto s = energy_fourier(ExponentVector({isotropic_stable(1, 1.5)}), discretize(TwoPoint{1.0, 1}), kQuad);
    // (v(0) + v(1)) / 2 with v(1) = (1/pi) int cos(xi) / (1 + xi^1.5)
    const double v1 = (1.0 / oracle::pi) *
                      oracle::simpson([](double t) { return std::cos(t) / (1.0 + std::pow(t, 1.5)); }, 0.0, 2000.0,
                                      2000000);
    CHECK(s.value == doctest::Approx(0.5 * (oracle::stable_v0(1.5) + v1)).epsilon(2e-4));
}

TEST_CASE("tail rule decides divergence") {
    auto e = energy_fourier(ExponentVector({isotropic_stable(1, 1.0)}), AtomicMeasure::dirac({0.0}), kQuad);
    CHECK(std::isinf(e.value));
    auto b2 = energy_fourier(ExponentVector({brownian(2)}), AtomicMeasure::dirac({0.0, 0.0}), kQuad);
    CHECK(std::isinf(b2.value));
    auto b3 = energy_fourier(ExponentVector({brownian(3), brownian(3)}), discretize(TwoPoint{1.0, 3}), kQuad);
    CHECK(std::isfinite(b3.value));
    CHECK(b3.value > 0.0);
}

TEST_CASE("energy is translation invariant") {
    std::mt19937_64 rng(9);
    auto mu = random_measure(rng, 6);
    ExponentVector v({isotropic_stable(1, 1.7)});
    std::vector<double> shift{3.3};
    auto a = energy_fourier(v, mu, kQuad), b = energy_fourier(v, mu.translated(shift), kQuad);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-8));
}

TEST_CASE("identity check smoke cases") {
    auto tp = discretize(TwoPoint{1.0, 1});
    auto ic = energy_identity_check(gaussian_kernel(1, 0.7), AtomicMeasure::dirac({0.0}), tp, kQuad);
    CHECK(ic.rel_gap < 1e-6);
    // real side: int kappa(x - y) dnu(y) dmu(x) with kappa * delta_0 = kappa
    CHECK(ic.real_side == doctest::Approx(0.5 * (1.0 + std::exp(-1.0 / 0.98))).epsilon(1e-12));
    auto ic2 = energy_identity_check(exponential_kernel(1.3), tp, discretize(CubeGrid{{{0.0, 1.0}}, 7}), kQuad);
    CHECK(ic2.rel_gap < 1e-6);
}

TEST_CASE("riesz identity on the unit interval") {
    auto mu = discretize(CubeGrid{{{0.0, 1.0}}, 512});
    QuadratureSpec q;
    q.rel_tol = 1e-6;
    auto rc = riesz_identity_check(0.5, mu, q);
    CHECK(rc.real_side == doctest::Approx(oracle::riesz_unit_interval(0.5)).epsilon(0.005));
    CHECK(rc.rel_gap < 0.02);
}

TEST_CASE("sojourn second moment formula") {
    auto fh = [](std::span<const double> xi) { return Complex(std::exp(-0.5 * xi[0] * xi[0]), 0.0); };
    ExponentVector v({isotropic_stable(1, 1.5)});
    auto sm = sojourn_second_moment(v, fh, kQuad);
    const double ref = 0.25 / oracle::pi *
                       oracle::simpson([](double t) { return std::exp(-t * t) * oracle::lambda(std::pow(t, 1.5)); },
                                       0.0, 10.0, 20000);
    CHECK(sm.value == doctest::Approx(ref).epsilon(1e-7));
    CHECK(sm.value == doctest::Approx(0.18299546).epsilon(1e-6));

    std::vector<Point> grid;
    for (int k = -20; k <= 20; ++k) grid.push_back({std::ldexp(1.0, k)});
    auto b = sojourn_bounds(v, fh, kQuad, grid);
    CHECK(b.sector_constant == 0.0);
    CHECK(sm.value <= b.upper);
    CHECK(sm.value >= b.lower_corrected);
    // The factor-(2 - c^2) lower bound equals I here and sits above the moment.
    CHECK(b.lower == doctest::Approx(b.upper));
    CHECK(sm.value < b.lower);
}

TEST_CASE("spectral radial integral in three dimensions") {
    auto r = spectral_radial([](double x) { return std::exp(-x * x); }, 3, 0.0, 0.0, kQuad);
    CHECK(r.value == doctest::Approx(std::pow(oracle::pi, 1.5) / std::pow(2.0 * oracle::pi, 3)).epsilon(1e-8));
}
