#include <doctest.h>

#include <cmath>
#include <vector>

#include "levypot/equilibrium.hpp"
#include "oracles.hpp"

using namespace levypot;

namespace {

EnergyMatrix matrix(std::size_t n, std::vector<double> e) {
    EnergyMatrix m;
    m.n = n;
    m.entries = std::move(e);
    return m;
}

bool monotone(const std::vector<double>& h) {
    for (std::size_t i = 1; i < h.size(); ++i)
        if (h[i] > h[i - 1]) return false;
    return true;
}

}  // namespace

TEST_CASE("two symmetric atoms split evenly") {
    auto r = solve_equilibrium(matrix(2, {3.0, 1.0, 1.0, 3.0}));
    CHECK(r.converged);
    CHECK(std::abs(r.weights[0] - 0.5) < 1e-8);
    CHECK(std::abs(r.weights[1] - 0.5) < 1e-8);
    CHECK(r.energy == doctest::Approx(2.0));
    CHECK(r.capacity == doctest::Approx(0.5));
    CHECK(monotone(r.energy_history));
}

TEST_CASE("diagonal matrix weights are proportional to inverse diagonal") {
    auto r = solve_equilibrium(matrix(3, {1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 4.0}));
    CHECK(r.converged);
    // w_i = (1/m_i) / sum(1/m_j), energy 1 / sum(1/m_j)
    CHECK(r.weights[0] == doctest::Approx(4.0 / 7.0).epsilon(1e-7));
    CHECK(r.weights[1] == doctest::Approx(2.0 / 7.0).epsilon(1e-7));
    CHECK(r.weights[2] == doctest::Approx(1.0 / 7.0).epsilon(1e-7));
    CHECK(r.energy == doctest::Approx(4.0 / 7.0).epsilon(1e-8));
    CHECK(r.fw_gap < 1e-8);
}

TEST_CASE("atoms with infinite self-energy get no mass") {
    auto r = solve_equilibrium(matrix(2, {kInf, 1.0, 1.0, 2.0}));
    CHECK(r.weights[0] == 0.0);
    CHECK(r.weights[1] == doctest::Approx(1.0));
    CHECK(r.energy == doctest::Approx(2.0));
}

TEST_CASE("solver input validation") {
    CHECK_THROWS_AS((void)solve_equilibrium(matrix(2, {1.0, 0.5, 0.4, 1.0})), InvalidArgument);
    CHECK_THROWS_AS((void)solve_equilibrium(matrix(2, {1.0, -0.5, -0.5, 1.0})), InvalidArgument);
    SolverOptions o;
    o.initial = {1.0};
    CHECK_THROWS_AS((void)solve_equilibrium(matrix(2, {1.0, 0.5, 0.5, 1.0}), o), InvalidArgument);
    o = {};
    o.tol = 0.0;
    CHECK_THROWS_AS((void)solve_equilibrium(matrix(2, {1.0, 0.5, 0.5, 1.0}), o), InvalidArgument);
}

TEST_CASE("circle equilibrium is uniform") {
    auto r = bessel_riesz_capacity(SetDiscretization{Circle{1.0, 16}}, 1.0);
    CHECK(r.converged);
    for (double w : r.weights) CHECK(std::abs(w - 1.0 / 16.0) < 1e-6);
    CHECK(monotone(r.energy_history));
}

TEST_CASE("interval capacity bounded below by the uniform measure") {
    double prev = kInf;
    for (double s : {0.1, 0.5, 0.9}) {
        auto r = bessel_riesz_capacity(SetDiscretization{CubeGrid{{{0.0, 1.0}}, 200}}, s);
        CHECK(r.converged);
        CHECK(r.fw_gap <= 1e-8);
        CHECK(monotone(r.energy_history));
        const double lower = 1.0 / oracle::riesz_unit_interval(s);
        CHECK(r.capacity >= lower * 0.995);
        CHECK(r.capacity <= lower * 1.05);
        CHECK(r.capacity < prev);
        prev = r.capacity;
        // Equilibrium mass piles up at the endpoints.
        CHECK(r.weights.front() > r.weights[100]);
    }
}

TEST_CASE("cantor capacity shrinks with level above the set's dimension") {
    double prev = kInf;
    for (int level : {3, 5, 7}) {
        auto r = bessel_riesz_capacity(SetDiscretization{CantorProduct{1.0 / 3.0, level, 1}}, 0.8);
        CHECK(r.converged);
        CHECK(r.capacity < prev);
        prev = r.capacity;
    }
}

TEST_CASE("matrix assembly from exponents") {
    ExponentVector v({isotropic_stable(1, 1.5)});
    QuadratureSpec q;
    CubeGrid g{{{0.0, 1.0}}, 10};
    auto reg = assemble_matrix(v, SetDiscretization{g}, q, DiagonalPolicy::Regularized, Exec::Serial);
    auto par = assemble_matrix(v, SetDiscretization{g}, q, DiagonalPolicy::Regularized, Exec::Parallel);
    CHECK(reg.entries == par.entries);
    auto inf = assemble_matrix(v, SetDiscretization{g}, q, DiagonalPolicy::Infinite);
    PotentialDensity pd(v, q);
    CHECK(inf(0, 0) == doctest::Approx(oracle::stable_v0(1.5)).epsilon(1e-6));
    CHECK(reg(0, 0) == doctest::Approx(pd.cell_average_1d(0.1)).epsilon(1e-10));
    CHECK(reg(2, 5) == doctest::Approx(pd.at_radius(0.3)).epsilon(1e-10));
    CHECK(reg(2, 5) == reg(5, 2));
}

TEST_CASE("point capacity") {
    for (double a : {1.2, 1.5, 2.0})
        CHECK(point_capacity_test(ExponentVector({isotropic_stable(1, a)})).positive == TriState::True);
    for (double a : {0.5, 0.8, 1.0})
        CHECK(point_capacity_test(ExponentVector({isotropic_stable(1, a)})).positive == TriState::False);
    CHECK(point_capacity_test(ExponentVector({brownian(2)})).positive == TriState::False);
    auto two = point_capacity_test(ExponentVector({brownian(3), brownian(3)}));
    CHECK(two.positive == TriState::True);
    CHECK(two.method == "tail-rule");
}
