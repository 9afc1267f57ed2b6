#include <doctest.h>

#include <cmath>
#include <vector>

#include "levypot/quadrature.hpp"
#include "oracles.hpp"

using namespace levypot;

TEST_CASE("gauss-legendre rule is exact for polynomials up to degree 2n-1") {
    const auto& g = gauss_legendre(5);
    double s = 0.0, w = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        s += g.weights[i] * std::pow(g.nodes[i], 8);
        w += g.weights[i];
    }
    CHECK(s == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(integrate_gl([](double x) { return std::exp(x); }, 0.0, 1.0, 4, 8) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("adaptive kronrod matches simpson on smooth integrands") {
    auto f = [](double x) { return std::sin(x) * std::exp(-0.3 * x); };
    auto r = integrate_adaptive(f, 0.0, 7.0, 1e-12);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(oracle::simpson(f, 0.0, 7.0, 20000)).epsilon(1e-10));
}

TEST_CASE("origin substitution handles integrable power singularities") {
    auto r = integrate_power_origin([](double x) { return std::cos(x) / std::sqrt(x); }, 1.0, -0.5, 1e-10);
    // int_0^1 cos(x)/sqrt(x) dx = 2 int_0^1 cos(u^2) du
    const double ref = 2.0 * oracle::simpson([](double u) { return std::cos(u * u); }, 0.0, 1.0, 2000);
    CHECK(r.value == doctest::Approx(ref).epsilon(1e-9));
    CHECK_THROWS_AS((void)integrate_power_origin([](double) { return 1.0; }, 1.0, -1.0, 1e-8), InvalidArgument);
}

TEST_CASE("power tail is extrapolated beyond the truncation radius") {
    auto pure = integrate_power_tail([](double r) { return std::pow(r, -2.5); }, 1.0, 100.0,
                                     TailPolicy::PowerLawExtrapolate, 1e-10);
    CHECK(pure.converged);
    CHECK(pure.value == doctest::Approx(1.0 / 1.5).epsilon(1e-10));
    // A shifted power is only asymptotically geometric over doublings.
    auto f = [](double r) { return std::pow(1.0 + r, -2.5); };
    auto r = integrate_power_tail(f, 1.0, 1e4, TailPolicy::PowerLawExtrapolate, 1e-5);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::pow(2.0, -1.5) / 1.5).epsilon(1e-5));
    auto t = integrate_power_tail(f, 1.0, 1e4, TailPolicy::Truncate, 1e-5);
    CHECK(t.value < r.value);
    CHECK(t.error > 0.0);
}

TEST_CASE("non-decaying tail is flagged") {
    auto r = integrate_power_tail([](double x) { return 1.0 / x; }, 1.0, 1e3, TailPolicy::PowerLawExtrapolate, 1e-8);
    CHECK_FALSE(r.converged);
}

TEST_CASE("oscillatory fourier integrals") {
    for (double w : {0.5, 1.0, 3.0}) {
        auto r = integrate_oscillatory([](double x) { return 1.0 / (1.0 + x * x); }, w, Trig::Cos, 1e-10);
        CHECK(r.value == doctest::Approx(oracle::pi / 2.0 * std::exp(-w)).epsilon(1e-7));
    }
    // int_0^inf sin(w x) x / (1 + x^2) dx = (pi/2) e^-w
    auto s = integrate_oscillatory([](double x) { return x / (1.0 + x * x); }, 2.0, Trig::Sin, 1e-10);
    CHECK(s.value == doctest::Approx(oracle::pi / 2.0 * std::exp(-2.0)).epsilon(1e-6));
}

TEST_CASE("tensor box rule") {
    std::vector<double> lo{0.0, 0.0}, hi{1.0, 2.0};
    double v = integrate_box([](std::span<const double> x) { return x[0] * x[1] * x[1]; }, lo, hi, 6);
    CHECK(v == doctest::Approx(0.5 * 8.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("quadrature settings validation names the field") {
    QuadratureSpec q;
    q.r_max = -1.0;
    try {
        q.validate();
        FAIL("expected InvalidArgument");
    } catch (const InvalidArgument& e) {
        CHECK(e.field() == "r_max");
    }
    q = {};
    q.n_nodes = 4;
    CHECK_THROWS_AS(q.validate(), InvalidArgument);
    q = {};
    q.rel_tol = 0.0;
    CHECK_THROWS_AS(q.validate(), InvalidArgument);
}
