#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "levypot/exponents.hpp"

using namespace levypot;

namespace {
Complex at(const LevyExponent& e, std::vector<double> xi) { return e(xi); }
}  // namespace

TEST_CASE("closed-form exponent values") {
    CHECK(at(isotropic_stable(2, 1.5, 2.0), {0.6, 0.8}).real() == doctest::Approx(std::pow(2.0, 1.5)));
    CHECK(at(brownian(3, 2.0), {1.0, 1.0, 1.0}).real() == doctest::Approx(3.0));
    const Complex sk = at(skewed_stable(1.5, 0.5), {2.0});
    const double mag = std::pow(2.0, 1.5);
    CHECK(sk.real() == doctest::Approx(mag));
    CHECK(sk.imag() == doctest::Approx(-mag * 0.5 * std::tan(0.75 * std::numbers::pi)));
    const Complex dr = at(pure_drift({1.0, -2.0}), {0.5, 0.25});
    CHECK(dr.real() == 0.0);
    CHECK(dr.imag() == doctest::Approx(0.0));
    const Complex sm = at(sum_of({isotropic_stable(1, 1.0), pure_drift({3.0})}), {2.0});
    CHECK(sm.real() == doctest::Approx(2.0));
    CHECK(sm.imag() == doctest::Approx(-6.0));
}

TEST_CASE("exponents are negative definite: Re >= 0 and Psi(-xi) = conj Psi(xi)") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 3.0);
    const std::vector<LevyExponent> fams{isotropic_stable(1, 0.7), skewed_stable(1.3, -0.8), skewed_stable(0.5, 1.0),
                                         pure_drift({2.0}), sum_of({skewed_stable(1.8, 0.3), brownian(1, 0.5)})};
    for (const auto& e : fams) {
        for (int k = 0; k < 200; ++k) {
            const double x = g(rng);
            const Complex p = at(e, {x}), m = at(e, {-x});
            CHECK(p.real() >= 0.0);
            CHECK(std::abs(m - std::conj(p)) <= 1e-12 * (1.0 + std::abs(p)));
        }
    }
}

TEST_CASE("invalid parameters name the field") {
    auto field_of = [](auto&& fn) {
        try {
            fn();
        } catch (const InvalidArgument& e) {
            return e.field();
        }
        return std::string("none");
    };
    CHECK(field_of([] { (void)isotropic_stable(1, 3.0); }) == "alpha");
    CHECK(field_of([] { (void)isotropic_stable(1, 0.0); }) == "alpha");
    CHECK(field_of([] { (void)skewed_stable(1.5, 1.5); }) == "beta");
    CHECK(field_of([] { (void)skewed_stable(1.0, 0.5); }) == "beta");
    CHECK(field_of([] { (void)brownian(2, -1.0); }) == "diffusivity");
    CHECK(field_of([] { (void)isotropic_stable(0, 1.0); }) == "dim");
    CHECK(field_of([] { ExponentVector v({brownian(1), brownian(2)}); }) == "components");
    CHECK(field_of([] { (void)at(brownian(2), {1.0}); }) == "xi");
}

TEST_CASE("kernel product lies in [0, 1] and equals 1 at the origin") {
    ExponentVector v({isotropic_stable(2, 1.2), brownian(2)});
    std::vector<double> zero{0.0, 0.0};
    CHECK(k_psi(v, zero) == 1.0);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 4.0);
    for (int k = 0; k < 500; ++k) {
        std::vector<double> xi{g(rng), g(rng)};
        const double r = std::hypot(xi[0], xi[1]);
        const double ref = 1.0 / (1.0 + std::pow(r, 1.2)) / (1.0 + 0.5 * r * r);
        const double val = k_psi(v, xi);
        CHECK(val >= 0.0);
        CHECK(val <= 1.0);
        CHECK(val == doctest::Approx(ref).epsilon(1e-12));
        CHECK(k_psi_radial(v, r) == doctest::Approx(val).epsilon(1e-12));
    }
}

TEST_CASE("tail rates give the kernel decay") {
    CHECK(ExponentVector({isotropic_stable(1, 1.5)}).kernel_decay().value() == doctest::Approx(1.5));
    CHECK(ExponentVector({brownian(3), brownian(3)}).kernel_decay().value() == doctest::Approx(4.0));
    // Re(1/(1 - i b xi)) = 1/(1 + b^2 xi^2)
    CHECK(ExponentVector({pure_drift({2.0})}).kernel_decay().value() == doctest::Approx(2.0));
    // Skewed stable: decay alpha regardless of beta.
    CHECK(ExponentVector({skewed_stable(0.6, 1.0)}).kernel_decay().value() == doctest::Approx(0.6));
}

TEST_CASE("sector constant") {
    std::vector<Point> grid;
    for (int k = -60; k <= 60; ++k) grid.push_back({std::ldexp(1.0, k / 4) * (k < 0 ? -1.0 : 1.0)});
    CHECK(sector_constant(isotropic_stable(1, 1.5), grid) == 0.0);
    const double c = sector_constant(skewed_stable(1.5, 0.5), grid);
    CHECK(c < 0.5);
    CHECK(c > 0.49);
    CHECK(sector_constant(pure_drift({1.0}), grid) > 1e3);
}

TEST_CASE("symmetry and isotropy flags") {
    CHECK(isotropic_stable(2, 1.0).is_symmetric());
    CHECK(isotropic_stable(2, 1.0).is_isotropic());
    CHECK_FALSE(skewed_stable(1.5, 0.2).is_symmetric());
    CHECK(skewed_stable(1.5, 0.0).is_symmetric());
    CHECK_FALSE(pure_drift({1.0, 0.0}).is_isotropic());
}
