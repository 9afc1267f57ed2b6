#include <doctest.h>

#include <cmath>
#include <sstream>

#include "levypot/measures.hpp"

using namespace levypot;

TEST_CASE("grid discretization uses cell centres and records the cell") {
    auto m = discretize(CubeGrid{{{0.0, 1.0}, {2.0, 4.0}}, 4});
    REQUIRE(m.size() == 16);
    CHECK(m.dim() == 2);
    REQUIRE(m.cell().has_value());
    CHECK((*m.cell())[0] == doctest::Approx(0.25));
    CHECK((*m.cell())[1] == doctest::Approx(0.5));
    double xs = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(m.weight(i) == doctest::Approx(1.0 / 16));
        xs += m.point(i)[0];
        CHECK(m.point(i)[1] > 2.0);
        CHECK(m.point(i)[1] < 4.0);
    }
    CHECK(xs == doctest::Approx(8.0));
}

TEST_CASE("cantor discretization") {
    auto m = discretize(CantorProduct{1.0 / 3.0, 1, 1});
    REQUIRE(m.size() == 2);
    CHECK(m.point(0)[0] == doctest::Approx(1.0 / 6.0));
    CHECK(m.point(1)[0] == doctest::Approx(5.0 / 6.0));
    auto m3 = discretize(CantorProduct{0.25, 3, 2});
    CHECK(m3.size() == 64);
    CHECK(m3.diameter() < std::sqrt(2.0));
    CHECK_THROWS_AS((void)discretize(CantorProduct{0.6, 2, 1}), InvalidArgument);
}

TEST_CASE("two-point and circle") {
    auto t = discretize(TwoPoint{2.0, 3});
    REQUIRE(t.size() == 2);
    CHECK(t.point(0)[0] == doctest::Approx(-1.0));
    CHECK(t.point(1)[0] == doctest::Approx(1.0));
    CHECK(t.diameter() == doctest::Approx(2.0));
    auto c = discretize(Circle{1.5, 12});
    REQUIRE(c.size() == 12);
    for (std::size_t i = 0; i < c.size(); ++i)
        CHECK(std::hypot(c.point(i)[0], c.point(i)[1]) == doctest::Approx(1.5));
    CHECK(c.diameter() == doctest::Approx(3.0));
    CHECK(discretization_kind(SetDiscretization{Circle{}}) == "circle");
    CHECK(discretization_dim(SetDiscretization{Circle{}}) == 2);
}

TEST_CASE("measure validation") {
    CHECK_THROWS_AS(AtomicMeasure(1, {0.0, 1.0}, {0.7, 0.7}), InvalidArgument);
    CHECK_THROWS_AS(AtomicMeasure(1, {0.0, 1.0}, {1.5, -0.5}), InvalidArgument);
    CHECK_THROWS_AS(AtomicMeasure(2, {0.0, 1.0, 2.0}, {1.0}), InvalidArgument);
    CHECK_THROWS_AS(AtomicMeasure(1, {0.0}, {1.0}, Point{0.0}), InvalidArgument);
    CHECK_THROWS_AS((void)discretize(CubeGrid{{{1.0, 0.0}}, 4}), InvalidArgument);
}

TEST_CASE("fourier transform of atomic measures") {
    auto t = discretize(TwoPoint{1.0, 1});
    for (double xi : {0.0, 0.3, 2.0, 7.5}) {
        std::vector<double> x{xi};
        const Complex f = fourier_measure(t, x);
        CHECK(f.real() == doctest::Approx(std::cos(xi / 2.0)));
        CHECK(f.imag() == doctest::Approx(0.0));
    }
    // Translation multiplies the transform by a phase.
    auto g = discretize(CubeGrid{{{0.0, 1.0}}, 5});
    std::vector<double> shift{0.7}, xi{1.9};
    const Complex a = fourier_measure(g, xi), b = fourier_measure(g.translated(shift), xi);
    CHECK(std::abs(b - a * std::exp(Complex(0.0, 1.9 * 0.7))) < 1e-13);
    CHECK(std::abs(fourier_measure(g, std::vector<double>{0.0}) - 1.0) < 1e-14);
}

TEST_CASE("cell-smoothed transform multiplies by sinc") {
    auto g = discretize(CubeGrid{{{0.0, 1.0}}, 8});
    std::vector<double> xi{5.0};
    const double h = 1.0 / 8.0;
    const Complex s = fourier_measure_smoothed(g, xi), a = fourier_measure(g, xi);
    CHECK(std::abs(s - a * (std::sin(5.0 * h / 2) / (5.0 * h / 2))) < 1e-14);
    // Eight cells tile [0,1]: smoothed transform is that of Lebesgue measure.
    const Complex leb = (std::exp(Complex(0.0, 5.0)) - 1.0) / Complex(0.0, 5.0);
    CHECK(std::abs(s - leb) < 1e-13);
    auto d = AtomicMeasure::dirac({0.4});
    CHECK(fourier_measure_smoothed(d, xi) == fourier_measure(d, xi));
}

TEST_CASE("csv round trip") {
    auto m = discretize(CantorProduct{0.3, 2, 2});
    std::stringstream ss;
    m.write_csv(ss);
    std::string header;
    std::getline(std::istringstream(ss.str()) >> std::ws, header);
    CHECK(header == "x1,x2,w");
    auto back = AtomicMeasure::read_csv(ss);
    REQUIRE(back.size() == m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(back.point(i)[0] == m.point(i)[0]);
        CHECK(back.point(i)[1] == m.point(i)[1]);
        CHECK(back.weight(i) == m.weight(i));
    }
}
