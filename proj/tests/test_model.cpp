#include <cmath>
#include <random>

#include "doctest.h"
#include "piston/model.hpp"
#include "piston/quadrature.hpp"

using namespace piston;

TEST_CASE("geometry invariants") {
    PistonGeometry g(1.0, 0.25);
    CHECK(g.side_length(Side::Left) == doctest::Approx(0.25));
    CHECK(g.side_length(Side::Right) == doctest::Approx(0.75));
    CHECK(g.side_length(Side::Left) + g.side_length(Side::Right) == doctest::Approx(g.L));
    CHECK_THROWS_AS(PistonGeometry(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PistonGeometry(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PistonGeometry(-1.0, 0.5), std::invalid_argument);
}

TEST_CASE("mode validity") {
    CHECK_THROWS_AS(Mode(Side::Left, 0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(Mode(Side::Left, 1, -1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(Mode(Side::Left, 1, 1.0, 3), std::invalid_argument);
    CHECK_NOTHROW(Mode(Side::Left, 0, 1.0, 2));
}

TEST_CASE("omega0 values") {
    PistonGeometry g(1.0, 0.5);
    CHECK(omega0(g, Mode(Side::Left, 1, 0.0, 2)) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
    CHECK(omega0(g, Mode(Side::Left, 0, 3.0, 2)) == doctest::Approx(3.0).epsilon(1e-14));
    PistonGeometry g2(1.0, 0.25);
    double want = std::sqrt(std::pow(2.0 * M_PI / 0.75, 2) + 1.0);
    CHECK(omega0(g2, Mode(Side::Right, 2, 1.0, 2)) == doctest::Approx(want).epsilon(1e-14));
    // Lower bound: omega0 >= m pi / s, equality iff k_par = 0.
    CHECK(omega0(g, Mode(Side::Left, 3, 0.0, 1)) == doctest::Approx(3.0 * M_PI / 0.5));
    CHECK(omega0(g, Mode(Side::Left, 3, 0.1, 1)) > 3.0 * M_PI / 0.5);
}

TEST_CASE("mode fields") {
    PistonGeometry g(1.0, 0.7);

    SUBCASE("TE-like field vanishes at the wall") {
        auto E = mode_field(g, Mode(Side::Left, 2, 1.0, 1), 0.0);
        CHECK(std::abs(E[0]) == 0.0);
        CHECK(std::abs(E[1]) == 0.0);
        CHECK(std::abs(E[2]) == 0.0);
    }

    SUBCASE("m = 0 mode is a normalized constant along x_hat") {
        Mode mode(Side::Left, 0, 2.0, 2);
        auto E1 = mode_field(g, mode, 0.1);
        auto E2 = mode_field(g, mode, 0.6);
        CHECK(E1[0].real() == doctest::Approx(std::sqrt(1.0 / 0.7)).epsilon(1e-13));
        CHECK(E1[0] == E2[0]);
        double n = quad::integrate(
            [&](double x) {
                auto E = mode_field(g, mode, x);
                return std::norm(E[0]) + std::norm(E[1]) + std::norm(E[2]);
            },
            0.0, 0.7, 1e-12);
        CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("normalization of an oscillating TM-like mode") {
        Mode mode(Side::Left, 3, 2.0, 2);
        double n = quad::integrate(
            [&](double x) {
                auto E = mode_field(g, mode, x);
                return std::norm(E[0]) + std::norm(E[1]) + std::norm(E[2]);
            },
            0.0, 0.7, 1e-12);
        CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("x outside the side interval is rejected") {
        CHECK_THROWS_AS(mode_field(g, Mode(Side::Left, 1, 1.0, 2), 0.9), std::domain_error);
        CHECK_THROWS_AS(mode_field(g, Mode(Side::Right, 1, 1.0, 2), 0.2), std::domain_error);
    }
}

TEST_CASE("dielectric profiles") {
    auto sin_p = DielectricProfile::sinusoidal(0.5);
    CHECK(sin_p.value(0.5, 1.0) == doctest::Approx(0.5));
    CHECK(sin_p.value(0.0, 1.0) == doctest::Approx(0.0));

    auto tab = DielectricProfile::tabulated({{0.0, 0.1}, {0.5, 0.2}, {1.0, 0.1}});
    CHECK(tab.value(0.25, 1.0) == doctest::Approx(0.15));
    CHECK_THROWS_AS(DielectricProfile::tabulated({{0.0, 0.1}, {0.0, 0.2}}),
                    std::invalid_argument);
    // Samples must cover the chamber.
    auto narrow = DielectricProfile::tabulated({{0.2, 0.1}, {0.8, 0.1}});
    CHECK_THROWS_AS(narrow.value(0.5, 1.0), std::domain_error);
}

TEST_CASE("transfer matrix reproduces the empty-cavity spectrum") {
    PistonGeometry g(1.0, 0.4);
    auto empty = DielectricProfile::sinusoidal(0.0);

    SUBCASE("TE at k_par = 0: m pi / s") {
        auto roots = transfer_matrix_eigenfrequencies(g, Side::Left, empty, 0.0, 1, 60.0, 32);
        REQUIRE(roots.size() >= 7);
        for (std::size_t m = 1; m <= roots.size(); ++m)
            CHECK(roots[m - 1] == doctest::Approx(m * M_PI / 0.4).epsilon(1e-9));
    }

    SUBCASE("TM at k_par > 0 includes the m = 0 branch") {
        double k = 1.3;
        auto roots = transfer_matrix_eigenfrequencies(g, Side::Right, empty, k, 2, 40.0, 32);
        REQUIRE(roots.size() >= 4);
        for (std::size_t m = 0; m < roots.size(); ++m) {
            double want = std::hypot(m * M_PI / 0.6, k);
            CHECK(roots[m] == doctest::Approx(want).epsilon(1e-9));
        }
    }

    SUBCASE("matches omega0 to 1e-9 relative for m <= 10") {
        auto roots = transfer_matrix_eigenfrequencies(g, Side::Left, empty, 2.0, 1,
                                                      11.0 * M_PI / 0.4, 16);
        REQUIRE(roots.size() >= 10);
        for (int m = 1; m <= 10; ++m) {
            double want = omega0(g, Mode(Side::Left, m, 2.0, 1));
            CHECK(std::abs(roots[m - 1] - want) / want < 1e-9);
        }
    }
}

TEST_CASE("transfer matrix self-convergence in layer count") {
    PistonGeometry g(1.0, 0.4);
    auto profile = DielectricProfile::sinusoidal(1e-3);
    auto r64 = transfer_matrix_eigenfrequencies(g, Side::Left, profile, 1.0, 2, 30.0, 64);
    auto r128 = transfer_matrix_eigenfrequencies(g, Side::Left, profile, 1.0, 2, 30.0, 128);
    REQUIRE(r64.size() == r128.size());
    for (std::size_t i = 0; i < r64.size(); ++i)
        CHECK(std::abs(r64[i] - r128[i]) / r128[i] < 1e-6);
}

TEST_CASE("transfer matrix argument validation") {
    PistonGeometry g(1.0, 0.4);
    auto empty = DielectricProfile::sinusoidal(0.0);
    CHECK_THROWS_AS(transfer_matrix_eigenfrequencies(g, Side::Left, empty, 0.0, 1, 10.0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(transfer_matrix_eigenfrequencies(g, Side::Left, empty, 0.0, 1, -1.0, 8),
                    std::invalid_argument);
}
