#include <cmath>
#include <random>

#include "doctest.h"
#include "piston/perturbation.hpp"
#include "piston/specfun.hpp"

using namespace piston;

TEST_CASE("shift quadrature basics") {
    PistonGeometry g(1.0, 0.4);

    SUBCASE("zero profile gives zero shift") {
        auto r = first_order_shift_quadrature(g, Mode(Side::Left, 1, 1.0, 2),
                                              DielectricProfile::sinusoidal(0.0));
        CHECK(r.omega1 == doctest::Approx(0.0));
    }

    SUBCASE("constant profile collapses to -omega0 c0 / 2") {
        auto flat = DielectricProfile::tabulated({{0.0, 0.1}, {1.0, 0.1}});
        Mode mode(Side::Left, 2, 1.5, 2);
        auto r = first_order_shift_quadrature(g, mode, flat);
        CHECK(r.omega1 == doctest::Approx(-0.05 * omega0(g, mode)).epsilon(1e-10));
    }
}

TEST_CASE("closed shifts match quadrature for the sinusoidal profile") {
    auto unit_sin = DielectricProfile::sinusoidal(1.0);
    for (double a : {0.3, 0.4, 0.6}) {
        PistonGeometry g(1.0, a);
        for (int lambda : {1, 2})
            for (int m : {1, 2, 3})
                for (double k : {0.0, 1.3}) {
                    for (Side side : {Side::Left, Side::Right}) {
                        Mode mode(side, m, k, lambda);
                        double c = first_order_shift_closed(g, mode).omega1;
                        double q = first_order_shift_quadrature(g, mode, unit_sin).omega1;
                        CHECK(c == doctest::Approx(q).epsilon(1e-9));
                    }
                }
    }
}

TEST_CASE("excluded and degenerate modes") {
    PistonGeometry g(1.0, 0.4);
    CHECK_THROWS_AS(first_order_shift_closed(g, Mode(Side::Left, 0, 1.0, 1)),
                    std::invalid_argument);
    // TE and TM shifts coincide at k_par = 0, where the polarizations are
    // degenerate.
    double s1 = first_order_shift_closed(g, Mode(Side::Left, 2, 0.0, 1)).omega1;
    double s2 = first_order_shift_closed(g, Mode(Side::Left, 2, 0.0, 2)).omega1;
    CHECK(s1 == doctest::Approx(s2).epsilon(1e-13));
}

TEST_CASE("m = 0 normalization discrepancy is surfaced, not hidden") {
    // The literal closed form inherits the m > 0 normalization, which
    // overcounts the constant m = 0 mode by 2; the volume-normalized
    // quadrature of the overlap integral is authoritative.
    PistonGeometry g(1.0, 0.4);
    auto d = m0_lambda2_discrepancy(g, 2.0);
    CHECK(d.closed_literal == doctest::Approx(2.0 * d.quadrature).epsilon(1e-9));
}

TEST_CASE("shift integrals: quadrature vs closed") {
    PistonGeometry g(1.0, 0.3);
    for (int m : {0, 1, 2, 5})
        for (int lambda : {1, 2})
            for (double xi : {0.05, 0.2}) {
                if (m == 0 && lambda == 1) continue;
                Regulator reg(xi);
                double q = shift_integral_quadrature(g, Side::Left, m, lambda, reg).value;
                double c = shift_integral_closed(g, Side::Left, m, lambda, reg).value;
                CHECK(std::abs(q - c) / std::abs(c) < 1e-8);
            }
}

TEST_CASE("shift integral symmetries and exclusions") {
    PistonGeometry g(1.0, 0.3);
    PistonGeometry swapped(1.0, 0.7);
    Regulator reg(0.1);
    CHECK_THROWS_AS(shift_integral_closed(g, Side::Left, 0, 1, reg), std::invalid_argument);
    // Right-side value equals the left-side value after a -> L-a.
    for (int lambda : {1, 2}) {
        double r = shift_integral_closed(g, Side::Right, 2, lambda, reg).value;
        double l = shift_integral_closed(swapped, Side::Left, 2, lambda, reg).value;
        CHECK(r == doctest::Approx(l).epsilon(1e-13));
    }
    // m = 0, TM-like family stays finite.
    double v = shift_integral_quadrature(g, Side::Left, 0, 2, reg).value;
    CHECK(std::isfinite(v));
    CHECK(v < 0.0);
}

TEST_CASE("TE integrand is the unperturbed integrand times a constant") {
    // For lambda = 1 the relative shift is k-independent, so the closed
    // integral is that constant times the exact exponential moment.
    PistonGeometry g(1.0, 0.3);
    Regulator reg(0.1);
    int m = 2;
    double mu = m * M_PI / 0.3;
    double xi = reg.xi;
    double moment = std::exp(-xi * mu) *
                    (mu * mu / xi + 2.0 * mu / (xi * xi) + 2.0 / (xi * xi * xi));
    double ratio = shift_integral_closed(g, Side::Left, m, 1, reg).value / moment;
    double shift_ratio = first_order_shift_closed(g, Mode(Side::Left, m, 1.0, 1)).omega1 /
                         omega0(g, Mode(Side::Left, m, 1.0, 1));
    CHECK(ratio == doctest::Approx(shift_ratio).epsilon(1e-12));
}

TEST_CASE("denergy routes agree") {
    SUBCASE("sum vs closed") {
        for (double a : {0.3, 0.5, 0.7}) {
            PistonGeometry g(1.0, a);
            Regulator reg(0.1);
            double s = denergy_dalpha_sum(g, reg);
            double c = denergy_dalpha_closed(g, reg);
            CHECK(std::abs(s - c) / std::abs(c) < 1e-9);
        }
    }

    SUBCASE("a <-> L-a symmetry") {
        Regulator reg(0.15);
        CHECK(denergy_dalpha_sum(PistonGeometry(1.0, 0.35), reg) ==
              doctest::Approx(denergy_dalpha_sum(PistonGeometry(1.0, 0.65), reg))
                  .epsilon(1e-12));
    }

    SUBCASE("sign at the midpoint") {
        CHECK(denergy_dalpha_sum(PistonGeometry(1.0, 0.5), Regulator(0.2)) < 0.0);
    }

    SUBCASE("closed vs asymptotic as xi -> 0") {
        PistonGeometry g(1.0, 0.4);
        Regulator reg(1e-3 * 0.4);
        double c = denergy_dalpha_closed(g, reg);
        double a = denergy_dalpha_asymptotic(g, reg);
        CHECK(std::abs(c / a - 1.0) < 1e-3);
    }

    SUBCASE("closed minus asymptotic shrinks at first order in xi") {
        PistonGeometry g(1.0, 0.4);
        auto defect = [&](double xi) {
            return std::abs(denergy_dalpha_closed(g, Regulator(xi)) -
                            denergy_dalpha_asymptotic(g, Regulator(xi)));
        };
        double d1 = defect(4e-3), d2 = defect(2e-3);
        CHECK(d2 < d1 / 1.7);
    }
}

TEST_CASE("oracle chain: transfer-matrix shifts confirm the closed forms") {
    PistonGeometry g(1.0, 0.4);
    double alpha = 1e-4;
    for (int lambda : {1, 2})
        for (int m : {1, 2}) {
            double k = 1.0;
            Mode mode(Side::Left, m, k, lambda);
            double w0 = omega0(g, mode);
            auto nearest = [&](double amp) {
                auto roots = transfer_matrix_eigenfrequencies(
                    g, Side::Left, DielectricProfile::sinusoidal(amp), k, lambda, w0 + 2.0, 96);
                REQUIRE(!roots.empty());
                double best = roots[0];
                for (double r : roots)
                    if (std::abs(r - w0) < std::abs(best - w0)) best = r;
                return best;
            };
            double fd = (nearest(alpha) - nearest(0.0)) / alpha;
            double closed = first_order_shift_closed(g, mode).omega1;
            CHECK(std::abs(fd / closed - 1.0) < 1e-3);
        }
}

TEST_CASE("exact Lerch bracket minus its truncation scales as O(xi)") {
    PistonGeometry g(1.0, 0.4);
    double L = 1.0, s = 0.4, v = s / (2.0 * L);
    auto bracket_exact = [&](double xi) {
        return specfun::lerch_dxi2_antisym(v, s, xi) / xi;
    };
    auto bracket_truncated = [&](double xi) {
        double psi_p = specfun::digamma(v), psi_m = specfun::digamma(-v);
        double pa = M_PI / s;
        return -2.0 * pa * v / (xi * xi) -
               2.0 * std::pow(pa * v, 3) * std::log(xi * pa) -
               pa * pa * v / xi * (1.0 + v * (psi_p - psi_m)) -
               std::pow(pa, 3) * v *
                   (v * v * (2.0 * (specfun::kEulerGamma - 1.0) + psi_p + psi_m) + 1.0 / 6.0);
    };
    // log-log slope of the defect over xi in [1e-4, 1e-2].
    std::vector<double> xs, ys;
    for (double xi = 1e-4; xi <= 1.01e-2; xi *= std::sqrt(10.0)) {
        double d = std::abs(bracket_exact(xi) - bracket_truncated(xi));
        xs.push_back(std::log(xi));
        ys.push_back(std::log(d));
    }
    double n = xs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope >= 0.9);
}

TEST_CASE("randomized quadrature/closed agreement grid") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ua(0.2, 0.8), uk(0.0, 3.0), uxi(0.05, 0.3);
    std::uniform_int_distribution<int> um(1, 5), ul(1, 2);
    auto unit_sin = DielectricProfile::sinusoidal(1.0);
    for (int i = 0; i < 50; ++i) {
        PistonGeometry g(1.0, ua(rng));
        Mode mode(Side::Left, um(rng), uk(rng), ul(rng));
        double c = first_order_shift_closed(g, mode).omega1;
        double q = first_order_shift_quadrature(g, mode, unit_sin).omega1;
        CHECK(std::abs(c - q) <= 1e-9 * std::max(std::abs(c), 1e-6));
    }
}
