#include "piston/perturbation.hpp"

#include <cmath>
#include <stdexcept>

#include "piston/quadrature.hpp"
#include "piston/specfun.hpp"

namespace piston {

namespace {

// Shared factors of Eqs. (17)-(18) and (A2)-(A3), expressed through the
// side length s.  The right side is the a -> L-a image, and
// 1 - cos(pi (L-a)/L) = 1 + cos(pi a / L), so everything depends on s only.
struct SideFactors {
    double s;        // side length
    double bracket;  // 1 - cos(pi s / L)
    double ratio;    // L [1 - cos(pi s / L)] / (2 pi s)
};

SideFactors side_factors(const PistonGeometry& g, Side side) {
    double s = g.side_length(side);
    double bracket = 1.0 - std::cos(M_PI * s / g.L);
    return {s, bracket, g.L * bracket / (2.0 * M_PI * s)};
}

// 1/(1 - (2mL/s)^2); pole-free for valid geometries: s < L makes
// 2mL/s > 2 for every m >= 1.
double pole_factor(const PistonGeometry& g, double s, int m) {
    double r = 2.0 * m * g.L / s;
    return 1.0 / (1.0 - r * r);
}

// The per-unit-alpha relative shift omega1/omega0 of Eqs. (17)-(18).
double relative_shift_closed(const PistonGeometry& g, const Mode& mode) {
    SideFactors f = side_factors(g, mode.side);
    double h = pole_factor(g, f.s, mode.m);
    if (mode.lambda == 1) {
        double r2 = std::pow(2.0 * mode.m * g.L / f.s, 2);
        return f.ratio * r2 * h;
    }
    double mu = mode.m * M_PI / f.s;
    double num = mu * mu - mode.k_par * mode.k_par;
    double den = mu * mu + mode.k_par * mode.k_par;
    return -f.ratio * (1.0 - (num / den) * h);
}

}  // namespace

ShiftResult first_order_shift_quadrature(const PistonGeometry& geometry, const Mode& mode,
                                         const DielectricProfile& profile) {
    auto [lo, hi] = geometry.side_interval(mode.side);
    double w0 = omega0(geometry, mode);
    double overlap = quad::integrate(
        [&](double x) {
            auto E = mode_field(geometry, mode, x);
            double e2 = std::norm(E[0]) + std::norm(E[1]) + std::norm(E[2]);
            return e2 * profile.value(x, geometry.L);
        },
        lo, hi, 1e-11);
    double omega1 = -0.5 * w0 * overlap;
    if (profile.kind() == DielectricProfile::Kind::Sinusoidal && profile.alpha() != 0.0)
        omega1 /= profile.alpha();
    return {mode, omega1, Method::Quadrature};
}

ShiftResult first_order_shift_closed(const PistonGeometry& geometry, const Mode& mode) {
    double w0 = omega0(geometry, mode);
    return {mode, w0 * relative_shift_closed(geometry, mode), Method::Closed};
}

M0Lambda2Discrepancy m0_lambda2_discrepancy(const PistonGeometry& geometry, double k_par) {
    Mode mode(Side::Left, 0, k_par, 2);
    double closed = first_order_shift_closed(geometry, mode).omega1;
    double quadr =
        first_order_shift_quadrature(geometry, mode, DielectricProfile::sinusoidal(1.0)).omega1;
    return {closed, quadr};
}

IntegralResult shift_integral_quadrature(const PistonGeometry& geometry, Side side, int m,
                                            int lambda, const Regulator& regulator) {
    if (m == 0 && lambda == 1)
        throw std::invalid_argument("shift_integral: (m = 0, lambda = 1) is excluded");
    double xi = regulator.xi;
    double s = geometry.side_length(side);
    double mu = m * M_PI / s;

    auto integrand = [&](double k) {
        double w0 = std::hypot(mu, k);
        if (w0 == 0.0) return 0.0;
        Mode mode(side, m, k, lambda);
        double w1 = w0 * relative_shift_closed(geometry, mode);
        return k * w1 * std::exp(-xi * w0);
    };

    // Segment out to omega0 = mu + 45/xi, beyond which the exponential weight
    // times the bounded relative shift is below 1e-15 of the total.
    quad::KahanSum total;
    double u_prev = mu;
    int n_seg = 15;
    for (int j = 1; j <= n_seg; ++j) {
        double u_next = mu + 3.0 * j / xi;
        double k_lo = std::sqrt(std::max(u_prev * u_prev - mu * mu, 0.0));
        double k_hi = std::sqrt(u_next * u_next - mu * mu);
        total.add(quad::integrate(integrand, k_lo, k_hi, 1e-11));
        u_prev = u_next;
    }
    return {side, m, lambda, xi, total.value(), Method::Quadrature};
}

IntegralResult shift_integral_closed(const PistonGeometry& geometry, Side side, int m,
                                        int lambda, const Regulator& regulator) {
    if (m == 0 && lambda == 1)
        throw std::invalid_argument("shift_integral: (m = 0, lambda = 1) is excluded");
    double xi = regulator.xi;
    SideFactors f = side_factors(geometry, side);
    double K = geometry.L * f.bracket / (M_PI * f.s);
    double mu = m * M_PI / f.s;
    double h = pole_factor(geometry, f.s, m);
    double g = std::pow(2.0 * m * geometry.L / f.s, 2) * h;
    double e = std::exp(-xi * mu);
    // Derivatives of e^{-xi mu} are (-mu)^d times itself, so the bracket
    // operators reduce to polynomial factors.
    double p3 = 1.0 / (xi * xi * xi) + mu / (xi * xi) + mu * mu / (2.0 * xi);
    double value;
    if (lambda == 1) {
        value = K * g * p3 * e;
    } else {
        double p2 = 1.0 / (xi * xi * xi) + mu / (xi * xi);
        value = K * (-(h + 1.0) * p2 + g * mu * mu / (2.0 * xi)) * e;
    }
    return {side, m, lambda, xi, value, Method::Closed};
}

double denergy_dalpha_sum(const PistonGeometry& geometry, const Regulator& regulator,
                          const SumAccuracy& accuracy) {
    double xi = regulator.xi;
    quad::KahanSum total;
    for (Side side : {Side::Left, Side::Right}) {
        double s = geometry.side_length(side);
        double m_max_d = std::ceil(37.0 * s / (M_PI * xi));
        if (m_max_d > double(accuracy.m_cap))
            throw std::runtime_error("denergy_dalpha_sum: mode count exceeds cap; "
                                     "use the closed form instead");
        long long m_max = (long long)m_max_d;
        total.add(shift_integral_closed(geometry, side, 0, 2, regulator).value);
        for (long long m = 1; m <= m_max; ++m) {
            total.add(shift_integral_closed(geometry, side, (int)m, 1, regulator).value);
            total.add(shift_integral_closed(geometry, side, (int)m, 2, regulator).value);
        }
    }
    return total.value() / (4.0 * M_PI);
}

double denergy_dalpha_closed(const PistonGeometry& geometry, const Regulator& regulator) {
    double xi = regulator.xi;
    double total = 0.0;
    for (Side side : {Side::Left, Side::Right}) {
        SideFactors f = side_factors(geometry, side);
        double pref = geometry.L * f.bracket / (4.0 * M_PI * M_PI * f.s);
        double c1 = M_PI / (2.0 * f.s);
        double u = c1 * xi;
        double f0 = specfun::exp_cosech_kernel(u, 0);
        double f1 = specfun::exp_cosech_kernel(u, 1);
        double f2 = specfun::exp_cosech_kernel(u, 2);
        // ((1/xi^2) d/dxi - 1/xi^3 - (1/2 xi) d^2/dxi^2) e^u cosech(u)
        double term1 =
            c1 * f1 / (xi * xi) - f0 / (xi * xi * xi) - c1 * c1 * f2 / (2.0 * xi);
        double v = f.s / (2.0 * geometry.L);
        double term2 = f.s / (4.0 * geometry.L * xi) *
                       specfun::lerch_dxi2_antisym(v, f.s, xi);
        total += pref * (term1 + term2);
    }
    return total;
}

double denergy_dalpha_asymptotic(const PistonGeometry& geometry, const Regulator& regulator) {
    double xi = regulator.xi;
    double L = geometry.L;
    double total = 0.0;
    for (Side side : {Side::Left, Side::Right}) {
        SideFactors f = side_factors(geometry, side);
        double s = f.s;
        double v = s / (2.0 * L);
        double psi_p = specfun::digamma(v);
        double psi_m = specfun::digamma(-v);
        double pref = f.bracket / (4.0 * M_PI * M_PI);
        double xi2 = xi * xi;
        double braces =
            -6.0 * L / (M_PI * xi2 * xi2) - L / (s * xi2 * xi) -
            M_PI / (4.0 * L * xi2) -
            M_PI * M_PI / (8.0 * s * L * xi) * (1.0 + v * (psi_p - psi_m)) -
            std::pow(M_PI, 3) / (16.0 * L * L * L) * std::log(xi * M_PI / s) -
            std::pow(M_PI, 3) / (8.0 * s * s * L) *
                (v * v * (2.0 * (specfun::kEulerGamma - 1.0) + psi_p + psi_m) + 1.0 / 6.0) +
            L * std::pow(M_PI, 3) / (360.0 * s * s * s * s);
        total += pref * braces;
    }
    return total;
}

bool denergy_asymptotic_valid(const PistonGeometry& geometry, const Regulator& regulator) {
    return regulator.xi / std::min(geometry.a, geometry.L - geometry.a) < 0.1;
}

DenergyCoefficients denergy_reference_coefficients(const PistonGeometry& geometry) {
    double L = geometry.L;
    DenergyCoefficients c{};
    for (Side side : {Side::Left, Side::Right}) {
        SideFactors f = side_factors(geometry, side);
        double s = f.s;
        double v = s / (2.0 * L);
        double psi_p = specfun::digamma(v);
        double psi_m = specfun::digamma(-v);
        double pref = f.bracket / (4.0 * M_PI * M_PI);
        double pi3 = std::pow(M_PI, 3);
        c.c_m4 += pref * (-6.0 * L / M_PI);
        c.c_m3 += pref * (-L / s);
        c.c_m2 += pref * (-M_PI / (4.0 * L));
        c.c_m1 += pref * (-M_PI * M_PI / (8.0 * s * L) * (1.0 + v * (psi_p - psi_m)));
        c.c_log += pref * (-pi3 / (16.0 * L * L * L));
        // log(xi pi / s) = log xi + log(pi / s): the constant part lands in c0.
        c.c_0 += pref * (-pi3 / (16.0 * L * L * L) * std::log(M_PI / s) -
                         pi3 / (8.0 * s * s * L) *
                             (v * v * (2.0 * (specfun::kEulerGamma - 1.0) + psi_p + psi_m) +
                              1.0 / 6.0) +
                         L * pi3 / (360.0 * s * s * s * s));
    }
    return c;
}

DenergyCoefficients ideal_reference_coefficients(const PistonGeometry& geometry) {
    double L = geometry.L, a = geometry.a, b = L - geometry.a;
    DenergyCoefficients c{};
    c.c_m4 = 3.0 * L / (M_PI * M_PI);
    c.c_m3 = 1.0 / M_PI;
    c.c_0 = -M_PI * M_PI / 720.0 * (1.0 / (a * a * a) + 1.0 / (b * b * b));
    return c;
}

}  // namespace piston
