#include "piston/ideal.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "piston/quadrature.hpp"
#include "piston/specfun.hpp"

namespace piston {

const char* to_string(Method m) {
    switch (m) {
        case Method::Numeric: return "numeric";
        case Method::Closed: return "closed";
        case Method::Asymptotic: return "asymptotic";
        case Method::Sum: return "sum";
        default: return "quadrature";
    }
}

namespace {

// exp(-xi u0) (u0^2/xi + 2 u0/xi^2 + 2/xi^3): the exact value of
// int_{u0}^inf u^2 e^{-xi u} du, i.e. the k_par integral after u-substitution.
double kpar_integral(double u0, double xi) {
    return std::exp(-xi * u0) * (u0 * u0 / xi + 2.0 * u0 / (xi * xi) + 2.0 / (xi * xi * xi));
}

// Terms with xi*u0 > 37 are below machine precision relative to the m = 0 term.
long long mode_cutoff(double s, double xi, long long cap) {
    double m_max = std::ceil(37.0 * s / (M_PI * xi));
    if (m_max > double(cap)) {
        std::ostringstream os;
        os << "energy_numeric: xi = " << xi << " requires " << m_max
           << " terms (cap " << cap << "); use the closed form instead";
        throw std::runtime_error(os.str());
    }
    return (long long)m_max;
}

}  // namespace

EnergyPerArea energy_numeric(const PistonGeometry& geometry, const Regulator& regulator,
                             const SumAccuracy& accuracy) {
    double xi = regulator.xi;
    quad::KahanSum total;
    for (Side side : {Side::Left, Side::Right}) {
        double s = geometry.side_length(side);
        long long m_max = mode_cutoff(s, xi, accuracy.m_cap);
        total.add(accuracy.m0_weight * kpar_integral(0.0, xi));
        for (long long m = 1; m <= m_max; ++m) total.add(kpar_integral(m * M_PI / s, xi));
    }
    return {total.value() / (2.0 * M_PI), Method::Numeric, xi};
}

EnergyPerArea energy_closed(const PistonGeometry& geometry, const Regulator& regulator) {
    double xi = regulator.xi;
    double total = 0.0;
    for (Side side : {Side::Left, Side::Right}) {
        double s = geometry.side_length(side);
        double c1 = M_PI / (2.0 * s);  // inner scale of e^u cosech(u), u = c1 xi
        double u = c1 * xi;
        double f0 = specfun::exp_cosech_kernel(u, 0);
        double f1 = specfun::exp_cosech_kernel(u, 1);
        double f2 = specfun::exp_cosech_kernel(u, 2);
        // [1/xi^3 - (1/xi^2) d/dxi + (1/2 xi) d^2/dxi^2] f(c1 xi)
        total += f0 / (xi * xi * xi) - c1 * f1 / (xi * xi) + c1 * c1 * f2 / (2.0 * xi);
    }
    return {total / (2.0 * M_PI), Method::Closed, xi};
}

EnergyPerArea energy_asymptotic(const PistonGeometry& geometry, const Regulator& regulator) {
    double xi = regulator.xi;
    double L = geometry.L, a = geometry.a, b = L - a;
    double value = 3.0 * L / (M_PI * M_PI * xi * xi * xi * xi) + 1.0 / (M_PI * xi * xi * xi) -
                   M_PI * M_PI / 720.0 * (1.0 / (a * a * a) + 1.0 / (b * b * b));
    return {value, Method::Asymptotic, xi};
}

bool asymptotic_valid(const PistonGeometry& geometry, const Regulator& regulator) {
    return regulator.xi / std::min(geometry.a, geometry.L - geometry.a) < 0.5;
}

double force_per_area(const PistonGeometry& geometry) {
    double a = geometry.a, b = geometry.L - geometry.a;
    double c = M_PI * M_PI / 240.0;
    return c / (b * b * b * b) - c / (a * a * a * a);
}

}  // namespace piston
