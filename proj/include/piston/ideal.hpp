#ifndef PISTON_IDEAL_HPP
#define PISTON_IDEAL_HPP

#include "piston/model.hpp"

namespace piston {

enum class Method { Numeric, Closed, Asymptotic, Sum, Quadrature };

const char* to_string(Method m);

/// Regularized vacuum energy per unit piston area, units 1/length^3.
struct EnergyPerArea {
    double value;
    Method method;
    double xi;
};

struct SumAccuracy {
    long long m_cap = 100000000;  // resource guard on the mode-sum length
    double m0_weight = 1.0;       // m = 0 term weight; any change is a-independent
};

/// Mode summation of both sides with the k_par integral done exactly by the
/// u = omega substitution; truncated where the exponential weight drops
/// below machine precision.
EnergyPerArea energy_numeric(const PistonGeometry& geometry, const Regulator& regulator,
                             const SumAccuracy& accuracy = {});

/// Closed form: the bracket operator applied to e^u cosech(u) per side.
EnergyPerArea energy_closed(const PistonGeometry& geometry, const Regulator& regulator);

/// Small-xi expansion 3L/(pi^2 xi^4) + 1/(pi xi^3) - pi^2/720 (a^-3 + (L-a)^-3).
EnergyPerArea energy_asymptotic(const PistonGeometry& geometry, const Regulator& regulator);

/// True when xi is small enough relative to both side lengths for the
/// asymptotic form to be trustworthy.
bool asymptotic_valid(const PistonGeometry& geometry, const Regulator& regulator);

/// Casimir pressure on the piston, positive pushing toward larger a:
/// pi^2/240 (L-a)^-4 - pi^2/240 a^-4.
double force_per_area(const PistonGeometry& geometry);

}  // namespace piston

#endif
