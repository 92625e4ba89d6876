#ifndef PISTON_PERTURBATION_HPP
#define PISTON_PERTURBATION_HPP

#include "piston/ideal.hpp"
#include "piston/model.hpp"

namespace piston {

/// First-order eigenfrequency shift of one mode.  For sinusoidal profiles
/// the shift is reported per unit alpha.
struct ShiftResult {
    Mode mode;
    double omega1;
    Method method;
};

/// The regularized k_par integral of one (side, m, lambda) family,
/// per unit alpha.
struct IntegralResult {
    Side side;
    int m;
    int lambda;
    double xi;
    double value;
    Method method;
};

/// -1/2 omega0 int |E0|^2 delta_eps dV by adaptive quadrature over the
/// mode's side; works for arbitrary profiles.
ShiftResult first_order_shift_quadrature(const PistonGeometry& geometry, const Mode& mode,
                                         const DielectricProfile& profile);

/// The sinusoidal-profile closed forms, evaluated literally, per unit alpha.
/// Right-side expressions via the a -> L-a substitution.
ShiftResult first_order_shift_closed(const PistonGeometry& geometry, const Mode& mode);

/// At m = 0, lambda = 2 the literal closed form and the volume-normalized
/// quadrature of the shift integral disagree by a factor of 2 (the closed
/// form inherits the m > 0 normalization).  Both values, for inspection.
struct M0Lambda2Discrepancy {
    double closed_literal;
    double quadrature;
};
M0Lambda2Discrepancy m0_lambda2_discrepancy(const PistonGeometry& geometry, double k_par);

/// int k dk omega1(k) e^{-xi omega0(k)} by adaptive quadrature with an
/// analytic tail bound, per unit alpha.
IntegralResult shift_integral_quadrature(const PistonGeometry& geometry, Side side, int m,
                                            int lambda, const Regulator& regulator);

/// Same integral with the xi-derivative operators applied analytically to
/// e^{-xi m pi / s}, per unit alpha.
IntegralResult shift_integral_closed(const PistonGeometry& geometry, Side side, int m,
                                        int lambda, const Regulator& regulator);

/// dE/dalpha per area: sum of the closed per-mode integrals over both
/// polarizations, both sides, and m up to the exponential cutoff.
double denergy_dalpha_sum(const PistonGeometry& geometry, const Regulator& regulator,
                          const SumAccuracy& accuracy = {});

/// dE/dalpha per area through the resummed closed form: the cosech kernel
/// plus the antisymmetric Lerch combination.
double denergy_dalpha_closed(const PistonGeometry& geometry, const Regulator& regulator);

/// dE/dalpha per area from the literal small-xi expansion (divergent
/// Laurent terms plus the finite part).
double denergy_dalpha_asymptotic(const PistonGeometry& geometry, const Regulator& regulator);

/// True when xi is small enough for the asymptotic expansion of
/// denergy_dalpha to be trustworthy.
bool denergy_asymptotic_valid(const PistonGeometry& geometry, const Regulator& regulator);

/// Reference Laurent coefficients of denergy_dalpha in the basis
/// {xi^-4, xi^-3, xi^-2, xi^-1, log xi, 1}; the constant log(pi/s) content
/// of each side's log(xi pi / s) is absorbed into c0.
struct DenergyCoefficients {
    double c_m4, c_m3, c_m2, c_m1, c_log, c_0;
};
DenergyCoefficients denergy_reference_coefficients(const PistonGeometry& geometry);

/// Ideal-piston counterparts: {3L/pi^2, 1/pi, 0, 0, 0, -pi^2/720 (...)}.
DenergyCoefficients ideal_reference_coefficients(const PistonGeometry& geometry);

}  // namespace piston

#endif
