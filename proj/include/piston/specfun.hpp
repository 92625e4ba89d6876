#ifndef PISTON_SPECFUN_HPP
#define PISTON_SPECFUN_HPP

namespace piston::specfun {

inline constexpr double kEulerGamma = 0.5772156649015328606;

/// Digamma function psi(x), absolute accuracy ~1e-13.  Upward recurrence to
/// x > 10 then the asymptotic series; negative arguments by reflection.
/// Throws std::domain_error at the poles x = 0, -1, -2, ...
double digamma(double x);

/// Bernoulli polynomial B_n(x) for n <= 30, from the coefficient table
/// generated by the defining recurrence.
double bernoulli_poly(int n, double x);

/// Lerch transcendent at middle index 1: Phi(z, 1, v) = sum z^m / (m + v),
/// for 0 < z < 1 and v not a non-positive integer.  Direct summation with a
/// tail bound; for z > 0.999 switches to the small-cutoff expansion.
double lerch_phi(double z, double v);

struct LerchArgs {
    double z;
    double v;
};
inline double lerch_phi(const LerchArgs& args) { return lerch_phi(args.z, args.v); }

/// Phi(e^(-xi pi / s), 1, v) through the small-xi expansion
///   Phi e^(-xi pi v / s) + log(xi pi / s) = -gamma - psi(v) - sum_{m>=0} ...
/// truncated at the given order (number of Bernoulli terms, <= 25).
double lerch_small_xi(double v, double s, double xi, int order);

/// d-th derivative (d in {0,1,2}) with respect to u of
/// f(u) = e^u cosech(u) = 1 + coth(u), for u > 0.  Series evaluation below
/// u = 1e-3 keeps the small-u values accurate.
double exp_cosech_kernel(double u, int d);

/// d^2/dxi^2 [ Phi(e^(-xi pi/s), 1, v) - Phi(e^(-xi pi/s), 1, -v) ],
/// the antisymmetric Lerch combination entering the closed-form energy
/// derivative.  Each xi derivative of sum e^(-xi m pi/s)/(m + v) inserts a
/// factor -m pi/s, so the direct route sums m^2 terms; near z -> 1 the
/// expansion-based analytic second derivative is used instead.
double lerch_dxi2_antisym(double v, double s, double xi);

}  // namespace piston::specfun

#endif
