#include "piston/specfun.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "piston/quadrature.hpp"

namespace piston::specfun {

namespace {

constexpr int kMaxBernoulli = 30;

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// Bernoulli numbers B_0..B_30 from sum_{k=0}^{n-1} C(n+1,k) B_k = -C(n+1,n) B_n.
const std::array<double, kMaxBernoulli + 1>& bernoulli_numbers() {
    static const std::array<double, kMaxBernoulli + 1> table = [] {
        std::array<double, kMaxBernoulli + 1> B{};
        // Pascal triangle up to row 31.
        double C[kMaxBernoulli + 2][kMaxBernoulli + 2] = {};
        for (int n = 0; n <= kMaxBernoulli + 1; ++n) {
            C[n][0] = 1.0;
            for (int k = 1; k <= n; ++k)
                C[n][k] = C[n - 1][k - 1] + (k <= n - 1 ? C[n - 1][k] : 0.0);
        }
        B[0] = 1.0;
        for (int n = 1; n <= kMaxBernoulli; ++n) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += C[n + 1][k] * B[k];
            B[n] = -acc / C[n + 1][n];
        }
        return B;
    }();
    return table;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

}  // namespace

double digamma(double x) {
    if (!std::isfinite(x)) throw std::domain_error("digamma: argument not finite");
    if (is_nonpositive_integer(x))
        throw std::domain_error("digamma: pole at non-positive integer argument");
    if (x < 0.5) {
        // psi(x) = psi(1-x) - pi cot(pi x)
        return digamma(1.0 - x) - M_PI / std::tan(M_PI * x);
    }
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    // Asymptotic series with B_{2n}/(2n x^{2n}) terms.
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv;
    static const double coef[] = {1.0 / 12.0,  -1.0 / 120.0,    1.0 / 252.0, -1.0 / 240.0,
                                  1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0};
    double p = inv2;
    for (double c : coef) {
        result -= c * p;
        p *= inv2;
    }
    return result;
}

double bernoulli_poly(int n, double x) {
    if (n < 0 || n > kMaxBernoulli) {
        std::ostringstream os;
        os << "bernoulli_poly: n = " << n << " out of range [0, " << kMaxBernoulli << "]";
        throw std::invalid_argument(os.str());
    }
    const auto& B = bernoulli_numbers();
    // B_n(x) = sum_k C(n,k) B_k x^{n-k}
    double acc = 0.0;
    double xp = 1.0;  // x^{n-k}, built from the k = n end downwards
    for (int k = n; k >= 0; --k) {
        acc += binomial(n, k) * B[k] * xp;
        xp *= x;
    }
    return acc;
}

double lerch_phi(double z, double v) {
    if (!(z > 0.0) || !(z < 1.0))
        throw std::domain_error("lerch_phi: require 0 < z < 1");
    if (is_nonpositive_integer(v))
        throw std::domain_error("lerch_phi: v must not be a non-positive integer");
    if (z > 0.999) {
        // Direct summation needs O(1/(1-z)) terms here; the small-xi
        // expansion converges and is cheap in exactly this regime.
        double t = -std::log(z);  // t = xi pi / s with s = 1, xi = t/pi
        return lerch_small_xi(v, 1.0, t / M_PI, 25);
    }
    quad::KahanSum sum;
    double zm = 1.0;
    for (long m = 0;; ++m) {
        sum.add(zm / (m + v));
        zm *= z;
        // Tail bound z^M / ((M + v)(1 - z)) once past any small denominators.
        if (m + 1 + v > 1.0 && zm / ((m + 1 + v) * (1.0 - z)) < 1e-13) break;
        if (m > 100000000)
            throw std::runtime_error("lerch_phi: summation failed to converge");
    }
    return sum.value();
}

double lerch_small_xi(double v, double s, double xi, int order) {
    if (is_nonpositive_integer(v))
        throw std::domain_error("lerch_small_xi: v must not be a non-positive integer");
    if (order < 0 || order > 25)
        throw std::invalid_argument("lerch_small_xi: order must be in [0, 25]");
    double t = xi * M_PI / s;
    if (!(t > 0.0) || t >= 2.0 * M_PI)
        throw std::domain_error("lerch_small_xi: expansion requires 0 < xi pi / s < 2 pi");
    double rhs = -kEulerGamma - digamma(v);
    double tp = t;        // t^{m+1}
    double fact = 1.0;    // (m+1)!
    for (int m = 0; m <= order; ++m) {
        fact *= (m + 1);
        double sign = ((m + 1) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{m+1}
        rhs -= sign * bernoulli_poly(m + 1, v) / (m + 1) * tp / fact;
        tp *= t;
    }
    return std::exp(t * v) * (rhs - std::log(t));
}

double exp_cosech_kernel(double u, int d) {
    if (!(u > 0.0)) throw std::domain_error("exp_cosech_kernel: require u > 0");
    if (d < 0 || d > 2)
        throw std::invalid_argument("exp_cosech_kernel: derivative order must be 0, 1 or 2");
    if (u < 1e-3) {
        double u2 = u * u;
        switch (d) {
            case 0:  // 1 + coth(u)
                return 1.0 + 1.0 / u + u / 3.0 - u * u2 / 45.0 + 2.0 * u2 * u2 * u / 945.0;
            case 1:  // -cosech^2(u)
                return -(1.0 / u2 - 1.0 / 3.0 + u2 / 15.0 - 2.0 * u2 * u2 / 189.0);
            default:  // 2 cosech^2(u) coth(u)
                return 2.0 / (u * u2) - 2.0 * u / 15.0 + 8.0 * u * u2 / 189.0;
        }
    }
    double sh = std::sinh(u);
    double ch = std::cosh(u);
    switch (d) {
        case 0:
            return 1.0 + ch / sh;
        case 1:
            return -1.0 / (sh * sh);
        default:
            return 2.0 * ch / (sh * sh * sh);
    }
}

namespace {

// d^2/dxi^2 of Phi(e^(-xi pi/s), 1, v) through the expansion route:
// Phi = e^{tv} (-log t - gamma - psi(v) - G(t)) with t = xi pi / s and
// G(t) = sum_{n>=1} (-1)^n B_n(v) t^n / (n n!).
double lerch_dxi2_expansion(double v, double s, double xi) {
    double t = xi * M_PI / s;
    double G = 0.0, Gp = 0.0, Gpp = 0.0;
    double tp = 1.0;    // t^{n-1} running
    double fact = 1.0;  // n!
    for (int n = 1; n <= 26; ++n) {
        fact *= n;
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        double bn = bernoulli_poly(n, v);
        double c = sign * bn / fact;  // coefficient of t^n / n
        G += c * tp * t / n;
        Gp += c * tp;
        if (n >= 2) Gpp += c * (n - 1) * tp / t;
        tp *= t;
    }
    double R = -kEulerGamma - digamma(v) - G;
    double d2 = std::exp(t * v) * (v * v * (-std::log(t) + R) + 2.0 * v * (-1.0 / t - Gp) +
                                   (1.0 / (t * t) - Gpp));
    double scale = M_PI / s;
    return scale * scale * d2;
}

}  // namespace

double lerch_dxi2_antisym(double v, double s, double xi) {
    if (is_nonpositive_integer(v) || is_nonpositive_integer(-v))
        throw std::domain_error("lerch_dxi2_antisym: v must not be an integer <= 0 or >= 0");
    double t = xi * M_PI / s;
    double z = std::exp(-t);
    if (z > 0.999) return lerch_dxi2_expansion(v, s, xi) - lerch_dxi2_expansion(-v, s, xi);
    // Termwise: m^2 z^m [1/(m+v) - 1/(m-v)] = -2 v m^2 z^m / (m^2 - v^2);
    // combining before summing avoids the cancellation between the two sums.
    quad::KahanSum sum;
    double zm = z;
    for (long m = 1;; ++m) {
        double mm = double(m) * double(m);
        sum.add(-2.0 * v * mm * zm / (mm - v * v));
        zm *= z;
        if (m * t > 40.0 && std::abs(zm) * 2.0 * std::abs(v) / (1.0 - z) <
                                1e-15 * (std::abs(sum.value()) + 1.0))
            break;
        if (m > 100000000)
            throw std::runtime_error("lerch_dxi2_antisym: summation failed to converge");
    }
    double scale = M_PI / s;
    return scale * scale * sum.value();
}

}  // namespace piston::specfun
