#include "piston/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace piston {

PistonGeometry::PistonGeometry(double L_, double a_) : L(L_), a(a_) {
    if (!(L > 0.0) || !std::isfinite(L))
        throw std::invalid_argument("PistonGeometry: L must be positive and finite");
    if (!(a > 0.0) || !(a < L))
        throw std::invalid_argument("PistonGeometry: require 0 < a < L");
}

Mode::Mode(Side side_, int m_, double k_par_, int lambda_)
    : side(side_), m(m_), k_par(k_par_), lambda(lambda_) {
    if (m < 0) throw std::invalid_argument("Mode: m must be nonnegative");
    if (!(k_par >= 0.0) || !std::isfinite(k_par))
        throw std::invalid_argument("Mode: k_par must be nonnegative and finite");
    if (lambda != 1 && lambda != 2)
        throw std::invalid_argument("Mode: lambda must be 1 or 2");
    if (m == 0 && lambda == 1)
        throw std::invalid_argument(
            "Mode: (m = 0, lambda = 1) is not an allowed mode of the cavity");
    if (m == 0 && lambda == 2 && k_par == 0.0)
        throw std::invalid_argument("Mode: m = 0, k_par = 0 has zero frequency");
}

DielectricProfile DielectricProfile::sinusoidal(double alpha) {
    if (!std::isfinite(alpha))
        throw std::invalid_argument("DielectricProfile: alpha must be finite");
    DielectricProfile p;
    p.kind_ = Kind::Sinusoidal;
    p.alpha_ = alpha;
    return p;
}

DielectricProfile DielectricProfile::tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("DielectricProfile: need at least 2 samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i].first) || !std::isfinite(samples[i].second))
            throw std::invalid_argument("DielectricProfile: samples must be finite");
        if (i > 0 && !(samples[i].first > samples[i - 1].first))
            throw std::invalid_argument("DielectricProfile: x values must be strictly increasing");
    }
    DielectricProfile p;
    p.kind_ = Kind::Tabulated;
    p.samples_ = std::move(samples);
    return p;
}

double DielectricProfile::value(double x, double L) const {
    if (kind_ == Kind::Sinusoidal) return alpha_ * std::sin(M_PI * x / L);
    if (samples_.front().first > 0.0 || samples_.back().first < L)
        throw std::domain_error("DielectricProfile: tabulated samples do not cover [0, L]");
    if (x <= samples_.front().first) return samples_.front().second;
    if (x >= samples_.back().first) return samples_.back().second;
    auto it = std::upper_bound(samples_.begin(), samples_.end(), x,
                               [](double v, const std::pair<double, double>& s) {
                                   return v < s.first;
                               });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    double t = (x - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
}

Regulator::Regulator(double xi_) : xi(xi_) {
    if (!(xi > 0.0) || !std::isfinite(xi))
        throw std::invalid_argument("Regulator: xi must be positive and finite");
}

double omega0(const PistonGeometry& geometry, const Mode& mode) {
    double s = geometry.side_length(mode.side);
    double u0 = mode.m * M_PI / s;
    return std::hypot(u0, mode.k_par);
}

std::array<std::complex<double>, 3> mode_field(const PistonGeometry& geometry,
                                               const Mode& mode, double x) {
    auto [lo, hi] = geometry.side_interval(mode.side);
    if (x < lo || x > hi) {
        std::ostringstream os;
        os << "mode_field: x = " << x << " outside side interval [" << lo << ", " << hi << "]";
        throw std::domain_error(os.str());
    }
    double s = geometry.side_length(mode.side);
    double xl = x - lo;
    double mu = mode.m * M_PI / s;
    std::array<std::complex<double>, 3> E{};
    if (mode.lambda == 1) {
        // E along x_hat cross k_hat_par, Dirichlet at both walls.
        E[2] = std::sqrt(2.0 / s) * std::sin(mu * xl);
    } else {
        // m = 0 is the constant mode; its normalization integral lacks the
        // factor 1/2 from cos^2.
        double norm2 = (mode.m == 0 ? 1.0 : 2.0) / (s * (mode.k_par * mode.k_par + mu * mu));
        double n = std::sqrt(norm2);
        E[0] = n * mode.k_par * std::cos(mu * xl);
        E[1] = std::complex<double>(0.0, -n * mu * std::sin(mu * xl));
    }
    return E;
}

namespace {

// Propagate the layered-cavity boundary value problem at frequency omega and
// return the dispersion determinant: E(s) for TE (Dirichlet-Dirichlet),
// (1/eps)H'(s) for TM (Neumann-Neumann).  The state is renormalized per layer
// to avoid overflow in evanescent regions; the sign is preserved.
double dispersion_determinant(double omega, double k_par, int lambda,
                              const std::vector<double>& eps, double h) {
    double A = (lambda == 1) ? 0.0 : 1.0;  // E or H
    double B = (lambda == 1) ? 1.0 : 0.0;  // E' or (1/eps)H'
    for (double e : eps) {
        double k2 = omega * omega * e - k_par * k_par;
        double C, S;  // cos(kh), sin(kh)/k continued to k2 <= 0
        if (k2 > 0.0) {
            double k = std::sqrt(k2);
            C = std::cos(k * h);
            S = std::sin(k * h) / k;
        } else if (k2 < 0.0) {
            double kp = std::sqrt(-k2);
            C = std::cosh(kp * h);
            S = std::sinh(kp * h) / kp;
        } else {
            C = 1.0;
            S = h;
        }
        double An, Bn;
        if (lambda == 1) {
            An = C * A + S * B;
            Bn = -k2 * S * A + C * B;
        } else {
            An = C * A + e * S * B;
            Bn = -(k2 / e) * S * A + C * B;
        }
        A = An;
        B = Bn;
        double scale = std::max(std::abs(A), std::abs(B));
        if (scale > 1e100) {
            A /= scale;
            B /= scale;
        }
    }
    return (lambda == 1) ? A : B;
}

}  // namespace

std::vector<double> transfer_matrix_eigenfrequencies(const PistonGeometry& geometry,
                                                     Side side,
                                                     const DielectricProfile& profile,
                                                     double k_par, int lambda,
                                                     double omega_max, int n_layers) {
    if (n_layers < 1)
        throw std::invalid_argument("transfer_matrix_eigenfrequencies: n_layers >= 1 required");
    if (!(omega_max > 0.0))
        throw std::invalid_argument("transfer_matrix_eigenfrequencies: omega_max must be positive");
    if (lambda != 1 && lambda != 2)
        throw std::invalid_argument("transfer_matrix_eigenfrequencies: lambda must be 1 or 2");

    double s = geometry.side_length(side);
    double x0 = geometry.side_interval(side).first;
    double h = s / n_layers;
    std::vector<double> eps(n_layers);
    for (int j = 0; j < n_layers; ++j) {
        double de = profile.value(x0 + (j + 0.5) * h, geometry.L);
        if (!std::isfinite(de))
            throw std::invalid_argument("transfer_matrix_eigenfrequencies: profile not finite");
        eps[j] = 1.0 + de;
    }

    auto det = [&](double w) { return dispersion_determinant(w, k_par, lambda, eps, h); };

    // Mode spacing is at least ~pi/s in omega; oversample by 16.
    double step = M_PI / (16.0 * s);
    std::vector<double> roots;
    double w_prev = 0.5 * step;
    double d_prev = det(w_prev);
    for (double w = w_prev + step; w <= omega_max + 0.5 * step; w += step) {
        double d = det(w);
        if (!std::isfinite(d) || !std::isfinite(d_prev)) {
            std::ostringstream os;
            os << "transfer_matrix_eigenfrequencies: determinant not finite on grid "
               << "[" << 0.5 * step << ", " << omega_max << "] step " << step
               << " near omega = " << w;
            throw std::runtime_error(os.str());
        }
        if ((d_prev < 0.0 && d > 0.0) || (d_prev > 0.0 && d < 0.0)) {
            double lo = w_prev, hi = w, dlo = d_prev;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                double mid = 0.5 * (lo + hi);
                double dm = det(mid);
                if ((dlo < 0.0) == (dm < 0.0)) {
                    lo = mid;
                    dlo = dm;
                } else {
                    hi = mid;
                }
            }
            double r = 0.5 * (lo + hi);
            if (r <= omega_max) roots.push_back(r);
        }
        w_prev = w;
        d_prev = d;
    }
    return roots;
}

}  // namespace piston
