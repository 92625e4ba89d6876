#ifndef PISTON_MODEL_HPP
#define PISTON_MODEL_HPP

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace piston {

enum class Side { Left, Right };

inline const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

/// Chamber of length L with the movable mirror at x = a.  All closed forms
/// are expressed through the side length a or L - a.
struct PistonGeometry {
    double L;
    double a;

    PistonGeometry(double L_, double a_);

    double side_length(Side s) const { return s == Side::Left ? a : L - a; }
    /// Left interval is [0, a], right interval is [a, L].
    std::pair<double, double> side_interval(Side s) const {
        return s == Side::Left ? std::make_pair(0.0, a) : std::make_pair(a, L);
    }
};

/// One cavity eigenmode in the continuum transverse limit: the transverse
/// wavenumber k_par is a continuous parameter, lambda = 1 is the TE-like
/// family (absent at m = 0), lambda = 2 the TM-like family.
struct Mode {
    Side side;
    int m;
    double k_par;
    int lambda;

    Mode(Side side_, int m_, double k_par_, int lambda_);
};

/// Relative permittivity perturbation delta_eps(x) on [0, L].
class DielectricProfile {
  public:
    enum class Kind { Sinusoidal, Tabulated };

    static DielectricProfile sinusoidal(double alpha);
    static DielectricProfile tabulated(std::vector<std::pair<double, double>> samples);

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }

    /// delta_eps at position x for a chamber of length L.  Tabulated profiles
    /// must cover [0, L]; sinusoidal evaluates alpha*sin(pi x / L).
    double value(double x, double L) const;

    const std::vector<std::pair<double, double>>& samples() const { return samples_; }

  private:
    DielectricProfile() = default;
    Kind kind_ = Kind::Sinusoidal;
    double alpha_ = 0.0;
    std::vector<std::pair<double, double>> samples_;
};

/// Exponential cutoff e^(-xi * omega); xi is a length (hbar = c = 1).
struct Regulator {
    double xi;
    explicit Regulator(double xi_);
};

/// Unperturbed eigenfrequency sqrt((m pi / s)^2 + k_par^2); independent of
/// the polarization.
double omega0(const PistonGeometry& geometry, const Mode& mode);

/// Unperturbed mode field at position x (global coordinate in [0, L]).
/// Components are along {x_hat, k_hat_par, x_hat cross k_hat_par}; the
/// transverse phase factor is set to 1 (only |E|^2 is consumed downstream).
/// Normalized so that the integral of |E|^2 over the side volume is 1.
std::array<std::complex<double>, 3> mode_field(const PistonGeometry& geometry,
                                               const Mode& mode, double x);

/// Eigenfrequencies below omega_max of one side cavity filled with
/// 1 + delta_eps(x), approximated by n_layers piecewise-constant slabs
/// (midpoint-sampled) with perfect-mirror boundary conditions.  Serves as
/// the independent oracle for the perturbative eigenfrequency shifts.
std::vector<double> transfer_matrix_eigenfrequencies(const PistonGeometry& geometry,
                                                     Side side,
                                                     const DielectricProfile& profile,
                                                     double k_par, int lambda,
                                                     double omega_max, int n_layers);

}  // namespace piston

#endif
