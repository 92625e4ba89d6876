#ifndef PISTON_LAURENT_HPP
#define PISTON_LAURENT_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "piston/model.hpp"

namespace piston {

/// Least-squares Laurent structure of a sampled quantity:
/// value(xi) ~ sum_p c_p xi^p (+ c_log log xi).
struct LaurentFit {
    std::vector<int> powers;
    bool include_log = false;
    std::map<int, double> coefficients;
    std::map<int, double> uncertainties;
    double c_log = 0.0;
    double c_log_uncertainty = 0.0;
    double residual_rms = 0.0;      // rms of per-sample relative residuals
    double condition_estimate = 0.0;

    bool reliable() const { return condition_estimate <= 1e10; }
};

/// Fit over the given power basis via column-scaled SVD, minimizing
/// per-sample relative residuals.  Requires >= 2 + |powers| samples with
/// distinct positive xi spanning a decade.
LaurentFit laurent_fit(const std::vector<std::pair<double, double>>& samples,
                       std::vector<int> powers = {-4, -3, -2, -1, 0},
                       bool include_log = true);

struct C0Result {
    double c0 = 0.0;
    std::vector<std::string> warnings;
};

/// The regularization prescription that keeps only the xi-independent term.
/// Warns when a significant log xi coefficient makes the prescription
/// ill-defined; refuses unreliable fits.
C0Result extract_c0(const LaurentFit& fit);

enum class Quantity { IdealEnergy, DenergyDalpha };

struct DivergenceReportRow {
    double a;
    LaurentFit fit;
};

struct DivergenceReport {
    double L = 0.0;
    Quantity quantity = Quantity::DenergyDalpha;
    std::vector<double> xi_grid;
    std::vector<DivergenceReportRow> rows;
    /// One entry per basis term ("xi^-4", ..., "log", "xi^0"): does the
    /// fitted coefficient vary with a beyond fit uncertainty?
    std::map<std::string, bool> varies_with_a;
};

/// Fit the chosen quantity at each a, then flag which Laurent coefficients
/// move with the piston position.
DivergenceReport divergence_report(double L, const std::vector<double>& a_grid,
                                   const std::vector<double>& xi_grid,
                                   Quantity quantity = Quantity::DenergyDalpha,
                                   std::vector<int> powers = {-4, -3, -2, -1, 0, 1, 2, 3, 4, 5,
                                                              6},
                                   bool include_log = true);

std::string report_to_text(const DivergenceReport& report);
std::string report_to_csv(const DivergenceReport& report);

/// Evaluate the reportable quantity at one (L, a, xi) point.
double evaluate_quantity(Quantity q, const PistonGeometry& geometry, double xi);

const char* to_string(Quantity q);

}  // namespace piston

#endif
