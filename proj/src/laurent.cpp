#include "piston/laurent.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "piston/ideal.hpp"
#include "piston/perturbation.hpp"

namespace piston {

namespace {

std::string basis_label(int power) {
    std::ostringstream os;
    os << "xi^" << power;
    return os.str();
}

}  // namespace

LaurentFit laurent_fit(const std::vector<std::pair<double, double>>& samples,
                       std::vector<int> powers, bool include_log) {
    const std::size_t n = samples.size();
    const std::size_t p = powers.size() + (include_log ? 1 : 0);
    if (n < powers.size() + 2)
        throw std::invalid_argument("laurent_fit: need at least 2 + |powers| samples");
    double xi_min = samples[0].first, xi_max = samples[0].first;
    for (const auto& [xi, value] : samples) {
        if (!(xi > 0.0) || !std::isfinite(value))
            throw std::invalid_argument("laurent_fit: xi must be positive, values finite");
        xi_min = std::min(xi_min, xi);
        xi_max = std::max(xi_max, xi);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (samples[i].first == samples[j].first)
                throw std::invalid_argument("laurent_fit: xi values must be distinct");
    if (xi_max / xi_min < 10.0)
        throw std::invalid_argument("laurent_fit: xi samples must span at least one decade");

    // When the basis carries a constant term, center the log column at the
    // geometric mean of the window: log(xi/xi_g) is far less collinear with
    // {1, xi, xi^2} than log(xi), and the shift is folded back into c0 below.
    bool has_const = std::find(powers.begin(), powers.end(), 0) != powers.end();
    double log_center = 0.0;
    if (include_log && has_const) {
        for (const auto& [xi, value] : samples) log_center += std::log(xi);
        log_center /= double(n);
    }

    Eigen::MatrixXd A(n, p);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double xi = samples[i].first;
        for (std::size_t j = 0; j < powers.size(); ++j) A(i, j) = std::pow(xi, powers[j]);
        if (include_log) A(i, p - 1) = std::log(xi) - log_center;
        y(i) = samples[i].second;
    }

    // Relative weighting: sampled values span many orders of magnitude with
    // noise proportional to magnitude, so minimize per-sample relative
    // residuals instead of absolute ones.
    double y_max = y.cwiseAbs().maxCoeff();
    if (y_max == 0.0) y_max = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = 1.0 / std::max(std::abs(y(i)), 1e-30 * y_max);
        A.row(i) *= w;
        y(i) *= w;
    }

    Eigen::VectorXd col_scale(p);
    for (std::size_t j = 0; j < p; ++j) {
        double norm = A.col(j).norm();
        if (norm == 0.0) norm = 1.0;
        col_scale(j) = norm;
        A.col(j) /= norm;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double s_max = svd.singularValues()(0);
    double s_min = svd.singularValues()(p - 1);
    if (s_min <= s_max * 1e-14) {
        // Name the most collinear pair of (scaled) basis columns.
        std::size_t bi = 0, bj = 1;
        double best = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i + 1; j < p; ++j) {
                double c = std::abs(A.col(i).dot(A.col(j)));
                if (c > best) {
                    best = c;
                    bi = i;
                    bj = j;
                }
            }
        auto name = [&](std::size_t j) {
            return j < powers.size() ? basis_label(powers[j]) : std::string("log");
        };
        throw std::runtime_error("laurent_fit: rank-deficient basis, columns " + name(bi) +
                                 " and " + name(bj) + " are collinear on this xi grid");
    }

    Eigen::VectorXd coef_scaled = svd.solve(y);
    Eigen::VectorXd residual = y - A * coef_scaled;

    double dof = double(n) - double(p);
    double sigma2 = residual.squaredNorm() / std::max(dof, 1.0);
    // Covariance diagonal of the scaled problem: sigma^2 V S^-2 V^T.
    Eigen::VectorXd inv_s2 = svd.singularValues().array().square().inverse();
    Eigen::VectorXd var_scaled(p);
    for (std::size_t j = 0; j < p; ++j)
        var_scaled(j) = sigma2 * (svd.matrixV().row(j).array().square() *
                                  inv_s2.transpose().array()).sum();

    LaurentFit fit;
    fit.powers = std::move(powers);
    fit.include_log = include_log;
    for (std::size_t j = 0; j < fit.powers.size(); ++j) {
        fit.coefficients[fit.powers[j]] = coef_scaled(j) / col_scale(j);
        fit.uncertainties[fit.powers[j]] = std::sqrt(var_scaled(j)) / col_scale(j);
    }
    if (include_log) {
        fit.c_log = coef_scaled(p - 1) / col_scale(p - 1);
        fit.c_log_uncertainty = std::sqrt(var_scaled(p - 1)) / col_scale(p - 1);
        if (has_const && log_center != 0.0) {
            // Undo the log centering: c0_true = c0_fit - c_log * log_center.
            fit.coefficients[0] -= fit.c_log * log_center;
            std::size_t j0 = std::size_t(std::find(fit.powers.begin(), fit.powers.end(), 0) -
                                         fit.powers.begin());
            double cov = sigma2 * (svd.matrixV().row(j0).array() *
                                   svd.matrixV().row(p - 1).array() *
                                   inv_s2.transpose().array()).sum() /
                         (col_scale(j0) * col_scale(p - 1));
            double var0 = var_scaled(j0) / (col_scale(j0) * col_scale(j0));
            double varl = var_scaled(p - 1) / (col_scale(p - 1) * col_scale(p - 1));
            double var = var0 + log_center * log_center * varl - 2.0 * log_center * cov;
            fit.uncertainties[0] = std::sqrt(std::max(var, 0.0));
        }
    }
    fit.residual_rms = std::sqrt(residual.squaredNorm() / double(n));
    fit.condition_estimate = s_max / s_min;
    return fit;
}

C0Result extract_c0(const LaurentFit& fit) {
    if (!fit.reliable()) {
        std::ostringstream os;
        os << "extract_c0: fit unreliable (condition estimate " << fit.condition_estimate
           << " > 1e10); shrink the basis or widen the xi window";
        throw std::runtime_error(os.str());
    }
    auto it = fit.coefficients.find(0);
    if (it == fit.coefficients.end())
        throw std::invalid_argument("extract_c0: basis does not include the xi^0 term");
    C0Result r;
    r.c0 = it->second;
    if (fit.include_log && std::abs(fit.c_log) > 3.0 * fit.c_log_uncertainty) {
        std::ostringstream os;
        os << "log-divergence: c_log = " << fit.c_log << " exceeds 3x its uncertainty ("
           << fit.c_log_uncertainty << "); the c0 prescription is ill-defined for this "
           << "quantity (a logarithmic divergence remains)";
        r.warnings.push_back(os.str());
    }
    return r;
}

double evaluate_quantity(Quantity q, const PistonGeometry& geometry, double xi) {
    Regulator reg(xi);
    if (q == Quantity::IdealEnergy) return energy_closed(geometry, reg).value;
    return denergy_dalpha_closed(geometry, reg);
}

const char* to_string(Quantity q) {
    return q == Quantity::IdealEnergy ? "ideal-energy" : "denergy-dalpha";
}

DivergenceReport divergence_report(double L, const std::vector<double>& a_grid,
                                   const std::vector<double>& xi_grid, Quantity quantity,
                                   std::vector<int> powers, bool include_log) {
    if (a_grid.empty() || xi_grid.empty())
        throw std::invalid_argument("divergence_report: grids must be nonempty");
    DivergenceReport report;
    report.L = L;
    report.quantity = quantity;
    report.xi_grid = xi_grid;
    for (double a : a_grid) {
        PistonGeometry geometry(L, a);
        std::vector<std::pair<double, double>> samples;
        samples.reserve(xi_grid.size());
        for (double xi : xi_grid)
            samples.emplace_back(xi, evaluate_quantity(quantity, geometry, xi));
        report.rows.push_back({a, laurent_fit(samples, powers, include_log)});
    }

    // A coefficient "varies with a" when its spread across the grid exceeds
    // both the fit uncertainties and a relative floor tied to the scale of
    // the divergent-plus-finite terms (powers <= 0 and log); the positive
    // powers are nuisance columns absorbing the finite-cutoff remainder and
    // can be large without being meaningful.
    double scale = 0.0;
    for (const auto& row : report.rows) {
        for (const auto& [pw, c] : row.fit.coefficients)
            if (pw <= 0) scale = std::max(scale, std::abs(c));
        scale = std::max(scale, std::abs(row.fit.c_log));
    }
    auto classify = [&](auto get_coef, auto get_unc) {
        double lo = get_coef(report.rows.front().fit), hi = lo, unc = 0.0;
        for (const auto& row : report.rows) {
            double c = get_coef(row.fit);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
            unc = std::max(unc, get_unc(row.fit));
        }
        double spread = hi - lo;
        return spread > std::max(10.0 * unc, 1e-3 * scale);
    };
    for (int pw : report.rows.front().fit.powers) {
        report.varies_with_a[basis_label(pw)] =
            classify([pw](const LaurentFit& f) { return f.coefficients.at(pw); },
                     [pw](const LaurentFit& f) { return f.uncertainties.at(pw); });
    }
    if (include_log) {
        report.varies_with_a["log"] =
            classify([](const LaurentFit& f) { return f.c_log; },
                     [](const LaurentFit& f) { return f.c_log_uncertainty; });
    }
    return report;
}

std::string report_to_text(const DivergenceReport& report) {
    std::ostringstream os;
    os << "Divergence structure of " << to_string(report.quantity) << " (L = " << report.L
       << ", " << report.xi_grid.size() << " xi samples in [" << report.xi_grid.front() << ", "
       << report.xi_grid.back() << "])\n";
    const auto& powers = report.rows.front().fit.powers;
    os << std::setw(8) << "a";
    for (int pw : powers) os << std::setw(15) << basis_label(pw);
    if (report.rows.front().fit.include_log) os << std::setw(15) << "log";
    os << std::setw(12) << "resid_rms" << "\n";
    for (const auto& row : report.rows) {
        os << std::setw(8) << std::setprecision(4) << row.a;
        os << std::setprecision(6);
        for (int pw : powers) os << std::setw(15) << row.fit.coefficients.at(pw);
        if (row.fit.include_log) os << std::setw(15) << row.fit.c_log;
        os << std::setw(12) << std::scientific << std::setprecision(1)
           << row.fit.residual_rms << std::defaultfloat << "\n";
    }
    os << "varies with a:";
    for (const auto& [label, varies] : report.varies_with_a)
        if (varies) os << " " << label;
    os << "\nconstant in a:";
    for (const auto& [label, varies] : report.varies_with_a)
        if (!varies) os << " " << label;
    os << "\n";
    return os.str();
}

std::string report_to_csv(const DivergenceReport& report) {
    std::ostringstream os;
    os << std::setprecision(17);
    const auto& powers = report.rows.front().fit.powers;
    os << "a";
    for (int pw : powers) os << ",c_" << pw;
    if (report.rows.front().fit.include_log) os << ",c_log";
    os << ",residual_rms,condition_estimate\n";
    for (const auto& row : report.rows) {
        os << row.a;
        for (int pw : powers) os << "," << row.fit.coefficients.at(pw);
        if (row.fit.include_log) os << "," << row.fit.c_log;
        os << "," << row.fit.residual_rms << "," << row.fit.condition_estimate << "\n";
    }
    return os.str();
}

}  // namespace piston
