#include "piston/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "piston/ideal.hpp"
#include "piston/laurent.hpp"
#include "piston/model.hpp"
#include "piston/perturbation.hpp"
#include "piston/quadrature.hpp"
#include "piston/specfun.hpp"

namespace piston::acceptance {

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return g;
}

std::vector<std::pair<double, double>> sample_quantity(Quantity q, const PistonGeometry& geom,
                                                       const std::vector<double>& xis) {
    std::vector<std::pair<double, double>> s;
    s.reserve(xis.size());
    for (double xi : xis) s.emplace_back(xi, evaluate_quantity(q, geom, xi));
    return s;
}

// The fit bases and window are tuned for the noise floor of the closed-form
// evaluations: positive powers absorb the finite-cutoff remainder, and the
// ideal quantity uses even positive powers only (its expansion beyond the
// divergent terms is even in xi), which removes near-degenerate directions.
const std::vector<int> kFullBasis = {-4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6};
const std::vector<int> kEvenBasis = {-4, -3, -2, -1, 0, 2, 4, 6};
const double kXiLo = 2e-3, kXiHi = 5e-2;
const int kXiPoints = 40;

// --- criteria -------------------------------------------------------------

CriterionResult ideal_triangle() {
    CriterionResult r{"ideal-triangle"};
    double worst = 0.0;
    for (double a : {0.25, 0.5, 0.75})
        for (double xi : {0.05, 0.1, 0.5}) {
            PistonGeometry g(1.0, a);
            Regulator reg(xi);
            double num = energy_numeric(g, reg).value;
            double clo = energy_closed(g, reg).value;
            worst = std::max(worst, rel_err(num, clo));
        }
    r.pass = worst <= 1e-9;
    std::ostringstream os;
    os << "max |numeric-closed|/|closed| = " << worst << " (tol 1e-9)";
    r.details = os.str();
    return r;
}

CriterionResult ideal_coefficients() {
    CriterionResult r{"ideal-coefficients"};
    PistonGeometry g(1.0, 0.3);
    auto fit = laurent_fit(
        sample_quantity(Quantity::IdealEnergy, g, log_grid(kXiLo, kXiHi, kXiPoints)),
        kEvenBasis, true);
    auto ref = ideal_reference_coefficients(g);
    double e4 = rel_err(fit.coefficients.at(-4), ref.c_m4);
    double e3 = rel_err(fit.coefficients.at(-3), ref.c_m3);
    double e0 = rel_err(fit.coefficients.at(0), ref.c_0);
    double worst = std::max({e4, e3, e0});
    r.pass = worst <= 1e-4;
    std::ostringstream os;
    os << "rel errors c-4 " << e4 << ", c-3 " << e3 << ", c0 " << e0 << " (tol 1e-4)";
    r.details = os.str();
    return r;
}

CriterionResult ideal_force() {
    CriterionResult r{"ideal-force"};
    PistonGeometry g(1.0, 0.25);
    double f = force_per_area(g);
    // -dE/da by a 4th-order stencil; the divergent terms are a-independent
    // and cancel, and Richardson in xi removes the O(xi^2) cutoff correction.
    auto fd_force = [](double xi) {
        auto E = [&](double aa) {
            return energy_closed(PistonGeometry(1.0, aa), Regulator(xi)).value;
        };
        double h = 0.01;
        return -(-E(0.25 + 2 * h) + 8.0 * E(0.25 + h) - 8.0 * E(0.25 - h) + E(0.25 - 2 * h)) /
               (12.0 * h);
    };
    double fd = (4.0 * fd_force(2e-3) - fd_force(4e-3)) / 3.0;
    double e1 = rel_err(f, fd);
    double f_mid = std::abs(force_per_area(PistonGeometry(1.0, 0.5)));
    r.pass = e1 <= 1e-3 && f_mid <= 1e-12;
    std::ostringstream os;
    os << "force vs -dE/da rel err " << e1 << " (tol 1e-3); |force(a=L/2)| = " << f_mid;
    r.details = os.str();
    return r;
}

CriterionResult oracle_chain() {
    CriterionResult r{"oracle-chain"};
    PistonGeometry g(1.0, 0.4);
    double alpha = 1e-4;
    int n_layers = 128;
    double worst = 0.0;
    std::ostringstream os;
    for (int lambda : {1, 2})
        for (int m : {1, 2, 3})
            for (double k : {0.0, 1.0}) {
                Mode mode(Side::Left, m, k, lambda);
                double w0 = omega0(g, mode);
                double shift = first_order_shift_closed(g, mode).omega1;
                auto nearest = [&](const DielectricProfile& p) {
                    auto roots = transfer_matrix_eigenfrequencies(g, Side::Left, p, k, lambda,
                                                                  w0 + 2.0, n_layers);
                    if (roots.empty())
                        throw std::runtime_error("oracle-chain: no transfer-matrix roots");
                    double best = roots[0];
                    for (double root : roots)
                        if (std::abs(root - w0) < std::abs(best - w0)) best = root;
                    return best;
                };
                double fd = (nearest(DielectricProfile::sinusoidal(alpha)) -
                             nearest(DielectricProfile::sinusoidal(0.0))) /
                            alpha;
                worst = std::max(worst, rel_err(fd, shift));
            }
    r.pass = worst <= 1e-3;
    os << "12 (lambda, m, k) combinations, max rel err " << worst << " (tol 1e-3)";
    r.details = os.str();
    return r;
}

CriterionResult integral_equivalence() {
    CriterionResult r{"integral-equivalence"};
    PistonGeometry g(1.0, 0.3);
    double worst = 0.0;
    for (int m : {0, 1, 2, 5})
        for (int lambda : {1, 2})
            for (double xi : {0.05, 0.2}) {
                if (m == 0 && lambda == 1) continue;  // excluded mode
                Regulator reg(xi);
                double q = shift_integral_quadrature(g, Side::Left, m, lambda, reg).value;
                double c = shift_integral_closed(g, Side::Left, m, lambda, reg).value;
                worst = std::max(worst, rel_err(q, c));
            }
    r.pass = worst <= 1e-8;
    std::ostringstream os;
    os << "max |quadrature-closed|/|closed| = " << worst << " (tol 1e-8)";
    r.details = os.str();
    return r;
}

CriterionResult denergy_equivalence() {
    CriterionResult r{"denergy-equivalence"};
    double worst = 0.0;
    for (double a : {0.3, 0.5, 0.7}) {
        PistonGeometry g(1.0, a);
        Regulator reg(0.1);
        worst = std::max(worst, rel_err(denergy_dalpha_sum(g, reg),
                                        denergy_dalpha_closed(g, reg)));
    }
    r.pass = worst <= 1e-9;
    std::ostringstream os;
    os << "max |sum-closed|/|closed| = " << worst << " (tol 1e-9)";
    r.details = os.str();
    return r;
}

CriterionResult divergent_coefficients() {
    CriterionResult r{"divergent-coefficients"};
    auto xis = log_grid(kXiLo, kXiHi, kXiPoints);
    std::vector<double> a_grid = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    double worst = 0.0;
    for (double a : a_grid) {
        PistonGeometry g(1.0, a);
        auto fit = laurent_fit(sample_quantity(Quantity::DenergyDalpha, g, xis), kFullBasis, true);
        auto ref = denergy_reference_coefficients(g);
        worst = std::max({worst, rel_err(fit.coefficients.at(-4), ref.c_m4),
                          rel_err(fit.coefficients.at(-3), ref.c_m3),
                          rel_err(fit.coefficients.at(-2), ref.c_m2),
                          rel_err(fit.coefficients.at(-1), ref.c_m1),
                          rel_err(fit.c_log, ref.c_log), rel_err(fit.coefficients.at(0), ref.c_0)});
    }
    auto report = divergence_report(1.0, a_grid, xis, Quantity::DenergyDalpha, kFullBasis, true);
    bool flags_ok = report.varies_with_a.at("xi^-3") && report.varies_with_a.at("xi^-1") &&
                    !report.varies_with_a.at("xi^-4") && !report.varies_with_a.at("xi^-2");
    r.pass = worst <= 1e-2 && flags_ok;
    std::ostringstream os;
    os << "max coefficient rel err " << worst << " (tol 1e-2); a-dependence flags "
       << (flags_ok ? "correct" : "WRONG")
       << " (xi^-3, xi^-1 vary; xi^-4, xi^-2 constant)";
    r.details = os.str();
    return r;
}

CriterionResult lerch_expansion() {
    CriterionResult r{"lerch-expansion"};
    double worst = 0.0;
    for (double v : {0.1, 0.25, 0.45, -0.25})
        for (double xi : {1e-3, 1e-2}) {
            double z = std::exp(-xi * M_PI);
            double direct = specfun::lerch_phi(z, v);
            double expanded = specfun::lerch_small_xi(v, 1.0, xi, 10);
            worst = std::max(worst, std::abs(direct - expanded));
        }
    r.pass = worst < 1e-10;
    std::ostringstream os;
    os << "max |expansion - direct sum| = " << worst << " (tol 1e-10)";
    r.details = os.str();
    return r;
}

CriterionResult c0_log_warning() {
    CriterionResult r{"c0-log-warning"};
    auto xis = log_grid(kXiLo, kXiHi, kXiPoints);
    PistonGeometry g(1.0, 0.3);
    auto fit_inhom =
        laurent_fit(sample_quantity(Quantity::DenergyDalpha, g, xis), kFullBasis, true);
    auto c0_inhom = extract_c0(fit_inhom);
    double clog_err = rel_err(fit_inhom.c_log, denergy_reference_coefficients(g).c_log);
    auto fit_ideal =
        laurent_fit(sample_quantity(Quantity::IdealEnergy, g, xis), kEvenBasis, true);
    auto c0_ideal = extract_c0(fit_ideal);
    bool warned = !c0_inhom.warnings.empty();
    bool clean = c0_ideal.warnings.empty();
    r.pass = warned && clean && clog_err <= 0.05;
    std::ostringstream os;
    os << "inhomogeneous fit " << (warned ? "warned" : "DID NOT WARN") << ", c_log rel err "
       << clog_err << " (tol 0.05); ideal fit "
       << (clean ? "clean" : "SPURIOUS WARNING");
    r.details = os.str();
    return r;
}

CriterionResult properties() {
    CriterionResult r{"properties"};
    std::string detail;
    bool ok = true;
    for (unsigned seed : {1u, 2u, 3u}) ok = property_suite(seed, detail) && ok;
    r.pass = ok;
    r.details = ok ? "all properties hold under seeds 1, 2, 3" : detail;
    return r;
}

const std::vector<std::pair<std::string, CriterionResult (*)()>>& registry() {
    static const std::vector<std::pair<std::string, CriterionResult (*)()>> reg = {
        {"ideal-triangle", ideal_triangle},
        {"ideal-coefficients", ideal_coefficients},
        {"ideal-force", ideal_force},
        {"oracle-chain", oracle_chain},
        {"integral-equivalence", integral_equivalence},
        {"denergy-equivalence", denergy_equivalence},
        {"divergent-coefficients", divergent_coefficients},
        {"lerch-expansion", lerch_expansion},
        {"c0-log-warning", c0_log_warning},
        {"properties", properties},
    };
    return reg;
}

}  // namespace

std::vector<std::string> criterion_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

CriterionResult run_criterion(const std::string& name) {
    for (const auto& [n, fn] : registry()) {
        if (n == name) {
            auto t0 = std::chrono::steady_clock::now();
            CriterionResult r = fn();
            r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                              .count();
            return r;
        }
    }
    throw std::invalid_argument("unknown acceptance criterion: " + name);
}

std::vector<CriterionResult> run_all() {
    std::vector<CriterionResult> results;
    for (const auto& [name, fn] : registry()) results.push_back(run_criterion(name));
    return results;
}

// --- property suite -------------------------------------------------------

namespace {

struct PropertyChecker {
    std::mt19937 rng;
    unsigned seed;
    std::string& detail;
    bool ok = true;

    PropertyChecker(unsigned seed_, std::string& d) : rng(seed_), seed(seed_), detail(d) {}

    void check(bool cond, const std::string& what, double got) {
        if (!cond) {
            ok = false;
            std::ostringstream os;
            os << "FAIL [seed " << seed << "]: " << what << " (got " << got << ")\n";
            detail += os.str();
        }
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    int uniform_int(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    }
};

double mode_norm_integral(const PistonGeometry& g, const Mode& mode) {
    auto [lo, hi] = g.side_interval(mode.side);
    return quad::integrate(
        [&](double x) {
            auto E = mode_field(g, mode, x);
            return std::norm(E[0]) + std::norm(E[1]) + std::norm(E[2]);
        },
        lo, hi, 1e-12);
}

}  // namespace

bool property_suite(unsigned seed, std::string& detail) {
    PropertyChecker c(seed, detail);

    // Mode normalization over the side volume, 20 random modes.
    for (int i = 0; i < 20; ++i) {
        Side side = c.uniform_int(0, 1) ? Side::Right : Side::Left;
        int lambda = c.uniform_int(1, 2);
        int m = lambda == 1 ? c.uniform_int(1, 8) : c.uniform_int(0, 8);
        double k = c.uniform(0.1, 5.0);
        PistonGeometry g(1.0, c.uniform(0.15, 0.85));
        double n = mode_norm_integral(g, Mode(side, m, k, lambda));
        c.check(std::abs(n - 1.0) < 1e-10, "mode normalization != 1", n);
    }

    // Orthogonality between different m at equal lambda and k_par.
    for (int i = 0; i < 10; ++i) {
        int lambda = c.uniform_int(1, 2);
        int m1 = c.uniform_int(1, 6);
        int m2 = m1 + c.uniform_int(1, 4);
        double k = c.uniform(0.1, 5.0);
        PistonGeometry g(1.0, c.uniform(0.2, 0.8));
        Mode a(Side::Left, m1, k, lambda), b(Side::Left, m2, k, lambda);
        double dot = quad::integrate(
            [&](double x) {
                auto Ea = mode_field(g, a, x);
                auto Eb = mode_field(g, b, x);
                double acc = 0.0;
                for (int j = 0; j < 3; ++j) acc += (std::conj(Ea[j]) * Eb[j]).real();
                return acc;
            },
            0.0, g.a, 1e-12, 1e-12);
        c.check(std::abs(dot) < 1e-10, "mode orthogonality violated", dot);
    }

    // omega0 monotone in m and k_par; left/right exchange symmetry.
    for (int i = 0; i < 10; ++i) {
        PistonGeometry g(1.0, c.uniform(0.2, 0.8));
        PistonGeometry swapped(1.0, 1.0 - g.a);
        int m = c.uniform_int(1, 8);
        double k = c.uniform(0.0, 4.0);
        double w = omega0(g, Mode(Side::Left, m, k, 2));
        c.check(omega0(g, Mode(Side::Left, m + 1, k, 2)) > w, "omega0 not monotone in m", w);
        c.check(omega0(g, Mode(Side::Left, m, k + 0.5, 2)) > w, "omega0 not monotone in k", w);
        double wr = omega0(swapped, Mode(Side::Right, m, k, 2));
        c.check(rel_err(w, wr) < 1e-14, "omega0 a <-> L-a exchange broken", wr);
    }

    // Lerch identities: Phi(z,1,1) = -ln(1-z)/z, and the shift recurrence.
    for (double z : {0.1, 0.5, 0.9, 0.99}) {
        double got = specfun::lerch_phi(z, 1.0);
        double want = -std::log1p(-z) / z;
        c.check(std::abs(got - want) < 1e-12, "lerch_phi closed-form identity", got);
    }
    for (int i = 0; i < 50; ++i) {
        double z = c.uniform(0.05, 0.99);
        double v = c.uniform(0.05, 3.0);
        double lhs = specfun::lerch_phi(z, v);
        double rhs = 1.0 / v + z * specfun::lerch_phi(z, v + 1.0);
        c.check(std::abs(lhs - rhs) < 1e-11, "lerch_phi shift recurrence", lhs - rhs);
    }

    // Digamma recurrence and reflection, including the +/- v pairs used by
    // the asymptotic energy expression.
    for (int i = 0; i < 20; ++i) {
        double x = c.uniform(0.05, 6.0);
        double rec = specfun::digamma(x + 1.0) - specfun::digamma(x) - 1.0 / x;
        c.check(std::abs(rec) < 1e-11, "digamma recurrence", rec);
        double v = c.uniform(0.05, 0.45);
        double refl = specfun::digamma(1.0 - v) - specfun::digamma(v) -
                      M_PI / std::tan(M_PI * v);
        c.check(std::abs(refl) < 1e-11, "digamma reflection", refl);
        double pair = specfun::digamma(-v) - (specfun::digamma(1.0 + v) +
                                              M_PI / std::tan(M_PI * v));
        // psi(-v) = psi(1+v) + pi cot(pi v): reflection plus recurrence.
        c.check(std::abs(pair) < 1e-10, "digamma at -v inconsistent", pair);
    }

    // Bernoulli symmetry B_n(1-x) = (-1)^n B_n(x).
    for (int n = 0; n <= 12; ++n)
        for (int i = 0; i < 4; ++i) {
            double x = c.uniform(-1.0, 2.0);
            double d = specfun::bernoulli_poly(n, 1.0 - x) -
                       (n % 2 ? -1.0 : 1.0) * specfun::bernoulli_poly(n, x);
            c.check(std::abs(d) < 1e-12, "Bernoulli symmetry", d);
        }

    // The k_par integration identity behind the exact u-substitution:
    // d/dk [(sqrt(u0^2+k^2)/xi + 1/xi^2) e^{-xi sqrt(u0^2+k^2)}] = -k e^{-xi sqrt(...)}.
    for (int i = 0; i < 20; ++i) {
        double a = c.uniform(0.2, 0.8);
        int m = c.uniform_int(0, 6);
        double xi = c.uniform(0.05, 0.5);
        double k = c.uniform(0.2, 5.0);
        double u0 = m * M_PI / a;
        auto bracket = [&](double kk) {
            double u = std::hypot(u0, kk);
            return (u / xi + 1.0 / (xi * xi)) * std::exp(-xi * u);
        };
        double h = 1e-6 * k;
        double fd = (bracket(k + h) - bracket(k - h)) / (2.0 * h);
        double want = -k * std::exp(-xi * std::hypot(u0, k));
        c.check(rel_err(fd, want) < 1e-6, "k_par integration identity", fd / want - 1.0);
    }

    // Geometric series: truncated sum against 1/(1 - e^{-xi pi / a}).
    for (int i = 0; i < 10; ++i) {
        double a = c.uniform(0.2, 0.8);
        double xi = c.uniform(0.05, 0.5);
        double q = std::exp(-xi * M_PI / a);
        long M = (long)std::ceil(37.0 * a / (M_PI * xi));
        quad::KahanSum s;
        double qm = 1.0;
        for (long m = 0; m <= M; ++m) {
            s.add(qm);
            qm *= q;
        }
        double closed = 1.0 / (1.0 - q);
        double tail = qm / (1.0 - q);
        c.check(std::abs(s.value() - closed) <= tail + 1e-12 * closed,
                "geometric series truncation", s.value() - closed);
    }

    // Energy symmetries: a <-> L-a exchange and the length^-3 scaling.
    for (int i = 0; i < 5; ++i) {
        double a = c.uniform(0.2, 0.8);
        double xi = c.uniform(0.05, 0.3);
        double e1 = energy_numeric(PistonGeometry(1.0, a), Regulator(xi)).value;
        double e2 = energy_numeric(PistonGeometry(1.0, 1.0 - a), Regulator(xi)).value;
        c.check(rel_err(e1, e2) < 1e-12, "energy a <-> L-a symmetry", e1 - e2);
        double e_scaled = energy_numeric(PistonGeometry(2.0, 2.0 * a), Regulator(2.0 * xi)).value;
        c.check(rel_err(e_scaled, e1 / 8.0) < 1e-12, "energy length^-3 scaling", e_scaled);
    }

    // Any m = 0 weight change is a-independent: it cancels in a-differences.
    {
        double xi = 0.1;
        for (double w : {0.5, 1.5}) {
            SumAccuracy acc;
            acc.m0_weight = w;
            double d_ref = energy_numeric(PistonGeometry(1.0, 0.3), Regulator(xi)).value -
                           energy_numeric(PistonGeometry(1.0, 0.7), Regulator(xi)).value;
            double d_w = energy_numeric(PistonGeometry(1.0, 0.3), Regulator(xi), acc).value -
                         energy_numeric(PistonGeometry(1.0, 0.7), Regulator(xi), acc).value;
            c.check(std::abs(d_ref - d_w) < 1e-12, "m=0 weight leaks into a-difference",
                    d_ref - d_w);
        }
    }

    return c.ok;
}

}  // namespace piston::acceptance
