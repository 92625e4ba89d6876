// Command-line front end: every computation in the library, with
// machine-readable JSON output (CSV/text projections), config-file support,
// and one-shot reproduction of the acceptance checks.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "piston/acceptance.hpp"
#include "piston/ideal.hpp"
#include "piston/laurent.hpp"
#include "piston/model.hpp"
#include "piston/perturbation.hpp"

using json = nlohmann::ordered_json;
using namespace piston;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Output {
    std::string path;      // empty = stdout
    std::string format = "json";
    bool si = false;
    double hbar_c = 1.0;

    double unit_scale() const { return si ? hbar_c : 1.0; }

    void emit(const json& j) const {
        std::string text;
        if (format == "json") {
            text = j.dump(2) + "\n";
        } else if (format == "csv") {
            std::ostringstream os;
            os << "key,value\n";
            std::function<void(const json&, const std::string&)> walk =
                [&](const json& node, const std::string& prefix) {
                    if (node.is_object()) {
                        for (auto it = node.begin(); it != node.end(); ++it)
                            walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
                    } else if (node.is_array()) {
                        int i = 0;
                        for (const auto& el : node) walk(el, prefix + "." + std::to_string(i++));
                    } else {
                        os << prefix << "," << node.dump() << "\n";
                    }
                };
            walk(j, "");
            text = os.str();
        } else {  // text
            text = j.dump(2) + "\n";
        }
        if (path.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(path);
            if (!f) throw std::runtime_error("cannot open output file: " + path);
            f << text;
        }
    }
};

json num(double value, const std::string& units, const std::string& method) {
    return json{{"value", value}, {"units", units}, {"method", method}};
}

std::string resolve_output(const std::string& given) {
    if (given.empty()) return given;
    if (given.front() == '/' ) return given;
    if (const char* dir = std::getenv("PISTON_OUTPUT_DIR"))
        return std::string(dir) + "/" + given;
    return given;
}

DielectricProfile parse_profile(const std::string& arg, double alpha) {
    if (arg == "sin") return DielectricProfile::sinusoidal(alpha);
    if (arg.rfind("file:", 0) == 0) {
        std::ifstream f(arg.substr(5));
        if (!f) throw UsageError("cannot open profile file: " + arg.substr(5));
        std::vector<std::pair<double, double>> samples;
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double x, de;
            if (ls >> x >> de) samples.emplace_back(x, de);
        }
        return DielectricProfile::tabulated(std::move(samples));
    }
    throw UsageError("unknown profile '" + arg + "' (expected 'sin' or 'file:<path>')");
}

std::vector<int> parse_basis(const std::string& basis) {
    std::vector<int> powers;
    std::istringstream is(basis);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            std::size_t pos = 0;
            int p = std::stoi(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            powers.push_back(p);
        } catch (const std::exception&) {
            throw UsageError("malformed basis entry '" + tok + "' in '" + basis + "'");
        }
    }
    if (powers.empty()) throw UsageError("empty basis string");
    return powers;
}

std::vector<double> parse_grid(const std::string& arg) {
    // start:stop:count
    double start, stop;
    int count;
    char c1, c2;
    std::istringstream is(arg);
    if (!(is >> start >> c1 >> stop >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
        throw UsageError("malformed grid '" + arg + "' (expected start:stop:count)");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
    return g;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw UsageError("invalid xi window");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return g;
}

json fit_to_json(const LaurentFit& fit) {
    json coeffs = json::object();
    for (const auto& [p, c] : fit.coefficients) {
        coeffs["xi^" + std::to_string(p)] =
            json{{"value", c}, {"uncertainty", fit.uncertainties.at(p)}};
    }
    if (fit.include_log)
        coeffs["log"] = json{{"value", fit.c_log}, {"uncertainty", fit.c_log_uncertainty}};
    return json{{"coefficients", coeffs},
                {"residual_rms", fit.residual_rms},
                {"condition_estimate", fit.condition_estimate},
                {"reliable", fit.reliable()}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cutoff-regularized vacuum energy of the Casimir piston"};
    app.set_config("--config");
    app.require_subcommand(1);
    app.fallthrough();

    Output out;
    std::string out_path;
    app.add_option("-o,--output", out_path, "Output file (relative paths use $PISTON_OUTPUT_DIR)");
    app.add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    app.add_flag("--si", out.si, "Scale energies/forces by the supplied hbar*c");
    app.add_option("--hbar-c", out.hbar_c, "hbar*c in the user's unit system")
        ->capture_default_str();
    unsigned seed = 0;
    app.add_option("--seed", seed, "Seed for randomized property grids");

    double L = 1.0, a = 0.5, xi = 0.1, alpha = 1.0, kpar = 0.0;
    int m = 1, lambda = 2, layers = 128, points = 40;
    std::string method = "all", side_s = "left", profile_s = "sin";
    std::string quantity_s = "denergy-dalpha", basis_s = "-4,-3,-2,-1,0,1,2,3,4,5,6";
    bool use_log = true;
    double xi_min = 2e-3, xi_max = 5e-2;
    std::string a_grid_s = "0.2:0.8:7", plot_path;

    auto add_geometry = [&](CLI::App* cmd) {
        cmd->add_option("--L", L, "Chamber length")->capture_default_str();
        cmd->add_option("--a", a, "Piston position (0 < a < L)")->capture_default_str();
    };

    // ideal ---------------------------------------------------------------
    auto* ideal = app.add_subcommand("ideal", "Empty-piston energy and force");
    auto* ideal_energy = ideal->add_subcommand("energy", "Regularized energy per area");
    add_geometry(ideal_energy);
    ideal_energy->add_option("--xi", xi, "Cutoff length")->capture_default_str();
    ideal_energy->add_option("--method", method, "numeric|closed|asymptotic|all")
        ->check(CLI::IsMember({"numeric", "closed", "asymptotic", "all"}))
        ->capture_default_str();
    auto* ideal_force = ideal->add_subcommand("force", "Casimir pressure on the piston");
    add_geometry(ideal_force);

    // perturb -------------------------------------------------------------
    auto* perturb = app.add_subcommand("perturb", "Inhomogeneous-medium perturbation theory");
    auto* p_shift = perturb->add_subcommand("shift", "First-order eigenfrequency shift");
    add_geometry(p_shift);
    p_shift->add_option("--side", side_s, "left|right")
        ->check(CLI::IsMember({"left", "right"}))->capture_default_str();
    p_shift->add_option("--m", m, "Longitudinal index")->capture_default_str();
    p_shift->add_option("--lambda", lambda, "Polarization (1 or 2)")->capture_default_str();
    p_shift->add_option("--kpar", kpar, "Transverse wavenumber")->capture_default_str();
    p_shift->add_option("--profile", profile_s, "sin or file:<csv>")->capture_default_str();
    p_shift->add_option("--alpha", alpha, "Sinusoidal amplitude")->capture_default_str();

    auto* p_integral = perturb->add_subcommand("integral", "Regularized k_par integral");
    add_geometry(p_integral);
    p_integral->add_option("--side", side_s)->check(CLI::IsMember({"left", "right"}));
    p_integral->add_option("--m", m)->capture_default_str();
    p_integral->add_option("--lambda", lambda)->capture_default_str();
    p_integral->add_option("--xi", xi)->capture_default_str();
    p_integral->add_option("--method", method, "quadrature|closed|all")
        ->check(CLI::IsMember({"quadrature", "closed", "all"}));

    auto* p_denergy = perturb->add_subcommand("denergy", "dE/dalpha per area");
    add_geometry(p_denergy);
    p_denergy->add_option("--xi", xi)->capture_default_str();
    p_denergy->add_option("--method", method, "sum|closed|asymptotic|all")
        ->check(CLI::IsMember({"sum", "closed", "asymptotic", "all"}));

    auto* p_oracle = perturb->add_subcommand("oracle", "Transfer-matrix validation of a shift");
    add_geometry(p_oracle);
    p_oracle->add_option("--side", side_s)->check(CLI::IsMember({"left", "right"}));
    p_oracle->add_option("--m", m)->capture_default_str();
    p_oracle->add_option("--lambda", lambda)->capture_default_str();
    p_oracle->add_option("--kpar", kpar)->capture_default_str();
    p_oracle->add_option("--alpha", alpha, "Finite-difference amplitude")->default_val(1e-4);
    p_oracle->add_option("--layers", layers, "Slab count")->capture_default_str();

    // laurent -------------------------------------------------------------
    auto* laurent = app.add_subcommand("laurent", "Divergence-structure extraction");
    auto* l_fit = laurent->add_subcommand("fit", "Laurent fit of one quantity");
    add_geometry(l_fit);
    l_fit->add_option("--quantity", quantity_s, "ideal-energy|denergy-dalpha")
        ->check(CLI::IsMember({"ideal-energy", "denergy-dalpha"}))->capture_default_str();
    l_fit->add_option("--xi-min", xi_min)->capture_default_str();
    l_fit->add_option("--xi-max", xi_max)->capture_default_str();
    l_fit->add_option("--points", points)->capture_default_str();
    l_fit->add_option("--basis", basis_s, "Comma-separated powers")->capture_default_str();
    l_fit->add_flag("--log,!--no-log", use_log, "Include log(xi) in the basis");

    auto* l_report = laurent->add_subcommand("report", "Coefficient-vs-a divergence report");
    l_report->add_option("--L", L)->capture_default_str();
    l_report->add_option("--quantity", quantity_s)
        ->check(CLI::IsMember({"ideal-energy", "denergy-dalpha"}));
    l_report->add_option("--a-grid", a_grid_s, "start:stop:count")->capture_default_str();
    l_report->add_option("--xi-min", xi_min)->capture_default_str();
    l_report->add_option("--xi-max", xi_max)->capture_default_str();
    l_report->add_option("--points", points)->capture_default_str();
    l_report->add_option("--basis", basis_s)->capture_default_str();
    l_report->add_option("--emit-plot-data", plot_path, "Write tidy (a, xi, method, value) CSV");

    // reproduce -----------------------------------------------------------
    auto* reproduce = app.add_subcommand("reproduce", "Run acceptance checks");
    std::string criterion = "all";
    reproduce->add_option("name", criterion, "Criterion name or 'all'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    out.path = resolve_output(out_path);
    double scale = out.unit_scale();

    try {
        json j;
        j["config"] = json{{"L", L}, {"a", a}, {"seed", seed}};
        int exit_code = 0;

        if (*ideal_energy) {
            PistonGeometry g(L, a);
            Regulator reg(xi);
            j["config"]["xi"] = xi;
            const char* units = out.si ? "hbar*c/length^3" : "1/length^3";
            json methods = json::object();
            std::optional<double> numeric, closed, asym;
            if (method == "numeric" || method == "all")
                numeric = energy_numeric(g, reg).value;
            if (method == "closed" || method == "all") closed = energy_closed(g, reg).value;
            if (method == "asymptotic" || method == "all") {
                asym = energy_asymptotic(g, reg).value;
                if (!asymptotic_valid(g, reg))
                    j["warnings"].push_back("xi is not small against the side lengths; "
                                            "the asymptotic expansion may be inaccurate");
            }
            if (numeric) methods["numeric"] = num(*numeric * scale, units, "numeric");
            if (closed) methods["closed"] = num(*closed * scale, units, "closed");
            if (asym) methods["asymptotic"] = num(*asym * scale, units, "asymptotic");
            j["energy_per_area"] = methods;
            if (numeric && closed)
                j["deltas"]["numeric_vs_closed"] =
                    num(std::abs(*numeric - *closed) / std::abs(*closed), "relative", "derived");
            if (closed && asym)
                j["deltas"]["closed_vs_asymptotic"] =
                    num(std::abs(*closed - *asym) / std::abs(*closed), "relative", "derived");
        } else if (*ideal_force) {
            PistonGeometry g(L, a);
            const char* units = out.si ? "hbar*c/length^4" : "1/length^4";
            j["force_per_area"] = num(force_per_area(g) * scale, units, "closed");
        } else if (*p_shift) {
            PistonGeometry g(L, a);
            Side side = side_s == "left" ? Side::Left : Side::Right;
            Mode mode(side, m, kpar, lambda);
            auto profile = parse_profile(profile_s, alpha);
            j["config"].update(json{{"side", side_s}, {"m", m}, {"lambda", lambda},
                                    {"kpar", kpar}, {"profile", profile_s}, {"alpha", alpha}});
            j["omega0"] = num(omega0(g, mode), "1/length", "closed");
            double q = first_order_shift_quadrature(g, mode, profile).omega1;
            bool sinusoidal = profile.kind() == DielectricProfile::Kind::Sinusoidal;
            const char* units = sinusoidal ? "1/length per alpha" : "1/length";
            j["omega1"]["quadrature"] = num(q, units, "quadrature");
            if (sinusoidal) {
                double c = first_order_shift_closed(g, mode).omega1;
                j["omega1"]["closed"] = num(c, units, "closed");
                if (m == 0 && lambda == 2)
                    j["warnings"].push_back(
                        "m = 0 normalization discrepancy: the literal closed form counts the "
                        "constant mode with the m > 0 normalization and is 2x the "
                        "volume-normalized quadrature value; the quadrature is authoritative");
            }
        } else if (*p_integral) {
            PistonGeometry g(L, a);
            Side side = side_s == "left" ? Side::Left : Side::Right;
            Regulator reg(xi);
            j["config"].update(json{{"side", side_s}, {"m", m}, {"lambda", lambda}, {"xi", xi}});
            if (method == "quadrature" || method == "all")
                j["integral"]["quadrature"] =
                    num(shift_integral_quadrature(g, side, m, lambda, reg).value,
                        "1/length^4 per alpha", "quadrature");
            if (method == "closed" || method == "all")
                j["integral"]["closed"] =
                    num(shift_integral_closed(g, side, m, lambda, reg).value,
                        "1/length^4 per alpha", "closed");
        } else if (*p_denergy) {
            PistonGeometry g(L, a);
            Regulator reg(xi);
            j["config"]["xi"] = xi;
            const char* units = out.si ? "hbar*c/length^3 per alpha" : "1/length^3 per alpha";
            std::optional<double> sum, closed, asym;
            if (method == "sum" || method == "all") sum = denergy_dalpha_sum(g, reg);
            if (method == "closed" || method == "all") closed = denergy_dalpha_closed(g, reg);
            if (method == "asymptotic" || method == "all") {
                asym = denergy_dalpha_asymptotic(g, reg);
                if (!denergy_asymptotic_valid(g, reg))
                    j["warnings"].push_back("xi is not small against the side lengths; "
                                            "the asymptotic expansion may be inaccurate");
            }
            if (sum) j["denergy_dalpha"]["sum"] = num(*sum * scale, units, "sum");
            if (closed) j["denergy_dalpha"]["closed"] = num(*closed * scale, units, "closed");
            if (asym) j["denergy_dalpha"]["asymptotic"] = num(*asym * scale, units, "asymptotic");
            if (sum && closed)
                j["deltas"]["sum_vs_closed"] =
                    num(std::abs(*sum - *closed) / std::abs(*closed), "relative", "derived");
        } else if (*p_oracle) {
            PistonGeometry g(L, a);
            Side side = side_s == "left" ? Side::Left : Side::Right;
            Mode mode(side, m, kpar, lambda);
            double w0 = omega0(g, mode);
            auto nearest = [&](double amp) {
                auto roots = transfer_matrix_eigenfrequencies(
                    g, side, DielectricProfile::sinusoidal(amp), kpar, lambda, w0 + 2.0, layers);
                if (roots.empty())
                    throw std::runtime_error("oracle: no transfer-matrix roots near omega0");
                double best = roots[0];
                for (double r : roots)
                    if (std::abs(r - w0) < std::abs(best - w0)) best = r;
                return best;
            };
            double fd = (nearest(alpha) - nearest(0.0)) / alpha;
            double closed = first_order_shift_closed(g, mode).omega1;
            j["config"].update(json{{"side", side_s}, {"m", m}, {"lambda", lambda},
                                    {"kpar", kpar}, {"alpha", alpha}, {"layers", layers}});
            j["omega1"]["transfer_matrix_fd"] = num(fd, "1/length per alpha", "oracle");
            j["omega1"]["closed"] = num(closed, "1/length per alpha", "closed");
            j["deltas"]["oracle_vs_closed"] =
                num(std::abs(fd - closed) / std::abs(closed), "relative", "derived");
        } else if (*l_fit) {
            PistonGeometry g(L, a);
            Quantity q = quantity_s == "ideal-energy" ? Quantity::IdealEnergy
                                                      : Quantity::DenergyDalpha;
            auto powers = parse_basis(basis_s);
            std::vector<std::pair<double, double>> samples;
            for (double x : log_grid(xi_min, xi_max, points))
                samples.emplace_back(x, evaluate_quantity(q, g, x));
            auto fit = laurent_fit(samples, powers, use_log);
            j["config"].update(json{{"quantity", quantity_s}, {"xi_min", xi_min},
                                    {"xi_max", xi_max}, {"points", points}, {"basis", basis_s}});
            j["fit"] = fit_to_json(fit);
            try {
                auto c0 = extract_c0(fit);
                j["c0"] = num(c0.c0, "1/length^3", "laurent-fit");
                for (const auto& w : c0.warnings) j["warnings"].push_back(w);
            } catch (const std::exception& e) {
                j["c0_error"] = e.what();
            }
        } else if (*l_report) {
            Quantity q = quantity_s == "ideal-energy" ? Quantity::IdealEnergy
                                                      : Quantity::DenergyDalpha;
            auto powers = parse_basis(basis_s);
            auto a_grid = parse_grid(a_grid_s);
            auto xis = log_grid(xi_min, xi_max, points);
            auto report = divergence_report(L, a_grid, xis, q, powers, true);
            if (out.format == "text") {
                if (out.path.empty()) {
                    std::cout << report_to_text(report);
                } else {
                    std::ofstream f(out.path);
                    f << report_to_text(report);
                }
                if (!plot_path.empty()) {
                    std::ofstream f(resolve_output(plot_path));
                    f << report_to_csv(report);
                }
                return 0;
            }
            j["report"]["L"] = L;
            j["report"]["quantity"] = quantity_s;
            for (const auto& row : report.rows) {
                json r = fit_to_json(row.fit);
                r["a"] = row.a;
                j["report"]["rows"].push_back(r);
            }
            j["report"]["varies_with_a"] = report.varies_with_a;
            j["report"]["csv"] = report_to_csv(report);
            if (!plot_path.empty()) {
                std::ofstream f(resolve_output(plot_path));
                f << report_to_csv(report);
            }
        } else if (*reproduce) {
            std::vector<acceptance::CriterionResult> results;
            if (criterion == "all") {
                results = acceptance::run_all();
            } else if (criterion == "properties" && seed != 0) {
                std::string detail;
                acceptance::CriterionResult r;
                r.name = "properties";
                r.pass = acceptance::property_suite(seed, detail);
                r.details = r.pass ? "all properties hold" : detail;
                results.push_back(r);
            } else {
                results.push_back(acceptance::run_criterion(criterion));
            }
            bool all_pass = true;
            for (const auto& r : results) {
                j["criteria"].push_back(json{{"name", r.name},
                                             {"pass", r.pass},
                                             {"elapsed_s", r.elapsed_s},
                                             {"details", r.details}});
                all_pass = all_pass && r.pass;
            }
            j["pass"] = all_pass;
            if (!all_pass) exit_code = 1;
        }

        out.emit(j);
        return exit_code;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        json err{{"error", e.what()}, {"kind", "invalid_argument"}};
        std::cout << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err{{"error", e.what()}, {"kind", "computation"}};
        std::cout << err.dump(2) << "\n";
        return 1;
    }
}
