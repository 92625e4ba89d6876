#ifndef PISTON_ACCEPTANCE_HPP
#define PISTON_ACCEPTANCE_HPP

#include <string>
#include <vector>

namespace piston::acceptance {

struct CriterionResult {
    std::string name;
    bool pass = false;
    double elapsed_s = 0.0;
    std::string details;
};

/// Names of all acceptance criteria, in run order.
std::vector<std::string> criterion_names();

/// Run one criterion by name; throws std::invalid_argument for unknown names.
CriterionResult run_criterion(const std::string& name);

std::vector<CriterionResult> run_all();

/// Randomized property checks (normalization, recurrences, symmetries,
/// the k_par integration identity, the geometric-series closed form).
/// Returns true when every property holds; failures are appended to detail.
bool property_suite(unsigned seed, std::string& detail);

}  // namespace piston::acceptance

#endif
