#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bhankel::app {

/// One verified statement: pass iff measured <= tolerance.
struct Check {
    std::string name;
    std::string anchor;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Filters and knobs shared by the suites. Unset filters select the
/// whole parameter lattice of a suite.
struct SuiteOptions {
    std::optional<int> n;
    std::optional<double> beta;
    std::optional<int> k;
    std::uint64_t seed = 20240611;
    int young_pairs = 100;
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
std::vector<Check> run_suite(const std::string& name, const SuiteOptions& options);

bool all_pass(const std::vector<Check>& checks);

}  // namespace bhankel::app
