#ifndef THICKSUM_PROPERTIES_HPP
#define THICKSUM_PROPERTIES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace thicksum {

struct SuiteOptions {
    std::uint64_t seed = 1;
    std::size_t cases = 50;
    /// Makes one property check a deliberately wrong claim (for testing the
    /// failure path).
    bool inject_fault = false;
};

struct CheckResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string counterexample;  // smallest failing case found

    bool passed() const { return failures == 0 && cases > 0; }
};

using CheckFn = CheckResult (*)(const SuiteOptions&);

struct CheckInfo {
    const char* name;
    const char* group;
    const char* description;
    CheckFn run;
};

const std::vector<CheckInfo>& property_suite();

/// Runs the properties whose name or group matches one of `selection`
/// (everything when it is empty). Throws DomainError if nothing matches.
std::vector<CheckResult> run_properties(const std::vector<std::string>& selection,
                                           const SuiteOptions& options);

}  // namespace thicksum

#endif
