#ifndef THICKSUM_CLI_HPP
#define THICKSUM_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "thicksum/rational.hpp"

namespace thicksum {

enum class OutputFormat { Text, Json, Csv };

struct RunConfig {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::optional<Rational> horizon;
    unsigned long precision = 64;
    std::optional<OutputFormat> format;  // per-subcommand default when unset
    std::uint64_t seed = 1;

    // tau
    bool brute = false;
    // lambda / classify
    Rational gamma = 1;
    std::optional<Rational> M;
    // certify
    std::optional<std::string> thick;  // "A,a,tau"
    std::optional<Rational> sparse;
    std::size_t skip = 0;
    // halfline
    std::string frag_path;
    std::string fn_path;
    std::string mode = "chain";
    std::optional<Rational> A;
    std::optional<Rational> a;
    Rational eps = 1;
    std::optional<Rational> R;
    std::optional<Rational> tau;
    std::size_t fold = 2;
    std::size_t witnesses = 20;
    Rational from = 0;
    // phase-scan
    std::string r_grid;
    std::string a_grid;
    std::size_t fragments = 40;
    unsigned threads = 0;
    bool no_runtime = false;
    // selftest
    std::size_t cases = 50;
    std::vector<std::string> only;
    bool inject_fault = false;
};

/// Default precision: THICKSUM_PRECISION when set, otherwise 64.
unsigned long default_precision();

/// Executes a parsed configuration. Returns the exit status: 0 for any
/// completed computation, 1 for selftest failures, 2 for errors (reported as
/// JSON on `out`).
int run(const RunConfig& config, std::ostream& out);

/// Parses argv and runs. Usage errors go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thicksum

#endif
