#ifndef THICKSUM_PHASE_SCAN_HPP
#define THICKSUM_PHASE_SCAN_HPP

#include <optional>
#include <string>
#include <vector>

#include "thicksum/enclosure.hpp"
#include "thicksum/halfline.hpp"

namespace thicksum {

struct ScanConfig {
    Rational A;
    std::vector<Rational> r_grid;
    std::vector<Rational> a_grid;
    std::size_t fragments = 40;  // F(A, a) prefix K_0..K_{fragments-1}
    unsigned threads = 0;        // 0: hardware concurrency
};

struct ScanRow {
    Rational r;
    Rational a;
    Enclosure ra_exp;           // enclosure of e^{ra}
    Comparison ra_vs_log2;      // ra against log 2, i.e. e^{ra} against 2
    bool a_large = false;       // e^{-rA} + e^{ra} < 2 and e^{-ra} + e^{rA} > 2, certified
    VerdictStatus verdict = VerdictStatus::Inconclusive;
    std::optional<std::size_t> n0_or_N0;
    std::optional<Interval> first_gap;
    std::string note;
    double runtime_ms = 0;
};

/**
 * For every (r, a) runs the stratum refutation and the chain certification on
 * g = e^{rx}, F = F(A, a). Rows are sorted by (r, a). A cell certified both
 * ways is reported as Inconclusive with a "conflict" note.
 */
std::vector<ScanRow> phase_scan(const ScanConfig& config);

/// Columns r, a, ra, verdict, n0_or_N0, first_gap[, runtime_ms]; first_gap is
/// written as "lo;hi".
std::string scan_csv(const std::vector<ScanRow>& rows, bool include_runtime);

/// Parses a comma list ("1/2,1,3/2") or a range "lo:hi:step" (inclusive).
std::vector<Rational> parse_grid(const std::string& text);

}  // namespace thicksum

#endif
