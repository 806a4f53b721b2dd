#include "thicksum/phase_scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "thicksum/errors.hpp"
#include "thicksum/fragmentation.hpp"

namespace thicksum {

namespace {

using detail::RealInterval;

// Sign of e^{p} + e^{q} - 2, refined.
Comparison sign_exp_pair(const Rational& p, const Rational& q) {
    for (mpfr_prec_t prec = 128; prec <= (1 << 13); prec *= 2) {
        RealInterval v = RealInterval::point(p, prec).exp() + RealInterval::point(q, prec).exp() -
                         RealInterval::point(2, prec);
        Enclosure e = v.to_enclosure();
        if (e.lo > 0) return Comparison::Greater;
        if (e.hi < 0) return Comparison::Less;
    }
    return Comparison::Unresolved;
}

ScanRow scan_cell(const Rational& A, const Rational& r, const Rational& a, std::size_t fragments) {
    auto t0 = std::chrono::steady_clock::now();
    ScanRow row;
    row.r = r;
    row.a = a;
    Rational ra = r * a;
    row.ra_exp = exp_enclosure(ra, 64);
    row.ra_vs_log2 = compare_exp(ra, 2);
    row.a_large = sign_exp_pair(-r * A, ra) == Comparison::Less &&
                  sign_exp_pair(Rational(-ra), Rational(r * A)) == Comparison::Greater;

    Fragmentation f = make_FAa(A, a, fragments - 1);
    AdmissibleFunction g = AdmissibleFunction::exp(r);

    RealInterval x_sum = RealInterval::point(0, 128);
    for (std::size_t n = 0; n < fragments; ++n) x_sum = x_sum + detail::eval_interval(g, f.fragment(n).max(), 128);
    Rational horizon = x_sum.to_enclosure().hi;

    EnvelopeFactor env = envelope_factor(f, g, fragments + 1);
    HalfLineVerdict refute = stratum_refute({env, env}, fragments - 1);
    HalfLineVerdict chain = chain_certify(f, g, ChainParams{A, a, 1}, horizon);

    bool no = refute.status == VerdictStatus::CertifiedNoHalfLine;
    bool yes = chain.status == VerdictStatus::CertifiedHalfLine;
    if (no && yes) {
        row.note = "conflict";
    } else if (no) {
        row.verdict = VerdictStatus::CertifiedNoHalfLine;
        row.n0_or_N0 = refute.n0;
        if (!refute.gaps.empty()) row.first_gap = refute.gaps.front().gap;
    } else if (yes) {
        row.verdict = VerdictStatus::CertifiedHalfLine;
        row.n0_or_N0 = chain.n0;
    } else {
        row.note = "refute: " + refute.reason + " | chain: " + chain.reason;
    }
    row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

}  // namespace

std::vector<ScanRow> phase_scan(const ScanConfig& config) {
    if (config.A <= 0) throw DomainError("phase_scan needs A > 0");
    if (config.fragments < 2) throw DomainError("phase_scan needs at least two fragments");
    std::vector<std::pair<Rational, Rational>> cells;
    for (const auto& r : config.r_grid)
        for (const auto& a : config.a_grid) {
            if (r <= 0 || a <= 0) throw DomainError("phase_scan grids must be positive");
            cells.emplace_back(r, a);
        }
    std::sort(cells.begin(), cells.end());
    std::vector<ScanRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
            if (failed) return;
            try {
                rows[i] = scan_cell(config.A, cells[i].first, cells[i].second, config.fragments);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    unsigned n = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(cells.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return rows;
}

std::string scan_csv(const std::vector<ScanRow>& rows, bool include_runtime) {
    std::ostringstream out;
    out << "r,a,ra,verdict,n0_or_N0,first_gap";
    if (include_runtime) out << ",runtime_ms";
    out << "\n";
    for (const auto& row : rows) {
        out << to_string(row.r) << ',' << to_string(row.a) << ',' << to_string(Rational(row.r * row.a)) << ','
            << to_string(row.verdict) << ',';
        if (row.n0_or_N0) out << *row.n0_or_N0;
        out << ',';
        if (row.first_gap) out << to_string(row.first_gap->lo) << ';' << to_string(row.first_gap->hi);
        if (include_runtime) out << ',' << static_cast<long long>(row.runtime_ms);
        out << "\n";
    }
    return out.str();
}

std::vector<Rational> parse_grid(const std::string& text) {
    std::vector<Rational> out;
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        auto colon2 = text.find(':', colon + 1);
        if (colon2 == std::string::npos) throw ParseError("grid range must be lo:hi:step");
        Rational lo = parse_rational(text.substr(0, colon));
        Rational hi = parse_rational(text.substr(colon + 1, colon2 - colon - 1));
        Rational step = parse_rational(text.substr(colon2 + 1));
        if (step <= 0) throw ParseError("grid step must be positive");
        if (lo > hi) throw ParseError("grid range has lo > hi");
        for (Rational v = lo; v <= hi; v += step) out.push_back(v);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_rational(item));
    if (out.empty()) throw ParseError("empty grid");
    return out;
}

}  // namespace thicksum
