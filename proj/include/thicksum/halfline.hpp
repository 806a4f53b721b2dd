#ifndef THICKSUM_HALFLINE_HPP
#define THICKSUM_HALFLINE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thicksum/fragmentation.hpp"
#include "thicksum/function.hpp"
#include "thicksum/interval.hpp"

namespace thicksum {

enum class VerdictStatus { CertifiedHalfLine, CertifiedNoHalfLine, CoveredUpToHorizon, Inconclusive };
const char* to_string(VerdictStatus s);

/// J_n = K~_n + K~_n and J'_n = K~_n + K~_{n+1}, as certified inner intervals.
struct ChainLink {
    std::size_t n = 0;
    Interval j;
    Interval j_prime;
};

/// Open interval (lo, hi) missing from the sum.
struct GapWitness {
    std::size_t n = 0;
    Interval gap;
};

struct HalfLineVerdict {
    VerdictStatus status = VerdictStatus::Inconclusive;
    std::optional<Rational> from;     // CertifiedHalfLine / CoveredUpToHorizon: start of coverage
    std::optional<Rational> horizon;  // CoveredUpToHorizon
    std::optional<std::size_t> n0;    // chain start, or N0 for refutations
    std::string tail_argument;        // how indices past the checked range are handled
    std::string reason;
    std::vector<ChainLink> chain;
    std::vector<GapWitness> gaps;
};

struct ChainParams {
    Rational A;
    Rational a;
    Rational eps;
    std::size_t skip = 0;  // initial fragments exempt from the thickness certificate
};

struct BigTauParams {
    Rational A;
    Rational a;
    Rational R;
    Rational tau;
};

/**
 * Certifies K~ + K~ contains a half-line, K~ = g[F], through the J_n / J'_n
 * chain. Past the directly checked indices, coverage is carried either by the
 * Lambda threshold (needs certify_thick(F, A, a, 1 + eps) with a translate
 * tail) or, for g = e^{rx} on a translate tail, by exact self-similarity of
 * consecutive image pairs. Links are listed while they start below `horizon`.
 */
HalfLineVerdict chain_certify(const Fragmentation& f, const AdmissibleFunction& g,
                              const ChainParams& params, const Rational& horizon,
                              unsigned long precision = kDefaultPrecision);

/// Same chain with the large-thickness hypotheses tau > R^7, a < A / R^3,
/// Lambda(g, A) <= R.
HalfLineVerdict chain_certify_bigtau(const Fragmentation& f, const AdmissibleFunction& g,
                                     const BigTauParams& params, const Rational& horizon,
                                     unsigned long precision = kDefaultPrecision);

/// Per-step scale of envelope values in the tail: either an exact rational or
/// e^{log}.
struct StepScale {
    std::optional<Rational> exact;
    std::optional<Rational> log;
    friend bool operator==(const StepScale&, const StepScale&) = default;
};

/**
 * Envelope [g(x_n), g(y_n)] of the image fragments of one summand. From
 * `homogeneous_from` on, both envelope sequences are multiplied by `step` at
 * every index.
 */
struct EnvelopeFactor {
    AdmissibleFunction g;
    std::vector<Rational> x;
    std::vector<Rational> y;
    std::optional<std::size_t> homogeneous_from;
    std::optional<StepScale> step;

    std::size_t size() const { return x.size(); }
};

using EnvelopeData = std::vector<EnvelopeFactor>;

/// Envelope of g[K_n], n < count, with the tail scale inferred for e^{rx} on a
/// translate tail.
EnvelopeFactor envelope_factor(const Fragmentation& f, const AdmissibleFunction& g, std::size_t count);

/// Envelope given directly by hull endpoints that continue geometrically with
/// ratio rho. g must be linear through the origin or an integer power.
EnvelopeFactor geometric_envelope(const AdmissibleFunction& g, std::vector<Rational> x,
                                  std::vector<Rational> y, const Rational& rho);

/**
 * d-fold stratum criterion: finds the least N0 <= horizon with
 * sum_j y_{n,j} < min_k (x_{n+1,k} + sum_{j != k} x_{0,j}) for all n >= N0,
 * using the tail scale past the prefix. Witnesses G_n cover N0 <= n <= horizon.
 */
HalfLineVerdict stratum_refute(const EnvelopeData& factors, std::size_t horizon);

struct CoverageReport {
    Rational c;
    Rational X;
    bool covered = false;             // by the outer sum (advisory unless certified)
    bool coverage_certified = false;  // by the inner sum
    bool exact = false;
    std::vector<Interval> gaps;  // components of [c, X] outside the outer sum
    std::size_t fragments_used = 0;
};

/// Exact union of image fragment pair sums on [c, X]. Unless `whole_set`
/// says the list is the entire set, refuses when the fragments do not reach
/// X - min.
CoverageReport sum_coverage_upto(std::span<const ImageEnclosure> images, const Rational& c,
                                 const Rational& X, bool whole_set = false);

/// Generates as many images of F under g as [c, X] needs.
CoverageReport sum_coverage_for(const Fragmentation& f, const AdmissibleFunction& g, const Rational& c,
                                const Rational& X, unsigned long precision = kDefaultPrecision);

}  // namespace thicksum

#endif
