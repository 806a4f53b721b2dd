#ifndef THICKSUM_FRAGMENTATION_HPP
#define THICKSUM_FRAGMENTATION_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "thicksum/function.hpp"
#include "thicksum/interval.hpp"
#include "thicksum/thickness.hpp"

namespace thicksum {

/// Past the prefix, K_{n+1} = K_n + period.
struct TranslateTail {
    Rational period;
};

/**
 * Finite prefix K_0, ..., K_L of an ordered fragmentation with an optional
 * tail rule generating K_{L+1}, K_{L+2}, ...
 */
class Fragmentation {
public:
    explicit Fragmentation(std::vector<IntervalUnion> fragments,
                           std::optional<TranslateTail> tail = std::nullopt);

    const std::vector<IntervalUnion>& prefix() const { return fragments_; }
    std::size_t prefix_size() const { return fragments_.size(); }
    std::size_t last_index() const { return fragments_.size() - 1; }
    const std::optional<TranslateTail>& tail() const { return tail_; }

    bool has_fragment(std::size_t n) const { return n < fragments_.size() || tail_.has_value(); }
    /// K_n, generated from the tail rule past the prefix.
    IntervalUnion fragment(std::size_t n) const;

    /// Least s with K_{n+1} = K_n + period for every n >= s. Requires a tail.
    std::optional<std::size_t> translate_from() const;

private:
    std::vector<IntervalUnion> fragments_;
    std::optional<TranslateTail> tail_;
};

/// Distance min K_{n+1} - max K_n.
Rational fragment_distance(const Fragmentation& f, std::size_t n);

/// Translates every fragment by d (and keeps the tail rule).
Fragmentation shift(const Fragmentation& f, const Rational& d);
/// Shift so that min K_0 = 0.
Fragmentation shift_to_origin(const Fragmentation& f);

/// F(A, a): K_n = [n(A + a), n(A + a) + A] for n = 0..N, translate tail A + a.
Fragmentation make_FAa(const Rational& A, const Rational& a, std::size_t N);

/// Depth-`depth` middle-alpha Cantor approximants of length A at spacing a.
Fragmentation make_cantor_fragments(const Rational& A, const Rational& a, const Rational& alpha,
                                    unsigned depth, std::size_t N);

enum class TailProof { GeneratorUniform, None };
const char* to_string(TailProof t);

struct ThicknessCertificate {
    Rational A;
    Rational a;
    ThicknessValue tau;
    std::size_t skipped = 0;
    std::size_t checked_prefix = 0;
    TailProof tail_proof = TailProof::None;
};

struct SparsityCertificate {
    Rational a;
    std::size_t checked_prefix = 0;
    TailProof tail_proof = TailProof::None;
};

/// First violated condition.
struct CertificationFailure {
    std::string condition;  // "diam_lower", "diam_upper", "dist", "tau"
    std::size_t index = 0;
    std::string detail;
};

using ThickResult = std::variant<ThicknessCertificate, CertificationFailure>;
using SparseResult = std::variant<SparsityCertificate, CertificationFailure>;

/**
 * Checks A <= diam K_n <= 2A, dist(K_n, K_{n+1}) < a and tau(K_n) >= tau for
 * n >= skip on the prefix and, with a translate tail, for the generated tail.
 */
ThickResult certify_thick(const Fragmentation& f, const Rational& A, const Rational& a,
                          const ThicknessValue& tau, std::size_t skip = 0);

/// Checks dist(K_n, K_{n+1}) >= a.
SparseResult certify_sparse(const Fragmentation& f, const Rational& a);

/**
 * Strictly increasing piecewise-affine f with f[hull K_n] inside
 * [n - eps, n + eps] (K_0 maps into [0, eps]). Periodic tail when F has a
 * translate tail.
 */
AdmissibleFunction make_collapse_counterexample(const Fragmentation& f, const Rational& eps);

/// g[K_n] for n = 0..count-1.
std::vector<ImageEnclosure> image_fragments(const AdmissibleFunction& g, const Fragmentation& f,
                                            std::size_t count,
                                            unsigned long precision = kDefaultPrecision);

}  // namespace thicksum

#endif
