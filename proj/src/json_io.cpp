#include "thicksum/json_io.hpp"

#include <fstream>
#include <sstream>

#include "thicksum/errors.hpp"

namespace thicksum {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ParseError(path + ": " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path, "missing field \"" + key + "\"");
    return *it;
}

std::string str_field(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = field(j, key, path);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::size_t count_field(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = field(j, key, path);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        fail(path + "." + key, "expected a nonnegative integer");
    return v.get<std::size_t>();
}

Rational rat_field(const Json& j, const std::string& key, const std::string& path) {
    return rational_from_json(field(j, key, path), path + "." + key);
}

Interval interval_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected [lo, hi]");
    Rational lo = rational_from_json(j[0], path + "[0]");
    Rational hi = rational_from_json(j[1], path + "[1]");
    if (lo > hi) fail(path, "lo > hi");
    return Interval(lo, hi);
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

Rational rational_from_json(const Json& j, const std::string& path) {
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const ParseError& e) {
            fail(path, e.what());
        }
    }
    if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<long long>())));
    if (j.is_number_unsigned()) return Rational(mpz_class(std::to_string(j.get<unsigned long long>())));
    if (j.is_number_float()) fail(path, "non-integer numbers must be given as strings (\"p/q\" or decimal)");
    fail(path, "expected a rational (string or integer)");
}

IntervalUnion set_from_json(const Json& j, const std::string& path) {
    // A bare array of [lo, hi] pairs is accepted as shorthand for {"parts": ...}.
    const bool bare = j.is_array();
    const std::string ppath = bare ? path : path + ".parts";
    const Json& parts = bare ? j : field(j, "parts", path);
    if (!parts.is_array()) fail(ppath, "expected an array");
    if (parts.empty()) fail(ppath, "a set needs at least one part");
    std::vector<Interval> raw;
    for (std::size_t i = 0; i < parts.size(); ++i)
        raw.push_back(interval_from_json(parts[i], ppath + "[" + std::to_string(i) + "]"));
    return normalize(std::move(raw));
}

AdmissibleFunction function_from_json(const Json& j, const std::string& path) {
    std::string kind = str_field(j, "kind", path);
    try {
        if (kind == "identity") return AdmissibleFunction::identity();
        if (kind == "power") return AdmissibleFunction::power(rat_field(j, "m", path));
        if (kind == "exp") return AdmissibleFunction::exp(rat_field(j, "r", path));
        if (kind == "stretched_exp")
            return AdmissibleFunction::stretched_exp(rat_field(j, "a", path), rat_field(j, "b", path));
        if (kind == "pwa") {
            const Json& pts = field(j, "points", path);
            if (!pts.is_array()) fail(path + ".points", "expected an array");
            std::vector<std::pair<Rational, Rational>> points;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                std::string p = path + ".points[" + std::to_string(i) + "]";
                if (!pts[i].is_array() || pts[i].size() != 2) fail(p, "expected [x, y]");
                points.emplace_back(rational_from_json(pts[i][0], p + "[0]"),
                                    rational_from_json(pts[i][1], p + "[1]"));
            }
            PwaTail tail = NoTail{};
            if (j.contains("final_slope") && j.contains("periodic"))
                fail(path, "give at most one of final_slope and periodic");
            if (j.contains("final_slope")) tail = FinalSlope{rat_field(j, "final_slope", path)};
            if (j.contains("periodic")) {
                const Json& segs = j["periodic"];
                if (!segs.is_array()) fail(path + ".periodic", "expected an array of [length, slope]");
                PeriodicTail t;
                for (std::size_t i = 0; i < segs.size(); ++i) {
                    std::string p = path + ".periodic[" + std::to_string(i) + "]";
                    if (!segs[i].is_array() || segs[i].size() != 2) fail(p, "expected [length, slope]");
                    t.segments.push_back({rational_from_json(segs[i][0], p + "[0]"),
                                          rational_from_json(segs[i][1], p + "[1]")});
                }
                tail = std::move(t);
            }
            return AdmissibleFunction::pwa(std::move(points), std::move(tail));
        }
        if (kind == "sum") {
            const Json& terms = field(j, "terms", path);
            if (!terms.is_array()) fail(path + ".terms", "expected an array");
            std::vector<std::pair<Rational, AdmissibleFunction>> out;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                std::string p = path + ".terms[" + std::to_string(i) + "]";
                Rational c = terms[i].contains("coeff") ? rat_field(terms[i], "coeff", p) : Rational(1);
                out.emplace_back(c, function_from_json(field(terms[i], "fn", p), p + ".fn"));
            }
            return AdmissibleFunction::scaled_sum(std::move(out));
        }
        if (kind == "product") {
            const Json& fs = field(j, "factors", path);
            if (!fs.is_array() || fs.size() != 2) fail(path + ".factors", "expected exactly two factors");
            return AdmissibleFunction::product(function_from_json(fs[0], path + ".factors[0]"),
                                               function_from_json(fs[1], path + ".factors[1]"));
        }
    } catch (const DomainError& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown function kind \"" + kind + "\"");
}

Fragmentation fragmentation_from_json(const Json& j, const std::string& path) {
    try {
        if (j.is_object() && j.contains("generator")) {
            std::string gen = str_field(j, "generator", path);
            Rational A = rat_field(j, "A", path), a = rat_field(j, "a", path);
            std::size_t N = count_field(j, "N", path);
            if (gen == "FAa") return make_FAa(A, a, N);
            if (gen == "cantor")
                return make_cantor_fragments(A, a, rat_field(j, "alpha", path),
                                             static_cast<unsigned>(count_field(j, "depth", path)), N);
            fail(path + ".generator", "unknown generator \"" + gen + "\"");
        }
        const Json& frags = field(j, "fragments", path);
        if (!frags.is_array() || frags.empty()) fail(path + ".fragments", "expected a nonempty array");
        std::vector<IntervalUnion> out;
        for (std::size_t i = 0; i < frags.size(); ++i)
            out.push_back(set_from_json(frags[i], path + ".fragments[" + std::to_string(i) + "]"));
        std::optional<TranslateTail> tail;
        if (j.contains("tail") && !j["tail"].is_null()) {
            const Json& t = j["tail"];
            std::string kind = str_field(t, "kind", path + ".tail");
            if (kind != "translate") fail(path + ".tail.kind", "only \"translate\" tails are supported");
            tail = TranslateTail{rat_field(t, "period", path + ".tail")};
        }
        return Fragmentation(std::move(out), std::move(tail));
    } catch (const DomainError& e) {
        fail(path, e.what());
    } catch (const EmptySetError& e) {
        fail(path, e.what());
    }
}

Json to_json(const Rational& q) { return to_string(q); }
Json to_json(const ExtendedRational& q) { return to_string(q); }
Json to_json(const Interval& i) { return Json::array({to_string(i.lo), to_string(i.hi)}); }

Json to_json(const IntervalUnion& k) {
    Json parts = Json::array();
    for (const auto& p : k.parts()) parts.push_back(to_json(p));
    return Json{{"parts", parts}};
}

Json to_json(const AdmissibleFunction& g) {
    const auto& v = g.variant();
    if (auto* p = std::get_if<PiecewiseAffine>(&v)) {
        Json pts = Json::array();
        for (const auto& [x, y] : p->points) pts.push_back(Json::array({to_string(x), to_string(y)}));
        Json out{{"kind", "pwa"}, {"points", pts}};
        if (auto* fs = std::get_if<FinalSlope>(&p->tail)) out["final_slope"] = to_string(fs->slope);
        if (auto* pt = std::get_if<PeriodicTail>(&p->tail)) {
            Json segs = Json::array();
            for (const auto& s : pt->segments) segs.push_back(Json::array({to_string(s.length), to_string(s.slope)}));
            out["periodic"] = segs;
        }
        return out;
    }
    if (auto* p = std::get_if<Power>(&v)) return Json{{"kind", "power"}, {"m", to_string(p->m)}};
    if (auto* e = std::get_if<Exp>(&v)) return Json{{"kind", "exp"}, {"r", to_string(e->r)}};
    if (auto* s = std::get_if<StretchedExp>(&v))
        return Json{{"kind", "stretched_exp"}, {"a", to_string(s->a)}, {"b", to_string(s->b)}};
    if (auto* s = std::get_if<ScaledSum>(&v)) {
        Json terms = Json::array();
        for (const auto& [c, f] : s->terms) terms.push_back(Json{{"coeff", to_string(c)}, {"fn", to_json(f)}});
        return Json{{"kind", "sum"}, {"terms", terms}};
    }
    const auto& pr = std::get<Product>(v);
    return Json{{"kind", "product"}, {"factors", Json::array({to_json(pr.factors[0]), to_json(pr.factors[1])})}};
}

Json to_json(const Fragmentation& f) {
    Json frags = Json::array();
    for (const auto& k : f.prefix()) frags.push_back(to_json(k));
    Json out{{"fragments", frags}};
    if (f.tail()) out["tail"] = Json{{"kind", "translate"}, {"period", to_string(f.tail()->period)}};
    return out;
}

Json to_json(const LambdaEstimate& e) {
    Json out{{"lower", to_json(e.lower)}, {"upper", to_json(e.upper)}, {"exact", e.exact}};
    if (e.log_value) out["log_value"] = to_string(*e.log_value);
    return out;
}

Json to_json(const HalfLineVerdict& v) {
    Json out{{"status", to_string(v.status)},
             {"from", v.from ? to_json(*v.from) : Json(nullptr)},
             {"horizon", v.horizon ? to_json(*v.horizon) : Json(nullptr)},
             {"n0", v.n0 ? Json(*v.n0) : Json(nullptr)},
             {"tail_argument", v.tail_argument},
             {"reason", v.reason}};
    Json chain = Json::array();
    for (const auto& l : v.chain) chain.push_back(Json{{"n", l.n}, {"J", to_json(l.j)}, {"J_prime", to_json(l.j_prime)}});
    Json gaps = Json::array();
    for (const auto& g : v.gaps) gaps.push_back(Json{{"n", g.n}, {"gap", to_json(g.gap)}});
    out["chain"] = chain;
    out["gaps"] = gaps;
    return out;
}

HalfLineVerdict verdict_from_json(const Json& j, const std::string& path) {
    HalfLineVerdict v;
    std::string status = str_field(j, "status", path);
    if (status == "CertifiedHalfLine")
        v.status = VerdictStatus::CertifiedHalfLine;
    else if (status == "CertifiedNoHalfLine")
        v.status = VerdictStatus::CertifiedNoHalfLine;
    else if (status == "CoveredUpToHorizon")
        v.status = VerdictStatus::CoveredUpToHorizon;
    else if (status == "Inconclusive")
        v.status = VerdictStatus::Inconclusive;
    else
        fail(path + ".status", "unknown status \"" + status + "\"");
    if (j.contains("from") && !j["from"].is_null()) v.from = rat_field(j, "from", path);
    if (j.contains("horizon") && !j["horizon"].is_null()) v.horizon = rat_field(j, "horizon", path);
    if (j.contains("n0") && !j["n0"].is_null()) v.n0 = count_field(j, "n0", path);
    if (j.contains("tail_argument")) v.tail_argument = str_field(j, "tail_argument", path);
    if (j.contains("reason")) v.reason = str_field(j, "reason", path);
    if (j.contains("chain")) {
        const Json& c = j["chain"];
        for (std::size_t i = 0; i < c.size(); ++i) {
            std::string p = path + ".chain[" + std::to_string(i) + "]";
            v.chain.push_back({count_field(c[i], "n", p), interval_from_json(field(c[i], "J", p), p + ".J"),
                               interval_from_json(field(c[i], "J_prime", p), p + ".J_prime")});
        }
    }
    if (j.contains("gaps")) {
        const Json& g = j["gaps"];
        for (std::size_t i = 0; i < g.size(); ++i) {
            std::string p = path + ".gaps[" + std::to_string(i) + "]";
            v.gaps.push_back({count_field(g[i], "n", p), interval_from_json(field(g[i], "gap", p), p + ".gap")});
        }
    }
    return v;
}

Json to_json(const CoverageReport& r) {
    Json gaps = Json::array();
    for (const auto& g : r.gaps) gaps.push_back(to_json(g));
    return Json{{"c", to_json(r.c)},
                {"X", to_json(r.X)},
                {"covered", r.covered},
                {"coverage_certified", r.coverage_certified},
                {"exact", r.exact},
                {"gaps", gaps},
                {"fragments_used", r.fragments_used}};
}

Json to_json(const ThickResult& r) {
    if (auto* c = std::get_if<ThicknessCertificate>(&r))
        return Json{{"certified", true},         {"A", to_json(c->A)},
                    {"a", to_json(c->a)},        {"tau", to_json(c->tau)},
                    {"skipped", c->skipped},     {"checked_prefix", c->checked_prefix},
                    {"tail_proof", to_string(c->tail_proof)}};
    const auto& f = std::get<CertificationFailure>(r);
    return Json{{"certified", false}, {"condition", f.condition}, {"index", f.index}, {"detail", f.detail}};
}

Json to_json(const SparseResult& r) {
    if (auto* c = std::get_if<SparsityCertificate>(&r))
        return Json{{"certified", true},
                    {"a", to_json(c->a)},
                    {"checked_prefix", c->checked_prefix},
                    {"tail_proof", to_string(c->tail_proof)}};
    const auto& f = std::get<CertificationFailure>(r);
    return Json{{"certified", false}, {"condition", f.condition}, {"index", f.index}, {"detail", f.detail}};
}

}  // namespace thicksum
