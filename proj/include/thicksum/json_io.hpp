#ifndef THICKSUM_JSON_IO_HPP
#define THICKSUM_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "thicksum/fragmentation.hpp"
#include "thicksum/function.hpp"
#include "thicksum/halfline.hpp"
#include "thicksum/interval.hpp"

namespace thicksum {

using Json = nlohmann::json;

/// Parses JSON text; syntax errors become ParseError "source:line:column: ...".
Json parse_json_text(const std::string& text, const std::string& source);
Json load_json_file(const std::string& path);

// Decoders report the JSON path of the offending value ("$.fragments[2]").
Rational rational_from_json(const Json& j, const std::string& path);
/// {"parts": [[lo, hi], ...]} or the bare array of pairs.
IntervalUnion set_from_json(const Json& j, const std::string& path = "$");
AdmissibleFunction function_from_json(const Json& j, const std::string& path = "$");
/// Explicit {"fragments": [...], "tail": {...}} or a generator
/// {"generator": "FAa" | "cantor", ...}.
Fragmentation fragmentation_from_json(const Json& j, const std::string& path = "$");
HalfLineVerdict verdict_from_json(const Json& j, const std::string& path = "$");

Json to_json(const Rational& q);
Json to_json(const ExtendedRational& q);
Json to_json(const Interval& i);
Json to_json(const IntervalUnion& k);
Json to_json(const AdmissibleFunction& g);
Json to_json(const Fragmentation& f);
Json to_json(const LambdaEstimate& e);
Json to_json(const HalfLineVerdict& v);
Json to_json(const CoverageReport& r);
Json to_json(const ThickResult& r);
Json to_json(const SparseResult& r);

}  // namespace thicksum

#endif
