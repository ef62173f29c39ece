#pragma once

#include <json.hpp>

#include "hirz/dlp.hpp"
#include "hirz/existence.hpp"
#include "hirz/kronecker.hpp"
#include "hirz/reduction.hpp"

// JSON forms of the domain types. Rationals are lowest-terms "p/q" strings;
// every to_json has a matching *_from_json that restores the value exactly.
namespace hirz {

using nlohmann::json;

json to_json(const Rational& q);
Rational rational_from_json(const json& j);

json to_json(const Divisor& d);
Divisor divisor_from_json(const json& j);

// Also carries the derived slope and discriminant, which parsing ignores.
json to_json(const Character& v, int e);
Character character_from_json(const json& j);

json to_json(const BundleTag& t);
BundleTag tag_from_json(const json& j);

json to_json(const Interval& i);
Interval interval_from_json(const json& j);

json to_json(const ExceptionalRecord& rec, int e);
ExceptionalRecord record_from_json(const json& j);

json to_json(const HNDecomposition& hn);
HNDecomposition hn_from_json(const json& j);

json to_json(const DecisionCertificate& c);
DecisionCertificate certificate_from_json(const json& j);

json to_json(const DlpValue& v, int e);
DlpValue dlp_from_json(const json& j);

json to_json(const DeltaBracket& b, int e);
DeltaBracket bracket_from_json(const json& j);

json to_json(const ReductionTrace& t);
ReductionTrace trace_from_json(const json& j);

}  // namespace hirz
