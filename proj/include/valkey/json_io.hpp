#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "valkey/family.hpp"
#include "valkey/graded.hpp"
#include "valkey/harness.hpp"
#include "valkey/keypoly.hpp"
#include "valkey/valuation.hpp"

namespace valkey {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

/// Parses JSON text; syntax errors become ParseError with line and column.
Json parse_json_text(std::string_view text);

/// A descriptor file: the chain of steps up to an optional final truncation,
/// and the valuation the file denotes (the chain top or its truncation).
struct Descriptor {
    MacLaneChain chain;
    std::optional<Poly> truncation;
    Valuation valuation;

    const GroundField& field() const { return chain.field(); }
};

/// {"ground": {...}, "chain": [{"type": "monomial", "gamma": "1"}, ...]}
/// Step types: monomial (first, once), augmented {key, gamma},
/// limit {prefix: [{key, gamma}...], key, gamma}, truncation {key} (last).
Descriptor parse_descriptor(const Json& j);
Json to_json(const Descriptor& d);

GroundField parse_ground_field(const Json& j);
Json to_json(const GroundField& field);

/// {"base": <descriptor>, "members": [{"key": ..., "gamma": ...}, ...]}
FamilyPrefix parse_prefix(const Json& j);
Json to_json(const FamilyPrefix& prefix);

Json to_json(const Value& v);
Value parse_value(const Json& j);

Json to_json(const SuiteReport& r);
Json to_json(const EpsilonReport& r);
Json to_json(const KeyVerdict& v);
Json to_json(const KeyComparison& c);
Json to_json(const InitialForm& form);
Json to_json(const StabilizationResult& r);
Json to_json(const Classification& c);
Json to_json(const LimitCheckReport& r);

/// Two-space indented text; the form every file and CLI document uses.
std::string dump(const Json& j);

}  // namespace valkey
