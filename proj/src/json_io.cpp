#include "valkey/json_io.hpp"

#include "valkey/error.hpp"
#include "valkey/text.hpp"

namespace valkey {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const Json& field_of(const Json& j, const char* name, const std::string& where) {
    if (!j.is_object()) bad(where + " must be a JSON object");
    auto it = j.find(name);
    if (it == j.end()) bad(where + " is missing \"" + name + "\"");
    return *it;
}

std::string string_of(const Json& j, const char* name, const std::string& where) {
    const Json& v = field_of(j, name, where);
    if (!v.is_string()) bad(where + ": \"" + name + "\" must be a string");
    return v.get<std::string>();
}

Value value_of(const Json& j, const char* name, const std::string& where) {
    return parse_value(field_of(j, name, where));
}

Poly poly_of(const GroundField& field, const Json& j, const char* name, const std::string& where) {
    return parse_poly(field, string_of(j, name, where));
}

std::vector<PrefixMember> members_of(const GroundField& field, const Json& j, const std::string& where) {
    if (!j.is_array()) bad(where + " must be an array of {key, gamma} objects");
    std::vector<PrefixMember> out;
    for (std::size_t a = 0; a < j.size(); ++a) {
        std::string at = where + "[" + std::to_string(a) + "]";
        out.push_back({poly_of(field, j[a], "key", at), value_of(j[a], "gamma", at)});
    }
    return out;
}

Json members_json(const std::vector<PrefixMember>& members) {
    Json out = Json::array();
    for (const auto& m : members) out.push_back({{"key", m.key.to_string()}, {"gamma", to_json(m.gamma)}});
    return out;
}

Json chain_steps(const MacLaneChain& chain) {
    Json steps = Json::array();
    steps.push_back({{"type", "monomial"}, {"gamma", to_json(chain.gamma(0))}});
    for (std::size_t i = 1; i < chain.size(); ++i) {
        if (chain.is_limit_step(i)) {
            steps.push_back({{"type", "limit"},
                             {"prefix", members_json(chain.valuation(i).prefix().members())},
                             {"key", chain.key(i).to_string()},
                             {"gamma", to_json(chain.gamma(i))}});
        } else {
            steps.push_back({{"type", "augmented"}, {"key", chain.key(i).to_string()}, {"gamma", to_json(chain.gamma(i))}});
        }
    }
    return steps;
}

Json failures_json(const std::vector<Failure>& fs) {
    Json out = Json::array();
    for (const auto& f : fs) {
        Json inputs = Json::object();
        for (const auto& [k, v] : f.inputs) inputs[k] = v;
        out.push_back({{"relation", f.relation}, {"inputs", inputs}, {"lhs", f.lhs}, {"rhs", f.rhs}});
    }
    return out;
}

Json values_json(const std::vector<Value>& vs) {
    Json out = Json::array();
    for (const auto& v : vs) out.push_back(to_json(v));
    return out;
}

}  // namespace

Json parse_json_text(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        // e.byte is one past the offending character.
        std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        int line = 1, column = 1;
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string message = e.what();
        if (auto pos = message.find(": "); pos != std::string::npos) message = message.substr(pos + 2);
        throw ParseError("invalid JSON: " + message, line, column);
    }
}

Json to_json(const Value& v) { return v.to_string(); }

Value parse_value(const Json& j) {
    if (j.is_string()) return Value::parse(j.get<std::string>());
    if (j.is_number_integer()) return Value(j.get<long>());
    bad("a value must be a string such as \"3/2\" or \"inf\", or an integer");
}

GroundField parse_ground_field(const Json& j) {
    const std::string type = string_of(j, "type", "ground");
    if (type == "padic") {
        const Json& p = field_of(j, "p", "ground");
        if (!p.is_number_integer()) bad("ground: \"p\" must be an integer");
        return GroundField::padic(p.get<long>());
    }
    if (type == "tadic") {
        const std::string coeffs = string_of(j, "coefficients", "ground");
        if (coeffs == "rationals") return GroundField::tadic_rationals();
        if (coeffs == "prime") {
            const Json& p = field_of(j, "p", "ground");
            if (!p.is_number_integer()) bad("ground: \"p\" must be an integer");
            return GroundField::tadic_prime(p.get<long>());
        }
        bad("ground: coefficients must be \"rationals\" or \"prime\", got \"" + coeffs + "\"");
    }
    bad("ground: type must be \"padic\" or \"tadic\", got \"" + type + "\"");
}

Json to_json(const GroundField& field) {
    if (field.kind() == GroundField::Kind::PAdic) return {{"type", "padic"}, {"p", field.prime()}};
    if (field.prime() == 0) return {{"type", "tadic"}, {"coefficients", "rationals"}};
    return {{"type", "tadic"}, {"coefficients", "prime"}, {"p", field.prime()}};
}

Descriptor parse_descriptor(const Json& j) {
    GroundField field = parse_ground_field(field_of(j, "ground", "descriptor"));
    const Json& steps = field_of(j, "chain", "descriptor");
    if (!steps.is_array() || steps.empty()) bad("descriptor: \"chain\" must be a non-empty array");
    if (string_of(steps[0], "type", "chain[0]") != "monomial") bad("chain[0] must be the monomial step");
    MacLaneChain chain(field, value_of(steps[0], "gamma", "chain[0]"));
    std::optional<Poly> truncation;
    for (std::size_t i = 1; i < steps.size(); ++i) {
        const std::string at = "chain[" + std::to_string(i) + "]";
        const std::string type = string_of(steps[i], "type", at);
        if (truncation) bad(at + " follows a truncation, which must be the last step");
        if (type == "augmented") {
            chain = chain.augmented(poly_of(field, steps[i], "key", at), value_of(steps[i], "gamma", at));
        } else if (type == "limit") {
            chain = chain.limit(members_of(field, field_of(steps[i], "prefix", at), at + ".prefix"),
                                poly_of(field, steps[i], "key", at), value_of(steps[i], "gamma", at));
        } else if (type == "truncation") {
            truncation = poly_of(field, steps[i], "key", at);
        } else if (type == "monomial") {
            bad(at + ": only the first step may be monomial");
        } else {
            bad(at + ": unknown step type \"" + type + "\"");
        }
    }
    Valuation v = truncation ? Valuation::truncation(chain.top(), *truncation) : chain.top();
    return Descriptor{std::move(chain), std::move(truncation), std::move(v)};
}

Json to_json(const Descriptor& d) {
    Json steps = chain_steps(d.chain);
    if (d.truncation) steps.push_back({{"type", "truncation"}, {"key", d.truncation->to_string()}});
    return {{"ground", to_json(d.field())}, {"chain", steps}};
}

FamilyPrefix parse_prefix(const Json& j) {
    Descriptor base = parse_descriptor(field_of(j, "base", "prefix"));
    return FamilyPrefix(base.valuation, members_of(base.field(), field_of(j, "members", "prefix"), "members"));
}

Json to_json(const FamilyPrefix& prefix) {
    // The base is a chain top, possibly truncated.
    const Valuation& base = prefix.base();
    std::vector<Json> steps;
    std::optional<Poly> truncation;
    const Valuation* v = &base;
    if (v->kind() == Valuation::Kind::Truncation) {
        truncation = v->key();
        v = &v->base();
    }
    for (;;) {
        if (v->kind() == Valuation::Kind::Monomial) {
            steps.push_back({{"type", "monomial"}, {"gamma", to_json(v->gamma())}});
            break;
        }
        if (v->kind() == Valuation::Kind::Augmented) {
            steps.push_back({{"type", "augmented"}, {"key", v->key().to_string()}, {"gamma", to_json(v->gamma())}});
            v = &v->base();
            continue;
        }
        if (v->kind() == Valuation::Kind::LimitAugmented) {
            steps.push_back({{"type", "limit"},
                             {"prefix", members_json(v->prefix().members())},
                             {"key", v->key().to_string()},
                             {"gamma", to_json(v->gamma())}});
            v = &v->prefix().base();
            continue;
        }
        throw Error(ErrorKind::InvalidInput, "a prefix base with a nested truncation has no descriptor form");
    }
    Json chain = Json::array();
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) chain.push_back(*it);
    if (truncation) chain.push_back({{"type", "truncation"}, {"key", truncation->to_string()}});
    return {{"base", {{"ground", to_json(prefix.field())}, {"chain", chain}}}, {"members", members_json(prefix.members())}};
}

Json to_json(const SuiteReport& r) {
    Json notes = Json::array();
    for (const auto& n : r.notes) notes.push_back(n);
    return {{"schemaVersion", kSchemaVersion},
            {"suite", r.suite},
            {"subject", r.subject},
            {"pass", r.pass()},
            {"checks", r.checks},
            {"failureCount", r.failure_count},
            {"failures", failures_json(r.failures)},
            {"skipped", r.skipped},
            {"hypothesesHold", r.hypotheses_hold},
            {"witnessCount", r.witness_count},
            {"witnesses", failures_json(r.witnesses)},
            {"notes", notes}};
}

Json to_json(const EpsilonReport& r) { return {{"epsilon", to_json(r.epsilon)}, {"argmax", r.argmax}}; }

Json to_json(const KeyVerdict& v) {
    Json out{{"kind", to_string(v.kind)}, {"reason", v.reason}};
    out["witness"] = v.witness ? Json(*v.witness) : Json(nullptr);
    if (v.evidence) {
        const LimitKeyEvidence& e = *v.evidence;
        out["evidence"] = {{"degreeMatches", e.degree_matches},
                           {"gammasIncreasing", e.gammas_increasing},
                           {"belowLimitValue", e.below_limit_value},
                           {"valuesIncreasing", e.values_increasing},
                           {"memberValues", values_json(e.member_values)}};
    }
    return out;
}

Json to_json(const KeyComparison& c) {
    auto side = [](const KeyComparison::Side& s) {
        return Json{{"key", s.key.to_string()},
                    {"degree", s.degree},
                    {"epsilon", to_json(s.epsilon)},
                    {"value", to_json(s.value)},
                    {"truncatedOther", to_json(s.truncated_other)}};
    };
    Json checks = Json::array();
    for (const auto& k : c.checks) checks.push_back({{"name", k.name}, {"applicable", k.applicable}, {"holds", k.holds}});
    return {{"q", side(c.q)}, {"qPrime", side(c.qp)}, {"checks", checks}, {"pass", c.pass}};
}

Json to_json(const InitialForm& form) {
    Json terms = Json::array();
    for (const auto& [i, p] : form.terms) terms.push_back({{"exponent", i}, {"coefficient", p.to_string()}});
    return {{"key", form.key.to_string()}, {"value", to_json(form.value)}, {"support", form.support()}, {"terms", terms}};
}

Json to_json(const StabilizationResult& r) {
    Json out{{"outcome", r.stabilized() ? "Stabilized" : "IncreasingThroughPrefix"}};
    if (r.stabilized()) {
        out["value"] = to_json(r.value);
        out["firstIndex"] = r.first_index;
    }
    out["values"] = values_json(r.values);
    return out;
}

Json to_json(const Classification& c) {
    Json out{{"kind", to_string(c.kind)}};
    if (c.kind == Classification::Kind::Stable) out["alphaIndex"] = c.alpha_index;
    out["value"] = to_json(c.value);
    out["values"] = values_json(c.values);
    return out;
}

Json to_json(const LimitCheckReport& r) {
    Json out{{"degreeOk", r.degree_ok},
             {"increasing", r.increasing},
             {"values", values_json(r.values)},
             {"minimalDegree", r.minimal_degree},
             {"sampled", r.sampled},
             {"gammaAdmissible", r.gamma_admissible},
             {"pass", r.pass}};
    out["lowerDegreeWitness"] = r.lower_degree_witness ? Json(r.lower_degree_witness->to_string()) : Json(nullptr);
    return out;
}

std::string dump(const Json& j) { return j.dump(2); }

}  // namespace valkey
