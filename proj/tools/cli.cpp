#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "valkey/error.hpp"
#include "valkey/family.hpp"
#include "valkey/graded.hpp"
#include "valkey/harness.hpp"
#include "valkey/json_io.hpp"
#include "valkey/keypoly.hpp"
#include "valkey/text.hpp"

#ifndef VALKEY_VERSION
#define VALKEY_VERSION "0.0.0"
#endif

namespace valkey::cli {

namespace {

struct Options {
    std::string descriptor;
    std::string prefix;
    std::string poly;
    std::string other;
    std::string base;
    std::string gamma;
    std::string ground = "tadic:Q";
    std::string output = "json";
    std::optional<std::size_t> step;
    std::size_t short_length = 5;
    int degree = 4;
    int height = 3;
    int trials = 1000;
    std::uint64_t seed = 1;
    std::string suite;
    std::string family_op;
};

struct Outcome {
    Json body;
    int code = kOk;
};

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

std::string read_source(const std::string& arg, const char* flag) {
    if (arg.empty()) usage(std::string("missing ") + flag);
    auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && arg[first] == '{') return arg;
    std::ifstream in(arg);
    if (!in) usage("cannot open " + arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Descriptor load_descriptor(const Options& o) {
    return parse_descriptor(parse_json_text(read_source(o.descriptor, "--descriptor")));
}

FamilyPrefix load_prefix(const Options& o) { return parse_prefix(parse_json_text(read_source(o.prefix, "--prefix"))); }

GroundField parse_ground_flag(const std::string& text) {
    if (text == "tadic:Q" || text == "tadic") return GroundField::tadic_rationals();
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        std::string kind = text.substr(0, colon);
        long p = 0;
        try {
            std::size_t used = 0;
            p = std::stol(text.substr(colon + 1), &used);
            if (used != text.size() - colon - 1) p = 0;
        } catch (const std::exception&) {
            p = 0;
        }
        if (p > 0 && kind == "padic") return GroundField::padic(p);
        if (p > 0 && kind == "tadic") return GroundField::tadic_prime(p);
    }
    usage("--ground must be padic:P, tadic:Q or tadic:P, got \"" + text + "\"");
}

/// Polynomial text, or a JSON array of coefficient strings (ascending).
Poly load_poly(const GroundField& field, const std::string& text, const char* flag) {
    if (text.empty()) usage(std::string("missing ") + flag);
    auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos || text[first] != '[') return parse_poly(field, text);
    Json arr = parse_json_text(text);
    if (!arr.is_array()) usage(std::string(flag) + " must be polynomial text or an array of coefficients");
    std::vector<GroundElement> coeffs;
    for (const auto& c : arr) {
        if (!c.is_string()) usage(std::string(flag) + ": coefficients must be strings");
        coeffs.push_back(parse_ground(field, c.get<std::string>()));
    }
    return Poly(field, std::move(coeffs));
}

std::size_t require_step(const Options& o, const MacLaneChain& chain) {
    if (!o.step) usage("missing --step");
    if (*o.step >= chain.size())
        throw Error(ErrorKind::IndexOutOfRange,
                    "step " + std::to_string(*o.step) + " is out of range for a chain of " +
                        std::to_string(chain.size()) + " steps");
    return *o.step;
}

Value gamma_flag(const Options& o, bool required) {
    if (o.gamma.empty()) {
        if (required) usage("missing --gamma");
        return Value::infinity();
    }
    return Value::parse(o.gamma);
}

Sampler sampler(const Options& o) {
    Sampler s{o.degree, o.height, o.trials, o.seed};
    s.validate();
    return s;
}

Outcome cmd_eval(const Options& o) {
    Descriptor d = load_descriptor(o);
    Poly f = load_poly(d.field(), o.poly, "--poly");
    return {{{"value", to_json(eval(d.valuation, f))}}};
}

Outcome cmd_expand(const Options& o) {
    GroundField field = o.descriptor.empty() ? parse_ground_flag(o.ground) : load_descriptor(o).field();
    Poly f = load_poly(field, o.poly, "--poly");
    Poly q = load_poly(field, o.base, "--base");
    Json parts = Json::array();
    for (const auto& p : q_expansion(f, q).parts) parts.push_back(p.to_string());
    return {{{"parts", parts}}};
}

Outcome cmd_epsilon(const Options& o) {
    Descriptor d = load_descriptor(o);
    Poly f = load_poly(d.field(), o.poly, "--poly");
    Json body = to_json(epsilon(d.valuation, f));
    body["value"] = to_json(eval(d.valuation, f));
    return {body};
}

Outcome cmd_alpha(const Options& o) {
    Descriptor d = load_descriptor(o);
    std::size_t i = require_step(o, d.chain);
    std::optional<int> a = alpha(d.chain, i);
    return {{{"step", i}, {"key", d.chain.key(i).to_string()}, {"alpha", a ? Json(*a) : Json("inf")}}};
}

Outcome cmd_psi(const Options& o) {
    Descriptor d = load_descriptor(o);
    std::size_t i = require_step(o, d.chain);
    Poly candidate = load_poly(d.field(), o.poly, "--poly");
    bool member = psi_member(d.chain, i, candidate);
    return {{{"step", i}, {"key", d.chain.key(i).to_string()}, {"candidate", candidate.to_string()}, {"member", member}}};
}

Outcome cmd_check_key(const Options& o) {
    Descriptor d = load_descriptor(o);
    if (o.step) {
        std::size_t i = require_step(o, d.chain);
        KeyVerdict v = abstract_key_check(d.chain, i);
        Json body{{"step", i}, {"key", d.chain.key(i).to_string()}};
        const Json verdict = to_json(v);
        for (const auto& [k, val] : verdict.items()) body[k] = val;
        return {body, v.kind == KeyVerdict::Kind::Unverified ? kCheckFailed : kOk};
    }
    Json verdicts = Json::array();
    bool all = true;
    for (std::size_t i = 0; i < d.chain.size(); ++i) {
        KeyVerdict v = abstract_key_check(d.chain, i);
        all = all && v.kind != KeyVerdict::Kind::Unverified;
        Json entry{{"step", i}, {"key", d.chain.key(i).to_string()}};
        const Json verdict = to_json(v);
        for (const auto& [k, val] : verdict.items()) entry[k] = val;
        verdicts.push_back(entry);
    }
    return {{{"verdicts", verdicts}, {"pass", all}}, all ? kOk : kCheckFailed};
}

Outcome cmd_compare_keys(const Options& o) {
    Descriptor d = load_descriptor(o);
    KeyComparison c = compare_keys(d.valuation, load_poly(d.field(), o.poly, "--poly"),
                                   load_poly(d.field(), o.other, "--other"));
    return {to_json(c), c.pass ? kOk : kCheckFailed};
}

Outcome cmd_initial_form(const Options& o) {
    Descriptor d = load_descriptor(o);
    Poly key = o.base.empty() ? d.chain.key(require_step(o, d.chain)) : load_poly(d.field(), o.base, "--base");
    return {to_json(initial_form(d.valuation, key, load_poly(d.field(), o.poly, "--poly")))};
}

Outcome cmd_equivalent(const Options& o) {
    Descriptor d = load_descriptor(o);
    Poly f = load_poly(d.field(), o.poly, "--poly");
    Poly g = load_poly(d.field(), o.other, "--other");
    return {{{"equivalent", equivalent(d.valuation, f, g)}}};
}

Outcome cmd_divides(const Options& o) {
    Descriptor d = load_descriptor(o);
    std::size_t i = require_step(o, d.chain);
    Poly f = load_poly(d.field(), o.poly, "--poly");
    if (o.base.empty()) {
        return {{{"divisor", "y"}, {"key", d.chain.key(i).to_string()}, {"divides", y_divides(d.valuation, d.chain.key(i), f)}}};
    }
    Poly qp = load_poly(d.field(), o.base, "--base");
    return {{{"divisor", "in(" + qp.to_string() + ")"},
             {"key", d.chain.key(i).to_string()},
             {"divides", inQprime_divides(d.chain, i, qp, f)}}};
}

Outcome cmd_family(const Options& o) {
    FamilyPrefix prefix = load_prefix(o);
    if (o.family_op == "stabilize") {
        StabilizationResult r = stabilize(prefix, load_poly(prefix.field(), o.poly, "--poly"));
        return {to_json(r), r.stabilized() ? kOk : kNotStabilized};
    }
    if (o.family_op == "classify") return {to_json(classify(prefix, load_poly(prefix.field(), o.poly, "--poly")))};
    Poly q = load_poly(prefix.field(), o.poly, "--poly");
    std::vector<Poly> sample = q.degree() > 0 ? enumerate_polys(prefix.field(), q.degree() - 1, o.height) : std::vector<Poly>{};
    LimitCheckReport r = limit_check(prefix, q, gamma_flag(o, false), sample);
    return {to_json(r), r.pass ? kOk : kCheckFailed};
}

SuiteReport per_step(const std::string& name, const Descriptor& d, const Options& o,
                     const std::function<SuiteReport(std::size_t)>& one) {
    if (o.step) return one(require_step(o, d.chain));
    SuiteReport all;
    all.suite = name;
    all.subject = "every step of " + d.chain.top().describe();
    for (std::size_t i = 0; i < d.chain.size(); ++i) all.absorb(one(i));
    return all;
}

Outcome cmd_check(const Options& o) {
    const Sampler s = sampler(o);
    const std::string& name = o.suite;
    SuiteReport r;
    if (name == "stabilization") {
        r = check_stabilization(load_prefix(o), o.short_length, s);
    } else {
        Descriptor d = load_descriptor(o);
        if (name == "axioms") {
            r = check_axioms(d.valuation, s);
        } else if (name == "theorem1") {
            r = check_theorem1(d.valuation, load_poly(d.field(), o.base, "--base"), gamma_flag(o, true), s);
        } else if (name == "mlv-key") {
            r = check_mlv_key(d.valuation, load_poly(d.field(), o.base, "--base"), s);
        } else if (name == "lemma23") {
            r = per_step(name, d, o, [&](std::size_t i) { return check_lemma23(d.chain, i, s); });
        } else if (name == "graded") {
            r = per_step(name, d, o, [&](std::size_t i) { return check_graded(d.chain, i, s); });
        } else if (name == "complete-set") {
            r = check_complete_set(d.chain, s);
        } else if (name == "keys") {
            r = check_keys(d.chain, s);
        } else {
            r = check_correspondence(d.chain, s);
        }
    }
    return {to_json(r), r.pass() ? kOk : kCheckFailed};
}

Json error_json(const Error& e) {
    Json err{{"kind", to_string(e.kind())}, {"message", e.what()}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        err["line"] = pe->line();
        err["column"] = pe->column();
    }
    return err;
}

int exit_for(const Error& e) { return e.kind() == ErrorKind::NotStabilized ? kNotStabilized : kUsage; }

void emit(std::ostream& out, const Json& body, const std::string& mode) {
    Json doc{{"schemaVersion", kSchemaVersion}};
    for (const auto& [k, v] : body.items())
        if (k != "schemaVersion") doc[k] = v;
    out << (mode == "pretty" ? doc.dump(2) : doc.dump()) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Exact valuations on K[x]: evaluation, key polynomials, graded algebras, families.", "valkey"};
    app.require_subcommand(1);
    app.add_option("--output", o.output, "json (one line) or pretty (indented)")
        ->check(CLI::IsMember({"json", "pretty"}));

    auto descriptor = [&](CLI::App* c, bool required = true) {
        auto* opt = c->add_option("-d,--descriptor", o.descriptor, "descriptor JSON file, or inline JSON");
        if (required) opt->required();
    };
    auto poly = [&](CLI::App* c, const char* help = "polynomial") {
        c->add_option("-f,--poly", o.poly, help)->required();
    };
    auto step = [&](CLI::App* c, const char* help = "chain step index") { c->add_option("-i,--step", o.step, help); };
    auto sampling = [&](CLI::App* c) {
        c->add_option("--degree", o.degree, "degree bound for random draws")->capture_default_str();
        c->add_option("--height", o.height, "height bound for random draws")->capture_default_str();
        c->add_option("--trials", o.trials, "number of random trials")->capture_default_str();
        c->add_option("--seed", o.seed, "random seed")->capture_default_str();
    };
    std::map<CLI::App*, std::function<Outcome(const Options&)>> handlers;

    auto* c = app.add_subcommand("eval", "value of a polynomial");
    descriptor(c), poly(c), handlers[c] = cmd_eval;

    c = app.add_subcommand("expand", "q-adic expansion of a polynomial");
    descriptor(c, false), poly(c);
    c->add_option("-q,--base", o.base, "expansion base q")->required();
    c->add_option("--ground", o.ground, "padic:P, tadic:Q or tadic:P when no descriptor is given")
        ->capture_default_str();
    handlers[c] = cmd_expand;

    c = app.add_subcommand("epsilon", "the epsilon invariant of a polynomial");
    descriptor(c), poly(c), handlers[c] = cmd_epsilon;

    c = app.add_subcommand("alpha", "alpha of a chain key");
    descriptor(c), step(c), handlers[c] = cmd_alpha;

    c = app.add_subcommand("psi", "membership of a candidate in Psi of a chain key");
    descriptor(c), step(c), poly(c, "candidate polynomial"), handlers[c] = cmd_psi;

    c = app.add_subcommand("check-key", "abstract key polynomial verdict for one or every chain step");
    descriptor(c), step(c), handlers[c] = cmd_check_key;

    c = app.add_subcommand("compare-keys", "degree, epsilon and truncation relations between two keys");
    descriptor(c), poly(c, "first key");
    c->add_option("-g,--other", o.other, "second key")->required();
    handlers[c] = cmd_compare_keys;

    c = app.add_subcommand("initial-form", "initial form in the graded algebra of a truncation");
    descriptor(c), poly(c), step(c, "take the key from this chain step");
    c->add_option("-q,--base", o.base, "key polynomial Q");
    handlers[c] = cmd_initial_form;

    c = app.add_subcommand("equivalent", "equivalence of two polynomials");
    descriptor(c), poly(c);
    c->add_option("-g,--other", o.other, "second polynomial")->required();
    handlers[c] = cmd_equivalent;

    c = app.add_subcommand("divides", "y | in(f), or in(Q') | in(f) when --base gives Q'");
    descriptor(c), poly(c), step(c);
    c->add_option("-q,--base", o.base, "Q' in Psi of the step key");
    handlers[c] = cmd_divides;

    c = app.add_subcommand("family", "continued family prefixes");
    c->add_option("op", o.family_op, "stabilize, classify or limit-check")
        ->required()
        ->check(CLI::IsMember({"stabilize", "classify", "limit-check"}));
    c->add_option("-p,--prefix", o.prefix, "prefix JSON file, or inline JSON")->required();
    poly(c, "polynomial (the candidate limit key for limit-check)");
    c->add_option("--gamma", o.gamma, "limit value for limit-check (default inf)");
    c->add_option("--height", o.height, "grid level of the lower-degree sample")->capture_default_str();
    handlers[c] = cmd_family;

    c = app.add_subcommand("check", "run a property suite");
    c->add_option("suite", o.suite, "suite name")
        ->required()
        ->check(CLI::IsMember({"axioms", "theorem1", "lemma23", "graded", "complete-set", "mlv-key", "keys",
                               "correspondence", "stabilization"}));
    descriptor(c, false), step(c, "restrict lemma23 or graded to one step"), sampling(c);
    c->add_option("-q,--base", o.base, "key for theorem1 and mlv-key");
    c->add_option("--gamma", o.gamma, "value for theorem1");
    c->add_option("-p,--prefix", o.prefix, "prefix for stabilization");
    c->add_option("--short", o.short_length, "early-stop length for stabilization")->capture_default_str();
    handlers[c] = cmd_check;

    c = app.add_subcommand("version", "print the version");
    handlers[c] = [](const Options&) { return Outcome{{{"version", VALKEY_VERSION}}}; };

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "valkey: " << e.what() << '\n';
        emit(out, {{"error", {{"kind", "Usage"}, {"message", e.what()}}}}, o.output);
        return kUsage;
    }
    if (const char* env = std::getenv("VALKEY_OUTPUT"); env && *env) {
        std::string mode = env;
        if (mode != "json" && mode != "pretty") {
            err << "valkey: VALKEY_OUTPUT must be json or pretty\n";
            emit(out, {{"error", {{"kind", "Usage"}, {"message", "VALKEY_OUTPUT must be json or pretty"}}}}, "json");
            return kUsage;
        }
        o.output = mode;
    }

    CLI::App* chosen = app.get_subcommands().front();
    try {
        Outcome r = handlers.at(chosen)(o);
        emit(out, r.body, o.output);
        return r.code;
    } catch (const Error& e) {
        err << "valkey: " << to_string(e.kind()) << ": " << e.what() << '\n';
        emit(out, {{"error", error_json(e)}}, o.output);
        return exit_for(e);
    }
}

}  // namespace valkey::cli
