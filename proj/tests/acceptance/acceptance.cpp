// Acceptance suite: one PASS/FAIL line per criterion, exact comparisons only.
// Usage: valkey_acceptance [criterion...]   (default: all of 1-8)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "valkey/family.hpp"
#include "valkey/harness.hpp"
#include "valkey/json_io.hpp"
#include "valkey/keypoly.hpp"
#include "valkey/text.hpp"
#include "valkey/valuation.hpp"

using namespace valkey;
using Clock = std::chrono::steady_clock;

namespace {

const GroundField kT = GroundField::tadic_rationals();
const GroundField kF2 = GroundField::padic(2);
const GroundField kG2 = GroundField::tadic_prime(2);
const GroundField kF3 = GroundField::padic(3);
const GroundField kF7 = GroundField::padic(7);

Poly P(const GroundField& f, const std::string& s) { return parse_poly(f, s); }

struct NamedChain {
    std::string name;
    MacLaneChain chain;
};

std::vector<NamedChain> chains() {
    return {
        {"C1 TAdic(Q)", MacLaneChain(kT, 1).augmented(P(kT, "x - t"), 3).augmented(P(kT, "(x - t)^2 + t^6"), 7)},
        {"C2 PAdic(2)", MacLaneChain(kF2, Value(1, 2))
                            .augmented(P(kF2, "x^2 - 2"), Value(3, 2))
                            .augmented(P(kF2, "(x^2 - 2)^2 + 2*x*(x^2 - 2) + 8"), Value(7, 2))},
        {"C3 TAdic(GF(2))", MacLaneChain(kG2, Value(1, 2))
                                .augmented(P(kG2, "x^2 + t"), Value(3, 2))
                                .augmented(P(kG2, "(x^2 + t)^2 + t*x*(x^2 + t) + t^3"), Value(7, 2))},
        {"C4 PAdic(3)", MacLaneChain(kF3, 0).augmented(P(kF3, "x - 1"), 1).augmented(P(kF3, "x - 4"), 2)},
    };
}

struct Family {
    std::string name;
    FamilyPrefix prefix;
    Poly limit_key;
};

/// Q_n = base - t - ... - t^n with value n + 1.
FamilyPrefix geometric(const GroundField& f, const std::string& base, const Value& gamma0) {
    std::vector<PrefixMember> m;
    std::string s = base;
    for (int n = 1; n <= 10; ++n) {
        s += " - t^" + std::to_string(n);
        m.push_back({P(f, s), Value(n + 1)});
    }
    return FamilyPrefix(Valuation::monomial(f, gamma0), m);
}

std::vector<Family> families() {
    // Successive 7-adic approximations of a square root of 2.
    const std::vector<long> a{3, 10, 108, 2166, 4567, 38181, 155830, 1802916, 24862120, 266983762};
    std::vector<PrefixMember> m;
    for (int n = 1; n <= 10; ++n) m.push_back({P(kF7, "x - " + std::to_string(a[n - 1])), Value(n)});
    return {
        {"P1 PAdic(7) x - a_n", FamilyPrefix(Valuation::monomial(kF7, 0), m), P(kF7, "x^2 - 2")},
        {"P2 TAdic(Q) x - t - ... - t^n", geometric(kT, "x", 1), P(kT, "x - t/(1 - t)")},
        {"P3 TAdic(GF(2)) x - t - ... - t^n", geometric(kG2, "x", 1), P(kG2, "x - t/(1 - t)")},
        {"P4 TAdic(Q) x^2 - t - ... - t^n", geometric(kT, "x^2", Value(1, 2)), P(kT, "x^2 - t/(1 - t)")},
    };
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> detail;

    void require(bool holds, const std::string& what) {
        detail.push_back(std::string(holds ? "  ok   " : "  FAIL ") + what);
        pass = pass && holds;
    }
    void suite(const SuiteReport& r, const std::string& what, bool expect_pass = true) {
        std::ostringstream os;
        os << what << ": " << r.suite << " checks=" << r.checks << " failures=" << r.failure_count
           << " skipped=" << r.skipped;
        require(r.pass() == expect_pass, os.str());
        if (!r.pass() && expect_pass && !r.failures.empty()) {
            const Failure& f = r.failures.front();
            detail.push_back("       first failure " + f.relation + ": " + f.lhs + " vs " + f.rhs);
        }
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1fs", s);
    return buf;
}

Outcome criterion1() {
    Outcome o;
    auto t0 = Clock::now();
    Valuation nu = Valuation::monomial(kT, 1);
    Poly q1 = P(kT, "x - t"), q2 = P(kT, "x - t - t^2");
    Valuation nu1 = Valuation::augmented(nu, q1, 3);
    Valuation nu2 = Valuation::augmented(nu, q2, 4);
    o.require(eval(nu2, q1) == Value(2), "eval(nu2, Q1) = " + eval(nu2, q1).to_string() + ", expected 2");
    o.require(eval(nu1, q1) == Value(3), "eval(nu1, Q1) = " + eval(nu1, q1).to_string() + ", expected 3");
    o.require(eval(nu, q2 - q1) == Value(2), "eval(nu, Q2 - Q1) = " + eval(nu, q2 - q1).to_string() + ", expected 2");
    o.require(!leq_same_degree(nu, q1, 3, q2, 4), "leq_same_degree(nu, Q1, 3, Q2, 4) is false");
    double t = seconds_since(t0);
    o.require(t < 1.0, "elapsed " + fmt_seconds(t) + " < 1s");
    return o;
}

Outcome criterion2() {
    Outcome o;
    auto t0 = Clock::now();
    const Sampler s{6, 8, 10000, 11};
    for (const auto& [name, ch] : chains()) {
        o.suite(check_axioms(ch.valuation(0), s), name + " monomial");
        o.suite(check_axioms(ch.top(), s), name + " augmented");
        o.suite(check_axioms(ch.truncation_at(1), s), name + " truncation");
    }
    double t = seconds_since(t0);
    o.require(t < 120.0, "elapsed " + fmt_seconds(t) + " < 120s");
    return o;
}

Outcome criterion3() {
    Outcome o;
    const Sampler s{6, 8, 1000, 13};
    auto cs = chains();
    struct Config {
        std::string name;
        Valuation base;
        Poly q;
        Value gamma;
    };
    std::vector<Config> good{
        {"TAdic(Q) constants, q = x", Valuation::monomial(kT, 0), P(kT, "x"), 5},
        {"C1 truncation at x - t, q = x - t", cs[0].chain.truncation_at(1), P(kT, "x - t"), 3},
        {"C1 step 1, q = (x - t)^2 + t^6", cs[0].chain.valuation(1), cs[0].chain.key(2), 7},
        {"C2 monomial, q = x^2 - 2", cs[1].chain.valuation(0), cs[1].chain.key(1), Value(3, 2)},
        {"C3 monomial, q = x^2 + t", cs[2].chain.valuation(0), cs[2].chain.key(1), Value(3, 2)},
        {"C4 step 1, q = x - 4", cs[3].chain.valuation(1), cs[3].chain.key(2), 2},
    };
    for (const auto& c : good) {
        auto r = check_theorem1(c.base, c.q, c.gamma, s);
        o.require(r.hypotheses_hold, c.name + ": hypotheses hold on every sample (witnesses=" +
                                         std::to_string(r.witness_count) + ")");
        o.suite(r, c.name);
    }
    auto bad = check_theorem1(Valuation::monomial(kT, 1), P(kT, "x^2"), 3, s);
    o.require(!bad.hypotheses_hold && bad.witness_count > 0,
              "TAdic(Q) [x -> 1], q = x^2: violation witnessed (witnesses=" + std::to_string(bad.witness_count) + ")");
    if (!bad.witnesses.empty()) {
        const Failure& w = bad.witnesses.front();
        o.detail.push_back("       witness " + w.relation + ": " + w.lhs + " vs " + w.rhs);
    }
    return o;
}

Outcome criterion4() {
    Outcome o;
    for (const auto& [name, ch] : chains()) o.suite(check_correspondence(ch, Sampler{4, 3, 1000, 5}), name);
    return o;
}

Outcome criterion5() {
    Outcome o;
    const Sampler s{6, 8, 1000, 7};
    for (const auto& [name, ch] : chains())
        for (std::size_t i = 0; i < ch.size(); ++i) o.suite(check_graded(ch, i, s), name + " step " + std::to_string(i));
    return o;
}

Outcome criterion6() {
    Outcome o;
    const Sampler s{6, 8, 10000, 17};
    for (const auto& [name, ch] : chains()) {
        o.suite(check_keys(ch, s), name);
        for (std::size_t i = 0; i < ch.size(); ++i) o.suite(check_lemma23(ch, i, s), name + " step " + std::to_string(i));
        o.suite(check_complete_set(ch, s), name);
    }
    return o;
}

Outcome criterion7() {
    Outcome o;
    for (const auto& [name, prefix, key] : families()) {
        o.require(prefix.size() == 10, name + ": length-10 extension");
        o.suite(check_stabilization(prefix, 5, Sampler{3, 2, 1000, 3}), name + " first 5 vs 10");
        auto lc = limit_check(prefix, key, Value(1000), enumerate_polys(prefix.field(), key.degree() - 1, 2));
        o.require(lc.pass, name + ": limit key " + key.to_string() + " passes the limit check");
    }
    return o;
}

Outcome criterion8() {
    Outcome o;
    auto cs = chains();
    auto fams = families();
    const Sampler s{3, 3, 300, 23};
    std::vector<std::pair<std::string, std::function<SuiteReport()>>> runs{
        {"axioms C2 top", [&] { return check_axioms(cs[1].chain.top(), s); }},
        {"axioms non-key truncation",
         [&] { return check_axioms(Valuation::truncation(cs[0].chain.valuation(1), P(kT, "x^2")), s); }},
        {"theorem1 violated", [&] { return check_theorem1(Valuation::monomial(kT, 1), P(kT, "x^2"), 3, s); }},
        {"lemma23 C3 step 2", [&] { return check_lemma23(cs[2].chain, 2, s); }},
        {"graded C4 step 1", [&] { return check_graded(cs[3].chain, 1, s); }},
        {"complete-set C1", [&] { return check_complete_set(cs[0].chain, s); }},
        {"keys C2", [&] { return check_keys(cs[1].chain, s); }},
        {"mlv-key C1", [&] { return check_mlv_key(cs[0].chain.valuation(1), P(kT, "(x - t)*(x - 2*t)"), s); }},
        {"correspondence C4", [&] { return check_correspondence(cs[3].chain, s); }},
        {"stabilization P1", [&] { return check_stabilization(fams[0].prefix, 5, Sampler{2, 2, 300, 23}); }},
    };
    for (const auto& [name, run] : runs) {
        std::string a = dump(to_json(run())), b = dump(to_json(run()));
        o.require(a == b, name + ": byte-identical JSON (" + std::to_string(a.size()) + " bytes)");
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"exact reproduction of the worked example", criterion1},
        {"valuation axioms on all descriptor classes and fields", criterion2},
        {"min-formula extension criterion", criterion3},
        {"truncation/augmentation correspondence", criterion4},
        {"graded algebra suite", criterion5},
        {"key polynomial suite", criterion6},
        {"family stabilization and limit keys", criterion7},
        {"deterministic report JSON", criterion8},
    };
    std::set<int> wanted;
    for (int k = 1; k < argc; ++k) wanted.insert(std::atoi(argv[k]));

    bool all = true;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        int number = static_cast<int>(c) + 1;
        if (!wanted.empty() && !wanted.count(number)) continue;
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[c].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("unexpected error: ") + e.what());
        }
        for (const auto& line : o.detail) std::cout << line << "\n";
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << number << ": " << criteria[c].first << " ("
                  << fmt_seconds(seconds_since(t0)) << ")\n"
                  << std::flush;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
