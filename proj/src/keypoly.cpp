#include "valkey/keypoly.hpp"

#include "valkey/error.hpp"
#include "valkey/family.hpp"

namespace valkey {

EpsilonReport epsilon(const Valuation& v, const Poly& f) {
    if (f.degree() < 1)
        throw Error(ErrorKind::UndefinedEpsilon, "epsilon needs a polynomial of degree >= 1, got " + f.to_string());
    Value vf = eval(v, f);
    EpsilonReport r{Value::infinity(), {}};
    bool have = false;
    for (int k = 1; k <= f.degree(); ++k) {
        Poly d = hasse_derivative(f, k);
        if (d.is_zero()) continue;
        if (vf.is_infinite()) {
            r.argmax.push_back(k);
            continue;
        }
        Value vd = eval(v, d);
        if (vd.is_infinite()) continue;
        Value e = (vf - vd).scale(Rational(1, k));
        if (!have || e > r.epsilon) {
            r.epsilon = e;
            r.argmax = {k};
            have = true;
        } else if (e == r.epsilon) {
            r.argmax.push_back(k);
        }
    }
    return r;
}

std::optional<int> alpha(const MacLaneChain& chain, std::size_t i) {
    Valuation trunc = chain.truncation_at(i);
    for (std::size_t j = i + 1; j < chain.size(); ++j) {
        const Poly& later = chain.key(j);
        if (eval(trunc, later) < eval(chain.top(), later)) return later.degree();
    }
    return std::nullopt;
}

bool psi_member(const MacLaneChain& chain, std::size_t i, const Poly& candidate) {
    std::optional<int> a = alpha(chain, i);
    if (!a) throw Error(ErrorKind::PsiEmpty, "Psi of step " + std::to_string(i) + " is empty: no later key drops");
    if (!candidate.is_monic() || candidate.degree() != *a) return false;
    return eval(chain.truncation_at(i), candidate) < eval(chain.top(), candidate);
}

const char* to_string(KeyVerdict::Kind k) {
    switch (k) {
        case KeyVerdict::Kind::OrdinaryKey: return "OrdinaryKey";
        case KeyVerdict::Kind::LimitKey: return "LimitKey";
        case KeyVerdict::Kind::Unverified: return "Unverified";
    }
    return "?";
}

KeyVerdict abstract_key_check(const MacLaneChain& chain, std::size_t i) {
    KeyVerdict out;
    if (i == 0) {
        chain.key(0);
        out.kind = KeyVerdict::Kind::OrdinaryKey;
        out.reason = "monic of degree 1";
        return out;
    }
    const Poly& key = chain.key(i);
    if (!chain.is_limit_step(i)) {
        try {
            if (psi_member(chain, i - 1, key)) {
                out.kind = KeyVerdict::Kind::OrdinaryKey;
                out.witness = i - 1;
                out.reason = "in Psi of step " + std::to_string(i - 1);
            } else {
                out.reason = "not in Psi of step " + std::to_string(i - 1);
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::PsiEmpty) throw;
            out.reason = e.what();
        }
        return out;
    }

    const Valuation& step = chain.valuation(i);
    const FamilyPrefix& prefix = step.prefix();
    LimitKeyEvidence ev;
    ev.degree_matches = prefix.degree() == chain.key(i - 1).degree();
    ev.gammas_increasing = true;  // enforced by FamilyPrefix itself
    ev.below_limit_value = true;
    for (std::size_t a = 0; a < prefix.size(); ++a) {
        Value v = eval(prefix.member(a), key);
        ev.member_values.push_back(v);
        if (!(v < step.gamma())) ev.below_limit_value = false;
    }
    ev.values_increasing = !stabilize(prefix, key).stabilized();
    bool ok = ev.degree_matches && ev.gammas_increasing && ev.below_limit_value && ev.values_increasing;
    out.kind = ok ? KeyVerdict::Kind::LimitKey : KeyVerdict::Kind::Unverified;
    out.reason = ok ? "limit key evidence holds through the prefix (unboundedness presumed)"
                    : "limit key evidence fails on the prefix";
    out.evidence = std::move(ev);
    return out;
}

KeyComparison compare_keys(const Valuation& v, const Poly& q, const Poly& qp) {
    if (!q.is_monic() || !qp.is_monic())
        throw Error(ErrorKind::Precondition, "compare_keys needs monic polynomials");
    auto side = [&](const Poly& a, const Poly& b) {
        return KeyComparison::Side{a, a.degree(), epsilon(v, a).epsilon, eval(v, a), eval(Valuation::truncation(v, a), b)};
    };
    KeyComparison r{side(q, qp), side(qp, q), {}, true};

    auto add = [&](std::string name, bool applicable, bool holds) {
        r.checks.push_back({std::move(name), applicable, applicable ? holds : true});
        if (applicable && !holds) r.pass = false;
    };
    auto directed = [&](const KeyComparison::Side& a, const KeyComparison::Side& b, const std::string& tag) {
        add("deg " + tag + " => eps " + tag, a.degree < b.degree, a.epsilon < b.epsilon);
        add("eps " + tag + " => truncation drops " + tag, a.epsilon < b.epsilon, a.truncated_other < b.value);
        if (a.degree == b.degree) {
            bool by_value = a.value < b.value;
            bool by_drop = a.truncated_other < b.value;
            bool by_eps = a.epsilon < b.epsilon;
            add("equal degree: value " + tag + " <=> truncation drops " + tag, true, by_value == by_drop);
            add("equal degree: truncation drops " + tag + " <=> eps " + tag, true, by_drop == by_eps);
        }
    };
    directed(r.q, r.qp, "Q < Q'");
    directed(r.qp, r.q, "Q' < Q");
    return r;
}

}  // namespace valkey
