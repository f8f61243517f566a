#include "valkey/graded.hpp"

#include <map>

#include "valkey/error.hpp"
#include "valkey/keypoly.hpp"

namespace valkey {

std::vector<int> InitialForm::support() const {
    std::vector<int> s;
    s.reserve(terms.size());
    for (const auto& [i, _] : terms) s.push_back(i);
    return s;
}

InitialForm initial_form(const Valuation& ambient, const Poly& key, const Poly& f) {
    if (f.is_zero()) throw Error(ErrorKind::NoInitialForm, "the zero polynomial has no initial form");
    if (key.degree() < 1 || !key.is_monic())
        throw Error(ErrorKind::Precondition, "initial forms need a monic key of degree >= 1, got " + key.to_string());
    Value gamma = eval(ambient, key);
    QExpansion e = q_expansion(f, key);
    std::vector<Value> values(e.parts.size(), Value::infinity());
    Value best = Value::infinity();
    for (std::size_t i = 0; i < e.parts.size(); ++i) {
        if (e.parts[i].is_zero()) continue;
        values[i] = eval(ambient, e.parts[i]) + (i == 0 ? Value(0) : gamma.scale(Rational(static_cast<long>(i))));
        best = min(best, values[i]);
    }
    if (best.is_infinite())
        throw Error(ErrorKind::NoInitialForm, "f = " + f.to_string() + " has infinite truncated value");
    InitialForm form{key, best, {}};
    for (std::size_t i = 0; i < e.parts.size(); ++i)
        if (!e.parts[i].is_zero() && values[i] == best) form.terms.emplace_back(static_cast<int>(i), e.parts[i]);
    return form;
}

bool equivalent(const Valuation& v, const Poly& f, const Poly& g) {
    if (f == g) return true;
    Value a = eval(v, f);
    if (a.is_infinite() || a != eval(v, g)) return false;
    return eval(v, f - g) > a;
}

bool same_initial_form(const Valuation& ambient, const InitialForm& a, const InitialForm& b) {
    if (!(a.key == b.key) || a.value != b.value || a.terms.size() != b.terms.size()) return false;
    for (std::size_t k = 0; k < a.terms.size(); ++k) {
        if (a.terms[k].first != b.terms[k].first) return false;
        if (!equivalent(ambient, a.terms[k].second, b.terms[k].second)) return false;
    }
    return true;
}

bool y_divides(const Valuation& ambient, const Poly& key, const Poly& f) {
    InitialForm form = initial_form(ambient, key, f);
    return form.terms.front().first != 0;
}

bool inQprime_divides(const MacLaneChain& chain, std::size_t step, const Poly& qprime, const Poly& f) {
    if (!psi_member(chain, step, qprime))
        throw Error(ErrorKind::Precondition, qprime.to_string() + " is not in Psi of step " + std::to_string(step));
    return eval(chain.truncation_at(step), f) < eval(chain.top(), f);
}

InitialForm multiply_initial_forms(const Valuation& ambient, const Poly& key, const InitialForm& a, const InitialForm& b) {
    if (!(a.key == key) || !(b.key == key))
        throw Error(ErrorKind::Precondition, "initial forms taken with respect to different keys");
    Value gamma = eval(ambient, key);
    Value target = a.value + b.value;
    std::map<int, Poly> sums;
    for (const auto& [i, fi] : a.terms) {
        for (const auto& [j, gj] : b.terms) {
            Poly r = euclid_divide(fi * gj, key).remainder;
            auto [it, fresh] = sums.try_emplace(i + j, r);
            if (!fresh) it->second = it->second + r;
        }
    }
    InitialForm out{key, target, {}};
    for (auto& [k, s] : sums) {
        if (s.is_zero()) continue;
        Value v = eval(ambient, s) + (k == 0 ? Value(0) : gamma.scale(Rational(k)));
        if (v == target) out.terms.emplace_back(k, std::move(s));
    }
    return out;
}

}  // namespace valkey
