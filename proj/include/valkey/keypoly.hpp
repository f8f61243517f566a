#pragma once

#include <optional>
#include <string>
#include <vector>

#include "valkey/valuation.hpp"

namespace valkey {

struct EpsilonReport {
    Value epsilon;
    std::vector<int> argmax;  // every k attaining the maximum, ascending
};

/// ε(f) = max over k >= 1 with ∂_k f != 0 of (v(f) - v(∂_k f)) / k.
/// ε = ∞ when v(f) = ∞. Throws UndefinedEpsilon for constants.
EpsilonReport epsilon(const Valuation& v, const Poly& f);

/// α of the key at step i, relative to the chain: the degree of the first
/// later key on which the truncation at step i falls below the top
/// valuation. nullopt means no later key drops (α = ∞ as far as the chain
/// can tell).
std::optional<int> alpha(const MacLaneChain& chain, std::size_t i);

/// candidate ∈ Ψ(key(i)): monic, of degree α, and truncated value strictly
/// below the top value. Throws PsiEmpty when α = ∞.
bool psi_member(const MacLaneChain& chain, std::size_t i, const Poly& candidate);

struct LimitKeyEvidence {
    bool degree_matches = false;      // the family degree equals the previous key's degree
    bool gammas_increasing = false;   // presumed unbounded: only a finite prefix is seen
    bool below_limit_value = false;   // ν_α(Q) < γ at every member
    bool values_increasing = false;   // Q presumed in Φ̄: strictly increasing through the prefix
    std::vector<Value> member_values; // ν_α(Q) per member
};

struct KeyVerdict {
    enum class Kind { OrdinaryKey, LimitKey, Unverified };
    Kind kind = Kind::Unverified;
    std::optional<std::size_t> witness;  // step whose Ψ contains this key
    std::optional<LimitKeyEvidence> evidence;
    std::string reason;
};

const char* to_string(KeyVerdict::Kind k);

KeyVerdict abstract_key_check(const MacLaneChain& chain, std::size_t i);

struct KeyComparison {
    struct Side {
        Poly key;
        int degree;
        Value epsilon;
        Value value;            // ν(key)
        Value truncated_other;  // ν_key(other key)
    };
    struct Check {
        std::string name;
        bool applicable;
        bool holds;
    };
    Side q, qp;
    std::vector<Check> checks;
    bool pass = true;
};

/// The degree/ε/truncation relations between two keys of the same
/// valuation, checked in both directions.
KeyComparison compare_keys(const Valuation& v, const Poly& q, const Poly& qp);

}  // namespace valkey
