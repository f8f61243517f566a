#pragma once

#include <optional>
#include <string>
#include <vector>

#include "valkey/harness.hpp"
#include "valkey/valuation.hpp"

namespace valkey {

struct PrefixMember {
    Poly key;
    Value gamma;
};

/// A finite prefix of a continued family ν_α = [ν; Q_α ↦ γ_α]. The keys
/// share one degree d, the γ_α strictly increase, every member is an
/// admissible augmentation of the base, and consecutive members satisfy
/// ν_α <= ν_β (checked with leq_same_degree). At least two members.
class FamilyPrefix {
public:
    FamilyPrefix(Valuation base, std::vector<PrefixMember> members);

    const Valuation& base() const { return base_; }
    const std::vector<PrefixMember>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    int degree() const { return members_.front().key.degree(); }
    const GroundField& field() const { return base_.field(); }
    /// ν_α for the member at list position a.
    const Valuation& member(std::size_t a) const;

    /// The first n members as a prefix of their own.
    FamilyPrefix truncated(std::size_t n) const;

private:
    Valuation base_;
    std::vector<PrefixMember> members_;
    std::vector<Valuation> valuations_;
};

struct StabilizationResult {
    enum class Outcome { Stabilized, IncreasingThroughPrefix };

    Outcome outcome;
    Value value;                 // the stable value, when stabilized
    std::size_t first_index = 0; // first member agreeing with its predecessor
    std::vector<Value> values;   // ν_α(f) as far as it was evaluated

    bool stabilized() const { return outcome == Outcome::Stabilized; }
};

/// Evaluates ν_α(f) along the prefix and stops at the first pair of
/// consecutive members that agree.
StabilizationResult stabilize(const FamilyPrefix& prefix, const Poly& f);

/// ν_F(f). Throws NotStabilized when f keeps increasing through the prefix.
Value nu_F(const FamilyPrefix& prefix, const Poly& f);

struct Classification {
    enum class Kind { PresumedUnbounded, Stable };

    Kind kind;
    std::size_t alpha_index = 0;  // a member from which the value is constant
    Value value;
    std::vector<Value> values;
};

const char* to_string(Classification::Kind k);

/// Stable(α, value) when f stabilizes; PresumedUnbounded when it increases
/// through the whole prefix (evidence only).
Classification classify(const FamilyPrefix& prefix, const Poly& f);

struct LimitCheckReport {
    bool degree_ok = false;         // deg Q >= d
    bool increasing = false;        // Q presumed unbounded along the prefix
    std::vector<Value> values;      // ν_α(Q)
    bool minimal_degree = true;     // no lower-degree sample is presumed unbounded
    std::optional<Poly> lower_degree_witness;
    std::size_t sampled = 0;
    bool gamma_admissible = false;  // γ > ν_α(Q) for every member
    bool pass = false;
};

/// Prefix evidence that Q is a limit key for the family, with limit value γ.
/// `sample` supplies candidate polynomials for the degree-minimality check.
LimitCheckReport limit_check(const FamilyPrefix& prefix, const Poly& q, const Value& gamma,
                             const std::vector<Poly>& sample = {});

/// Compares the two descriptions of the truncation at the key of step i + 1:
/// directly, and as an augmentation (ordinary step) or limit augmentation
/// (limit step) of the truncation at step i. Sampled with `s`; for ordinary
/// steps the MLV key suite for Q' over ν_Q is folded into the report.
/// Throws IndexOutOfRange when step i has no successor.
SuiteReport mlv_correspondence(const MacLaneChain& chain, std::size_t i, const Sampler& s);

}  // namespace valkey
