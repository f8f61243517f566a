#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "valkey/poly.hpp"

namespace valkey {

class FamilyPrefix;
struct PrefixMember;

/// Immutable description of a valuation on K[x] as a construction tree:
///
///   Monomial        ν_γ = [ν₀; x ↦ γ]
///   Augmented       [base; Q ↦ γ]
///   Truncation      ν_Q relative to an ambient valuation
///   LimitAugmented  [ν_F; Q ↦ γ] over a finite family prefix F
///
/// Every variant is evaluated by the same q-expansion min formula
/// (see eval()). Copies share the tree.
class Valuation {
public:
    enum class Kind { Monomial, Augmented, Truncation, LimitAugmented };

    static Valuation monomial(const GroundField& field, const Value& gamma);
    /// Checks that Q is monic of degree >= 1, gamma > base(Q), and that deg Q
    /// does not drop below the base key's degree.
    static Valuation augmented(const Valuation& base, const Poly& key, const Value& gamma);
    /// The bare min-formula extension μ' of `base` along a monic `key`, with
    /// no admissibility requirement on gamma. Used to test criteria for μ' to
    /// be a valuation; prefer augmented() everywhere else.
    static Valuation extension(const Valuation& base, const Poly& key, const Value& gamma);
    /// Any monic Q is accepted; the axioms only hold when Q is a key polynomial.
    static Valuation truncation(const Valuation& ambient, const Poly& key);
    /// Checks deg Q >= the prefix degree and gamma > ν_α(Q) for every member.
    static Valuation limit_augmented(std::shared_ptr<const FamilyPrefix> prefix, const Poly& key,
                                     const Value& gamma);

    Kind kind() const;
    const GroundField& field() const;
    /// Base (Augmented) or ambient (Truncation); throws for the other kinds.
    const Valuation& base() const;
    const FamilyPrefix& prefix() const;
    /// Q for every kind; x for Monomial.
    const Poly& key() const;
    /// γ as stored; for Truncation this is the ambient value of Q.
    const Value& gamma() const;
    /// Number of construction nodes from this one down to the monomial root.
    std::size_t depth() const;

    Value operator()(const Poly& f) const;

    std::string describe() const;

private:
    struct Node;
    explicit Valuation(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

/// The value of f. eval(v, 0) = ∞ and eval(v, 1) = 0. LimitAugmented
/// descriptors throw NotStabilized when a Q-expansion coefficient of f does
/// not stabilize inside the prefix; mismatched fields throw FieldMismatch.
Value eval(const Valuation& v, const Poly& f);

GroundField restrict_to_ground(const Valuation& v);
/// Q of an Augmented, Truncation or LimitAugmented descriptor.
Poly key_of(const Valuation& v);
/// γ of an Augmented or LimitAugmented descriptor; eval(ambient, Q) for a Truncation.
Value gamma_of(const Valuation& v);

/// Decides [ν; Q1 ↦ γ1] ≤ [ν; Q2 ↦ γ2] for monic keys of equal degree with
/// γ1 < γ2: the order holds iff γ1 ≤ [ν; Q2 ↦ γ2](Q1).
bool leq_same_degree(const Valuation& nu, const Poly& q1, const Value& gamma1, const Poly& q2,
                     const Value& gamma2);

/// Outcome of comparing ν₁ = [ν; Q₁ ↦ γ₁] with ν₂ = [ν₁; Q₂ ↦ γ₂] for
/// equal-degree keys. When Q₁ ~ Q₂ under ν₁, or ν(Q₂ − Q₁) < γ₁ (so Q₂ cannot
/// be a key polynomial for ν₁), the predicted equalities are not expected and
/// the status is HypothesisViolated instead of Fail.
struct SameDegreeReport {
    enum class Status { Pass, Fail, HypothesisViolated };

    Value gamma1, gamma2;
    Value nu2_of_q1;   // ν₂(Q₁)
    Value nu1_of_q2;   // ν₁(Q₂)
    Value nu_of_diff;  // ν(Q₂ − Q₁)
    Value nu_of_q1, nu_of_q2;

    bool not_equivalent = false;   // Q₁ ≁ Q₂ under ν₁
    bool remainder_bound = false;  // ν(Q₂ − Q₁) ≥ γ₁

    struct Check {
        std::string name;
        bool holds;
    };
    std::vector<Check> checks;  // γ₂ > γ₁ and the three equalities with γ₁
    bool equal_base_values = false;  // ν(Q₂) = ν(Q₁), asserted independently
    Status status = Status::Fail;
};

SameDegreeReport check_same_degree_comparison(const Valuation& nu, const Poly& q1, const Value& gamma1,
                                              const Poly& q2, const Value& gamma2);

const char* to_string(SameDegreeReport::Status s);

/// A monomial valuation followed by augmentation and limit-augmentation
/// steps. Step 0 is the monomial root with key x; step i > 0 augments the
/// valuation of step i-1. Only the last step may carry γ = ∞.
class MacLaneChain {
public:
    MacLaneChain(const GroundField& field, const Value& gamma0);

    MacLaneChain augmented(const Poly& key, const Value& gamma) const;
    /// Appends a limit step over the family {[top; Q_α ↦ γ_α]}.
    MacLaneChain limit(std::vector<PrefixMember> members, const Poly& key, const Value& gamma) const;

    std::size_t size() const { return steps_.size(); }
    const GroundField& field() const { return steps_.front().field(); }
    const Poly& key(std::size_t i) const { return at(i).key(); }
    Value gamma(std::size_t i) const { return at(i).gamma(); }
    /// The valuation after step i.
    const Valuation& valuation(std::size_t i) const { return at(i); }
    const Valuation& top() const { return steps_.back(); }
    bool is_limit_step(std::size_t i) const { return at(i).kind() == Valuation::Kind::LimitAugmented; }

    /// ν_Q for Q = key(i), truncating the chain's top valuation.
    Valuation truncation_at(std::size_t i) const { return Valuation::truncation(top(), key(i)); }

private:
    const Valuation& at(std::size_t i) const;
    explicit MacLaneChain(std::vector<Valuation> steps) : steps_(std::move(steps)) {}

    std::vector<Valuation> steps_;
};

}  // namespace valkey
