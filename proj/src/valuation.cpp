#include "valkey/valuation.hpp"

#include "valkey/error.hpp"
#include "valkey/family.hpp"
#include "valkey/graded.hpp"

namespace valkey {

struct Valuation::Node {
    Kind kind;
    GroundField field;
    Poly key;
    Value gamma;
    std::optional<Valuation> base;
    std::shared_ptr<const FamilyPrefix> prefix;
    std::size_t depth;
};

namespace {

void require_key_shape(const Poly& key, const char* what) {
    if (key.degree() < 1 || !key.is_monic())
        throw Error(ErrorKind::Precondition, std::string(what) + " key must be monic of degree >= 1, got " + key.to_string());
}

void require_field(const GroundField& field, const Poly& f) {
    if (!(field == f.field()))
        throw Error(ErrorKind::FieldMismatch,
                    "polynomial over " + f.field().to_string() + " evaluated by a valuation over " + field.to_string());
}

// min_i { inner(f_i) + i*gamma } over the key-expansion of f.
template <class Inner>
Value min_formula(const Poly& f, const Poly& key, const Value& gamma, Inner&& inner) {
    if (f.is_zero()) return Value::infinity();
    if (f.degree() < key.degree()) return inner(f);
    QExpansion e = q_expansion(f, key);
    Value best = Value::infinity();
    for (std::size_t i = 0; i < e.parts.size(); ++i) {
        const Poly& part = e.parts[i];
        if (part.is_zero()) continue;
        Value shift = i == 0 ? Value(0) : gamma.scale(Rational(static_cast<long>(i)));
        Value term = inner(part) + shift;
        if (term < best) best = term;
    }
    return best;
}

}  // namespace

Valuation Valuation::monomial(const GroundField& field, const Value& gamma) {
    if (gamma.is_infinite()) throw Error(ErrorKind::Precondition, "the monomial value of x must be finite");
    return Valuation(std::make_shared<const Node>(Node{Kind::Monomial, field, Poly::x(field), gamma, std::nullopt, nullptr, 1}));
}

Valuation Valuation::extension(const Valuation& base, const Poly& key, const Value& gamma) {
    require_field(base.field(), key);
    require_key_shape(key, "extension");
    return Valuation(std::make_shared<const Node>(
        Node{Kind::Augmented, base.field(), key, gamma, base, nullptr, base.depth() + 1}));
}

Valuation Valuation::augmented(const Valuation& base, const Poly& key, const Value& gamma) {
    require_field(base.field(), key);
    require_key_shape(key, "augmentation");
    if ((base.kind() == Kind::Monomial || base.kind() == Kind::Augmented) && key.degree() < base.key().degree())
        throw Error(ErrorKind::Precondition, "augmentation key " + key.to_string() + " has smaller degree than the base key " +
                                                 base.key().to_string());
    if (base.kind() != Kind::Truncation && base.gamma().is_infinite())
        throw Error(ErrorKind::Precondition, "cannot augment a valuation whose last value is infinite");
    Value current = eval(base, key);
    if (!(gamma > current))
        throw Error(ErrorKind::Precondition, "augmentation value " + gamma.to_string() + " must exceed " + current.to_string() +
                                                 ", the base value of " + key.to_string());
    return extension(base, key, gamma);
}

Valuation Valuation::truncation(const Valuation& ambient, const Poly& key) {
    require_field(ambient.field(), key);
    require_key_shape(key, "truncation");
    Value g = eval(ambient, key);
    return Valuation(std::make_shared<const Node>(
        Node{Kind::Truncation, ambient.field(), key, g, ambient, nullptr, ambient.depth() + 1}));
}

Valuation Valuation::limit_augmented(std::shared_ptr<const FamilyPrefix> prefix, const Poly& key, const Value& gamma) {
    if (!prefix) throw Error(ErrorKind::Precondition, "limit augmentation needs a family prefix");
    require_field(prefix->field(), key);
    require_key_shape(key, "limit augmentation");
    if (key.degree() < prefix->degree())
        throw Error(ErrorKind::Precondition, "limit key " + key.to_string() + " has degree below the family degree " +
                                                 std::to_string(prefix->degree()));
    for (std::size_t a = 0; a < prefix->size(); ++a) {
        Value v = eval(prefix->member(a), key);
        if (!(gamma > v))
            throw Error(ErrorKind::Precondition, "limit value " + gamma.to_string() + " must exceed " + v.to_string() +
                                                     ", the value of the limit key at member " + std::to_string(a));
    }
    std::size_t depth = prefix->base().depth() + 2;
    GroundField field = prefix->field();
    return Valuation(std::make_shared<const Node>(
        Node{Kind::LimitAugmented, field, key, gamma, std::nullopt, std::move(prefix), depth}));
}

Valuation::Kind Valuation::kind() const { return node_->kind; }
const GroundField& Valuation::field() const { return node_->field; }
const Poly& Valuation::key() const { return node_->key; }
const Value& Valuation::gamma() const { return node_->gamma; }
std::size_t Valuation::depth() const { return node_->depth; }

const Valuation& Valuation::base() const {
    if (!node_->base) throw Error(ErrorKind::Precondition, "this valuation has no base descriptor");
    return *node_->base;
}

const FamilyPrefix& Valuation::prefix() const {
    if (!node_->prefix) throw Error(ErrorKind::Precondition, "only limit augmentations carry a family prefix");
    return *node_->prefix;
}

Value Valuation::operator()(const Poly& f) const { return eval(*this, f); }

std::string Valuation::describe() const {
    switch (kind()) {
        case Kind::Monomial:
            return "[" + field().to_string() + "; x -> " + gamma().to_string() + "]";
        case Kind::Augmented:
            return "[" + base().describe() + "; " + key().to_string() + " -> " + gamma().to_string() + "]";
        case Kind::Truncation:
            return "trunc(" + base().describe() + ", " + key().to_string() + ")";
        case Kind::LimitAugmented:
            return "[limit of " + std::to_string(prefix().size()) + " over " + prefix().base().describe() + "; " +
                   key().to_string() + " -> " + gamma().to_string() + "]";
    }
    return {};
}

Value eval(const Valuation& v, const Poly& f) {
    require_field(v.field(), f);
    switch (v.kind()) {
        case Valuation::Kind::Monomial: {
            const GroundField& field = v.field();
            const Value gv = v.gamma();
            const Rational& gamma = gv.rational();
            std::optional<Rational> best;
            Rational term;
            for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
                const GroundElement& c = f.coeffs()[i];
                if (c.is_zero()) continue;
                term = gamma * static_cast<long>(i);
                term += field.valuation(c).rational();
                if (!best || term < *best) best = term;
            }
            return best ? Value(*best) : Value::infinity();
        }
        case Valuation::Kind::Augmented: {
            const Valuation& base = v.base();
            return min_formula(f, v.key(), v.gamma(), [&](const Poly& p) { return eval(base, p); });
        }
        case Valuation::Kind::Truncation: {
            const Valuation& ambient = v.base();
            return min_formula(f, v.key(), v.gamma(), [&](const Poly& p) { return eval(ambient, p); });
        }
        case Valuation::Kind::LimitAugmented: {
            const FamilyPrefix& prefix = v.prefix();
            return min_formula(f, v.key(), v.gamma(), [&](const Poly& p) { return nu_F(prefix, p); });
        }
    }
    return Value::infinity();
}

GroundField restrict_to_ground(const Valuation& v) { return v.field(); }

Poly key_of(const Valuation& v) {
    if (v.kind() == Valuation::Kind::Monomial)
        throw Error(ErrorKind::Precondition, "a monomial valuation has no augmentation key");
    return v.key();
}

Value gamma_of(const Valuation& v) {
    if (v.kind() == Valuation::Kind::Monomial)
        throw Error(ErrorKind::Precondition, "a monomial valuation has no augmentation value");
    return v.gamma();
}

bool leq_same_degree(const Valuation& nu, const Poly& q1, const Value& gamma1, const Poly& q2, const Value& gamma2) {
    if (q1.degree() != q2.degree())
        throw Error(ErrorKind::Precondition, "keys " + q1.to_string() + " and " + q2.to_string() + " differ in degree");
    if (!(gamma1 < gamma2))
        throw Error(ErrorKind::Precondition, "expected gamma1 < gamma2, got " + gamma1.to_string() + " and " + gamma2.to_string());
    Valuation::augmented(nu, q1, gamma1);
    Valuation nu2 = Valuation::augmented(nu, q2, gamma2);
    return gamma1 <= eval(nu2, q1);
}

const char* to_string(SameDegreeReport::Status s) {
    switch (s) {
        case SameDegreeReport::Status::Pass: return "pass";
        case SameDegreeReport::Status::Fail: return "fail";
        case SameDegreeReport::Status::HypothesisViolated: return "hypothesis violated";
    }
    return "?";
}

SameDegreeReport check_same_degree_comparison(const Valuation& nu, const Poly& q1, const Value& gamma1, const Poly& q2,
                                              const Value& gamma2) {
    if (q1.degree() != q2.degree())
        throw Error(ErrorKind::Precondition, "keys " + q1.to_string() + " and " + q2.to_string() + " differ in degree");
    Valuation nu1 = Valuation::augmented(nu, q1, gamma1);

    SameDegreeReport r;
    r.gamma1 = gamma1;
    r.gamma2 = gamma2;
    r.nu1_of_q2 = eval(nu1, q2);
    r.nu_of_diff = eval(nu, q2 - q1);
    r.nu_of_q1 = eval(nu, q1);
    r.nu_of_q2 = eval(nu, q2);
    r.equal_base_values = r.nu_of_q1 == r.nu_of_q2;
    r.not_equivalent = !equivalent(nu1, q1, q2);
    r.remainder_bound = r.nu_of_diff >= gamma1;

    if (gamma2 > r.nu1_of_q2) {
        Valuation nu2 = Valuation::augmented(nu1, q2, gamma2);
        r.nu2_of_q1 = eval(nu2, q1);
    } else {
        // ν₂ is not an admissible augmentation of ν₁; its formula is still defined.
        r.nu2_of_q1 = eval(Valuation::extension(nu1, q2, gamma2), q1);
    }

    r.checks = {
        {"gamma2 > gamma1", gamma2 > gamma1},
        {"nu2(Q1) = gamma1", r.nu2_of_q1 == gamma1},
        {"nu1(Q2) = gamma1", r.nu1_of_q2 == gamma1},
        {"nu(Q2 - Q1) = gamma1", r.nu_of_diff == gamma1},
    };
    if (!r.not_equivalent || !r.remainder_bound) {
        r.status = SameDegreeReport::Status::HypothesisViolated;
    } else {
        bool all = true;
        for (const auto& c : r.checks) all = all && c.holds;
        r.status = all ? SameDegreeReport::Status::Pass : SameDegreeReport::Status::Fail;
    }
    return r;
}

MacLaneChain::MacLaneChain(const GroundField& field, const Value& gamma0) : steps_{Valuation::monomial(field, gamma0)} {}

const Valuation& MacLaneChain::at(std::size_t i) const {
    if (i >= steps_.size())
        throw Error(ErrorKind::IndexOutOfRange,
                    "step " + std::to_string(i) + " of a chain with " + std::to_string(steps_.size()) + " steps");
    return steps_[i];
}

MacLaneChain MacLaneChain::augmented(const Poly& key, const Value& gamma) const {
    std::vector<Valuation> steps = steps_;
    steps.push_back(Valuation::augmented(top(), key, gamma));
    return MacLaneChain(std::move(steps));
}

MacLaneChain MacLaneChain::limit(std::vector<PrefixMember> members, const Poly& key, const Value& gamma) const {
    if (top().gamma().is_infinite())
        throw Error(ErrorKind::Precondition, "cannot extend a chain whose last value is infinite");
    auto prefix = std::make_shared<const FamilyPrefix>(top(), std::move(members));
    std::vector<Valuation> steps = steps_;
    steps.push_back(Valuation::limit_augmented(std::move(prefix), key, gamma));
    return MacLaneChain(std::move(steps));
}

}  // namespace valkey
