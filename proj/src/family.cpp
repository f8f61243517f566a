#include "valkey/family.hpp"

#include "valkey/error.hpp"
#include "valkey/keypoly.hpp"

namespace valkey {

FamilyPrefix::FamilyPrefix(Valuation base, std::vector<PrefixMember> members)
    : base_(std::move(base)), members_(std::move(members)) {
    if (members_.size() < 2) throw Error(ErrorKind::Precondition, "a family prefix needs at least two members");
    const int d = members_.front().key.degree();
    valuations_.reserve(members_.size());
    for (std::size_t a = 0; a < members_.size(); ++a) {
        const PrefixMember& m = members_[a];
        if (m.key.degree() != d)
            throw Error(ErrorKind::Precondition, "member " + std::to_string(a) + " has degree " +
                                                     std::to_string(m.key.degree()) + ", expected " + std::to_string(d));
        if (m.gamma.is_infinite())
            throw Error(ErrorKind::Precondition, "member values must be finite");
        if (a > 0 && !(members_[a - 1].gamma < m.gamma))
            throw Error(ErrorKind::Precondition, "member values must increase strictly, got " +
                                                     members_[a - 1].gamma.to_string() + " then " + m.gamma.to_string());
        valuations_.push_back(Valuation::augmented(base_, m.key, m.gamma));
    }
    for (std::size_t a = 0; a + 1 < members_.size(); ++a) {
        const PrefixMember& lo = members_[a];
        const PrefixMember& hi = members_[a + 1];
        if (!leq_same_degree(base_, lo.key, lo.gamma, hi.key, hi.gamma))
            throw Error(ErrorKind::Precondition, "member " + std::to_string(a + 1) + " does not dominate member " +
                                                     std::to_string(a));
    }
}

const Valuation& FamilyPrefix::member(std::size_t a) const {
    if (a >= valuations_.size())
        throw Error(ErrorKind::IndexOutOfRange,
                    "member " + std::to_string(a) + " of a prefix with " + std::to_string(valuations_.size()));
    return valuations_[a];
}

FamilyPrefix FamilyPrefix::truncated(std::size_t n) const {
    if (n > members_.size()) throw Error(ErrorKind::IndexOutOfRange, "prefix is shorter than " + std::to_string(n));
    return FamilyPrefix(base_, std::vector<PrefixMember>(members_.begin(), members_.begin() + static_cast<long>(n)));
}

StabilizationResult stabilize(const FamilyPrefix& prefix, const Poly& f) {
    StabilizationResult r{StabilizationResult::Outcome::IncreasingThroughPrefix, Value(0), 0, {}};
    for (std::size_t a = 0; a < prefix.size(); ++a) {
        r.values.push_back(eval(prefix.member(a), f));
        if (a > 0 && r.values[a] == r.values[a - 1]) {
            r.outcome = StabilizationResult::Outcome::Stabilized;
            r.value = r.values[a];
            r.first_index = a;
            return r;
        }
    }
    return r;
}

Value nu_F(const FamilyPrefix& prefix, const Poly& f) {
    StabilizationResult r = stabilize(prefix, f);
    if (!r.stabilized())
        throw Error(ErrorKind::NotStabilized,
                    f.to_string() + " keeps increasing through all " + std::to_string(prefix.size()) + " members");
    return r.value;
}

const char* to_string(Classification::Kind k) {
    return k == Classification::Kind::Stable ? "Stable" : "PresumedUnbounded";
}

Classification classify(const FamilyPrefix& prefix, const Poly& f) {
    StabilizationResult r = stabilize(prefix, f);
    if (r.stabilized()) return {Classification::Kind::Stable, r.first_index - 1, r.value, std::move(r.values)};
    return {Classification::Kind::PresumedUnbounded, 0, r.values.back(), std::move(r.values)};
}

LimitCheckReport limit_check(const FamilyPrefix& prefix, const Poly& q, const Value& gamma, const std::vector<Poly>& sample) {
    if (!q.is_monic()) throw Error(ErrorKind::Precondition, "limit key candidate must be monic, got " + q.to_string());
    LimitCheckReport r;
    r.degree_ok = q.degree() >= prefix.degree();
    StabilizationResult st = stabilize(prefix, q);
    r.increasing = !st.stabilized();
    r.gamma_admissible = true;
    for (std::size_t a = 0; a < prefix.size(); ++a) {
        Value v = a < st.values.size() ? st.values[a] : eval(prefix.member(a), q);
        r.values.push_back(v);
        if (!(gamma > v)) r.gamma_admissible = false;
    }
    for (const Poly& f : sample) {
        if (f.degree() >= q.degree() || f.is_zero()) continue;
        ++r.sampled;
        if (classify(prefix, f).kind == Classification::Kind::PresumedUnbounded) {
            r.minimal_degree = false;
            r.lower_degree_witness = f;
            break;
        }
    }
    r.pass = r.degree_ok && r.increasing && r.minimal_degree && r.gamma_admissible;
    return r;
}

namespace {

template <class Lhs, class Rhs>
void compare_on(SuiteReport& report, const std::vector<Poly>& polys, const std::string& relation, Lhs&& lhs, Rhs&& rhs) {
    for (const Poly& f : polys) {
        try {
            Value a = lhs(f);
            Value b = rhs(f);
            report.check(a == b, [&] { return Failure{relation, {{"f", f.to_string()}}, a.to_string(), b.to_string()}; });
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotStabilized) throw;
            ++report.skipped;
        }
    }
}

std::vector<Poly> correspondence_sample(const GroundField& field, const Sampler& s) {
    std::vector<Poly> polys = enumerate_polys(field, s.degree_bound, s.height_bound);
    Rng rng(s.seed);
    for (int k = 0; k < s.trials; ++k) polys.push_back(random_poly(field, s.degree_bound, s.height_bound, rng));
    return polys;
}

}  // namespace

SuiteReport mlv_correspondence(const MacLaneChain& chain, std::size_t i, const Sampler& s) {
    s.validate();
    if (i + 1 >= chain.size())
        throw Error(ErrorKind::IndexOutOfRange, "step " + std::to_string(i) + " has no successor in the chain");
    const Poly& qp = chain.key(i + 1);
    Valuation direct = chain.truncation_at(i + 1);
    SuiteReport report;
    report.suite = "correspondence";
    report.subject = "step " + std::to_string(i) + " -> " + std::to_string(i + 1) + " of " + chain.top().describe();
    std::vector<Poly> polys = correspondence_sample(chain.field(), s);

    if (chain.is_limit_step(i + 1)) {
        Value target = eval(chain.top(), qp);
        auto prefix = std::make_shared<const FamilyPrefix>(chain.valuation(i + 1).prefix());
        Valuation rebuilt = Valuation::limit_augmented(prefix, qp, target);
        compare_on(report, polys, "truncation at the limit key = limit augmentation",
                   [&](const Poly& f) { return eval(direct, f); }, [&](const Poly& f) { return eval(rebuilt, f); });
        return report;
    }

    if (!psi_member(chain, i, qp))
        throw Error(ErrorKind::Precondition, qp.to_string() + " is not in Psi of step " + std::to_string(i));
    Valuation lower = chain.truncation_at(i);
    Valuation rebuilt = Valuation::augmented(lower, qp, eval(chain.top(), qp));
    compare_on(report, polys, "truncation at Q' = augmentation of the truncation at Q",
               [&](const Poly& f) { return eval(direct, f); }, [&](const Poly& f) { return eval(rebuilt, f); });

    Sampler small{std::min(s.degree_bound, 3), std::min(s.height_bound, 2), std::min(s.trials, 200), s.seed};
    SuiteReport keys = check_mlv_key(lower, qp, small);
    for (auto& f : keys.failures) f.relation = "key over the lower truncation: " + f.relation;
    report.absorb(keys);
    return report;
}

}  // namespace valkey
