#include <doctest.h>

#include "oracles.hpp"
#include "valkey/error.hpp"
#include "valkey/family.hpp"

using namespace valkey;
using oracle::naive_eval;
using oracle::P;

namespace {

const GroundField T = GroundField::tadic_rationals();

FamilyPrefix two_members() {
    return FamilyPrefix(Valuation::monomial(T, 1), {{P(T, "x - t"), 3}, {P(T, "x - t - t^3"), 4}});
}

/// Q_n = x - t - ... - t^n with value n + 1 over [x -> 1].
FamilyPrefix geometric(int n) {
    std::vector<PrefixMember> m;
    std::string s = "x";
    for (int k = 1; k <= n; ++k) {
        s += " - t^" + std::to_string(k);
        m.push_back({P(T, s.c_str()), Value(k + 1)});
    }
    return FamilyPrefix(Valuation::monomial(T, 1), m);
}

}  // namespace

TEST_CASE("prefix validation") {
    auto nu = Valuation::monomial(T, 1);
    CHECK_THROWS_AS(FamilyPrefix(nu, {{P(T, "x - t"), 3}}), Error);
    CHECK_THROWS_AS(FamilyPrefix(nu, {{P(T, "x - t"), 3}, {P(T, "x - t"), 3}}), Error);
    CHECK_THROWS_AS(FamilyPrefix(nu, {{P(T, "x - t"), 3}, {P(T, "x^2 - t"), 4}}), Error);
    // The worked example pair is not ordered: nu_2(Q_1) = 2 < 3.
    CHECK_THROWS_AS(FamilyPrefix(nu, {{P(T, "x - t"), 3}, {P(T, "x - t - t^2"), 4}}), Error);
    CHECK_NOTHROW(two_members());
    CHECK(geometric(5).truncated(3).size() == 3);
}

TEST_CASE("stabilization examples") {
    auto pre = two_members();
    auto r = stabilize(pre, P(T, "x - t"));
    CHECK(r.stabilized());
    CHECK(r.value == Value(3));
    CHECK(r.first_index == 1);
    CHECK(naive_eval(pre.member(1), P(T, "x - t")) == Value(3));
    CHECK(nu_F(pre, P(T, "x - t")) == Value(3));

    auto low = stabilize(pre, P(T, "t^2 + 7"));
    CHECK(low.stabilized());
    CHECK(low.first_index == 1);
    CHECK(nu_F(pre, P(T, "t^2")) == Value(2));

    auto g = geometric(6);
    const Poly& last = g.members().back().key;
    auto up = stabilize(g, last);
    CHECK_FALSE(up.stabilized());
    REQUIRE(up.values.size() == 6);
    for (std::size_t a = 0; a < 6; ++a) CHECK(up.values[a] == naive_eval(g.member(a), last));
    CHECK_THROWS_AS(nu_F(g, last), Error);
    try {
        nu_F(g, last);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotStabilized);
    }
}

TEST_CASE("classification examples") {
    auto g = geometric(6);
    auto one = classify(g, P(T, "1"));
    CHECK(one.kind == Classification::Kind::Stable);
    CHECK(one.alpha_index == 0);
    CHECK(one.value == Value(0));
    CHECK(classify(g, g.members().back().key).kind == Classification::Kind::PresumedUnbounded);
    Poly f = P(T, "x + 1");
    Poly q = P(T, "x - t/(1 - t)");
    CHECK(classify(g, f).kind == Classification::Kind::Stable);
    CHECK(classify(g, q).kind == Classification::Kind::PresumedUnbounded);
    CHECK(classify(g, f * q).kind == Classification::Kind::PresumedUnbounded);
}

TEST_CASE("limit check examples") {
    auto pre = two_members();
    auto flat = limit_check(pre, P(T, "x"), Value(10));
    CHECK_FALSE(flat.increasing);
    CHECK_FALSE(flat.pass);

    auto g = geometric(6);
    Poly q = P(T, "x - t/(1 - t)");
    auto low_gamma = limit_check(g, q, Value(5));
    CHECK_FALSE(low_gamma.gamma_admissible);
    CHECK_FALSE(low_gamma.pass);

    auto good = limit_check(g, q, Value::infinity(), enumerate_polys(T, 0, 2));
    CHECK(good.degree_ok);
    CHECK(good.increasing);
    CHECK(good.gamma_admissible);
    CHECK(good.minimal_degree);
    CHECK(good.pass);
    for (std::size_t a = 0; a < good.values.size(); ++a) CHECK(good.values[a] == Value(static_cast<long>(a) + 2));
}

TEST_CASE("correspondence reports") {
    auto ch = MacLaneChain(T, 1).augmented(P(T, "x - t"), 3);
    auto r = mlv_correspondence(ch, 0, Sampler{3, 2, 50, 1});
    CHECK(r.pass());
    CHECK(r.checks > 0);
    CHECK_THROWS_AS(mlv_correspondence(ch, 1, Sampler{3, 2, 50, 1}), Error);

    auto g = geometric(3);
    auto lim = MacLaneChain(T, 1).limit(g.members(), P(T, "x - t/(1 - t)"), Value::infinity());
    CHECK(mlv_correspondence(lim, 0, Sampler{3, 2, 50, 1}).pass());
}

TEST_CASE("a prefix too short for a coefficient surfaces NotStabilized") {
    auto g = geometric(3);
    // A degree-2 key leaves degree-1 coefficients, which may outrun the prefix.
    auto lim = MacLaneChain(T, 1).limit(g.members(), P(T, "x^2 - t/(1 - t)*x"), Value::infinity());
    CHECK(eval(lim.top(), P(T, "x - t")) == Value(2));
    try {
        eval(lim.top(), P(T, "x - t - t^2 - t^3 - t^4"));
        FAIL("expected NotStabilized");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotStabilized);
    }
}

TEST_CASE("property: early stopping agrees with longer prefixes") {
    auto long_prefix = geometric(10);
    auto short_prefix = long_prefix.truncated(5);
    for (const auto& f : enumerate_polys(T, 2, 2)) {
        auto s = stabilize(short_prefix, f);
        if (!s.stabilized()) continue;
        auto l = stabilize(long_prefix, f);
        CHECK(l.stabilized());
        CHECK(l.value == s.value);
        for (std::size_t a = s.first_index; a < long_prefix.size(); ++a) CHECK(eval(long_prefix.member(a), f) == s.value);
    }
}

TEST_CASE("property: nu_F is multiplicative and members increase") {
    auto g = geometric(8);
    Rng rng(2);
    for (int k = 0; k < 100; ++k) {
        Poly f = random_poly(T, 3, 3, rng), h = random_poly(T, 3, 3, rng);
        auto sf = stabilize(g, f), sh = stabilize(g, h), sp = stabilize(g, f * h), ss = stabilize(g, f + h);
        if (sf.stabilized() && sh.stabilized() && sp.stabilized()) CHECK(sp.value == sf.value + sh.value);
        if (sf.stabilized() && sh.stabilized() && ss.stabilized()) CHECK(ss.value >= min(sf.value, sh.value));
        if (classify(g, f * h).kind == Classification::Kind::PresumedUnbounded)
            CHECK((classify(g, f).kind == Classification::Kind::PresumedUnbounded ||
                   classify(g, h).kind == Classification::Kind::PresumedUnbounded));
        for (std::size_t a = 0; a + 1 < g.size(); ++a) CHECK(eval(g.member(a), f) <= eval(g.member(a + 1), f));
    }
}
