#include <doctest.h>

#include "oracles.hpp"
#include "valkey/error.hpp"
#include "valkey/graded.hpp"
#include "valkey/keypoly.hpp"

using namespace valkey;
using oracle::naive_eval;
using oracle::P;

namespace {

const GroundField T = GroundField::tadic_rationals();

MacLaneChain short_chain() { return MacLaneChain(T, 1).augmented(P(T, "x - t"), 3); }

/// S_Q(f) from the naive expansion: exponents whose term attains the minimum.
std::vector<int> support_oracle(const Valuation& ambient, const Poly& q, const Poly& f) {
    auto parts = oracle::expand(f, q);
    std::vector<Value> vals;
    Value best = Value::infinity();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        vals.push_back(parts[i].is_zero() ? Value::infinity() : naive_eval(ambient, parts[i] * q.pow(static_cast<unsigned>(i))));
        best = oracle::min_v(best, vals.back());
    }
    std::vector<int> s;
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (vals[i] == best) s.push_back(static_cast<int>(i));
    return s;
}

}  // namespace

TEST_CASE("initial form examples") {
    auto nu1 = short_chain().top();
    Poly q = P(T, "x - t");
    auto a = initial_form(nu1, q, q * q);
    CHECK(a.support() == std::vector<int>{2});
    CHECK(a.value == Value(6));
    REQUIRE(a.terms.size() == 1);
    CHECK(a.terms[0].second == P(T, "1"));
    auto b = initial_form(nu1, q, P(T, "t^3") * q + q * q);
    CHECK(b.support() == std::vector<int>{1, 2});
    CHECK(b.value == Value(6));
    auto c = initial_form(nu1, q, P(T, "t") * q + q * q);
    CHECK(c.support() == std::vector<int>{1});
    CHECK(c.value == Value(4));
    CHECK_THROWS_AS(initial_form(nu1, q, Poly(T)), Error);
}

TEST_CASE("equivalence examples") {
    auto nu = Valuation::monomial(T, 1);
    auto nu1 = short_chain().top();
    Poly q1 = P(T, "x - t"), q2 = P(T, "x - t - t^2");
    CHECK(equivalent(nu1, q1, q1));
    CHECK_FALSE(equivalent(nu1, q2, q1));
    CHECK(eval(nu1, q2) == Value(2));
    CHECK(equivalent(nu, q1, q2));
    CHECK_FALSE(equivalent(nu, P(T, "x"), P(T, "t")));
}

TEST_CASE("divisibility examples") {
    auto ch = short_chain();
    auto nu1 = ch.top();
    Poly q = P(T, "x - t");
    CHECK(y_divides(nu1, q, q));
    CHECK_FALSE(y_divides(nu1, q, P(T, "t^2 + 5")));
    CHECK(y_divides(nu1, q, P(T, "t^3") * q + q * q));

    Poly qp = P(T, "x - t");
    CHECK(inQprime_divides(ch, 0, qp, P(T, "x - t")));
    CHECK_FALSE(inQprime_divides(ch, 0, qp, P(T, "x + 1")));
    CHECK(inQprime_divides(ch, 0, qp, P(T, "(x - t)^2")));
    CHECK(naive_eval(ch.truncation_at(0), P(T, "(x - t)^2")) == Value(2));
    CHECK(naive_eval(ch.top(), P(T, "(x - t)^2")) == Value(6));
    CHECK_THROWS_AS(inQprime_divides(ch, 0, P(T, "x + 1"), P(T, "x")), Error);
}

TEST_CASE("form products examples") {
    auto nu1 = short_chain().top();
    Poly q = P(T, "x - t");
    auto iq = initial_form(nu1, q, q);
    auto sq = multiply_initial_forms(nu1, q, iq, iq);
    CHECK(sq.support() == std::vector<int>{2});
    CHECK(sq.value == Value(6));
    Poly f = P(T, "t^3") * q + q * q;
    auto prod = multiply_initial_forms(nu1, q, initial_form(nu1, q, f), iq);
    CHECK(prod.support() == std::vector<int>{2, 3});
    CHECK(prod.value == Value(9));
    CHECK(same_initial_form(nu1, prod, initial_form(nu1, q, f * q)));
}

TEST_CASE("property: graded homomorphism and primality on small polynomials") {
    struct Case {
        MacLaneChain chain;
        std::size_t step;
    };
    auto F2 = GroundField::padic(2);
    auto F3 = GroundField::padic(3);
    std::vector<Case> cases{
        {short_chain(), 0},
        {short_chain(), 1},
        {MacLaneChain(F2, Value(1, 2)).augmented(P(F2, "x^2 - 2"), Value(3, 2)), 1},
        {MacLaneChain(F3, 0).augmented(P(F3, "x - 1"), 1).augmented(P(F3, "x - 4"), 2), 1},
    };
    for (const auto& c : cases) {
        const Valuation& nu = c.chain.top();
        const Poly& q = c.chain.key(c.step);
        std::vector<Poly> fs;
        for (const auto& f : enumerate_polys(c.chain.field(), c.chain.key(c.step).degree(), 2))
            if (!f.is_zero()) fs.push_back(f);
        for (const auto& f : fs) {
            auto in_f = initial_form(nu, q, f);
            CHECK(in_f.support() == support_oracle(nu, q, f));
            for (const auto& g : fs) {
                auto in_g = initial_form(nu, q, g);
                auto prod = multiply_initial_forms(nu, q, in_f, in_g);
                CHECK(!prod.terms.empty());
                CHECK(same_initial_form(nu, prod, initial_form(nu, q, f * g)));
                if (y_divides(nu, q, f * g)) CHECK((y_divides(nu, q, f) || y_divides(nu, q, g)));
            }
        }
    }
}

TEST_CASE("property: equivalence is a congruence") {
    auto nu = short_chain().top();
    Rng rng(13);
    std::vector<Poly> fs;
    for (int k = 0; k < 16; ++k) {
        Poly f = random_poly(T, 3, 4, rng);
        if (f.is_zero()) continue;
        fs.push_back(f);
        // A perturbation of strictly larger value is always equivalent.
        Poly bump = P(T, "t^9");
        fs.push_back(f + bump * P(T, "x"));
    }
    for (const auto& f : fs)
        for (const auto& g : fs) {
            bool fg = equivalent(nu, f, g);
            CHECK(fg == equivalent(nu, g, f));
            for (const auto& h : fs) {
                if (fg && equivalent(nu, g, h)) CHECK(equivalent(nu, f, h));
                if (fg) CHECK(equivalent(nu, f * h, g * h));
            }
        }
}
