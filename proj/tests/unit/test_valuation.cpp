#include <doctest.h>

#include "oracles.hpp"
#include "valkey/error.hpp"

using namespace valkey;
using oracle::naive_eval;
using oracle::P;

namespace {

struct Example {
    GroundField T = GroundField::tadic_rationals();
    Valuation nu = Valuation::monomial(T, 1);
    Poly q1 = P(T, "x - t");
    Poly q2 = P(T, "x - t - t^2");
    Valuation nu1 = Valuation::augmented(nu, q1, 3);
    Valuation nu2 = Valuation::augmented(nu, q2, 4);
};

std::vector<MacLaneChain> chains() {
    auto T = GroundField::tadic_rationals();
    auto F2 = GroundField::padic(2);
    auto G2 = GroundField::tadic_prime(2);
    auto F3 = GroundField::padic(3);
    return {
        MacLaneChain(T, 1).augmented(P(T, "x - t"), 3).augmented(P(T, "(x - t)^2 + t^6"), 7),
        MacLaneChain(F2, Value(1, 2)).augmented(P(F2, "x^2 - 2"), Value(3, 2)),
        MacLaneChain(G2, Value(1, 2)).augmented(P(G2, "x^2 + t"), Value(3, 2)),
        MacLaneChain(F3, 0).augmented(P(F3, "x - 1"), 1).augmented(P(F3, "x - 4"), 2),
    };
}

}  // namespace

TEST_CASE("evaluation examples") {
    Example ex;
    CHECK(eval(ex.nu, P(ex.T, "x^2 + t^3")) == Value(2));
    CHECK(eval(ex.nu1, ex.q1) == Value(3));
    CHECK(eval(ex.nu2, ex.q1) == Value(2));
    CHECK(eval(ex.nu, ex.q2 - ex.q1) == Value(2));
    Valuation trunc = Valuation::truncation(ex.nu1, P(ex.T, "x"));
    CHECK(eval(trunc, ex.q1) == Value(1));
    CHECK(eval(ex.nu1, Poly(ex.T)).is_infinite());
    CHECK(eval(ex.nu1, P(ex.T, "1")) == Value(0));
}

TEST_CASE("accessors") {
    Example ex;
    CHECK(key_of(ex.nu1) == ex.q1);
    CHECK(gamma_of(ex.nu2) == Value(4));
    CHECK(gamma_of(Valuation::truncation(ex.nu1, P(ex.T, "x"))) == Value(1));
    CHECK(restrict_to_ground(ex.nu2) == ex.T);
    CHECK_THROWS_AS(key_of(ex.nu), Error);
    CHECK(ex.nu2.depth() == 2);
}

TEST_CASE("construction checks") {
    Example ex;
    CHECK_THROWS_AS(Valuation::augmented(ex.nu, P(ex.T, "2*x - t"), 3), Error);
    CHECK_THROWS_AS(Valuation::augmented(ex.nu, ex.q1, 1), Error);
    CHECK_THROWS_AS(Valuation::augmented(ex.nu1, P(ex.T, "3"), 5), Error);
    CHECK_NOTHROW(Valuation::augmented(ex.nu, ex.q1, Value::infinity()));
    CHECK_THROWS_AS(MacLaneChain(ex.T, 1).augmented(ex.q1, Value::infinity()).augmented(ex.q2, 9), Error);
    CHECK_THROWS_AS(eval(ex.nu1, P(GroundField::padic(2), "x")), Error);
}

TEST_CASE("same-degree order") {
    Example ex;
    CHECK_FALSE(leq_same_degree(ex.nu, ex.q1, 3, ex.q2, 4));
    CHECK(leq_same_degree(ex.nu, ex.q1, 3, ex.q1, 5));
    CHECK(leq_same_degree(ex.nu, ex.q1, 2, ex.q2, 4));

    // Pointwise confirmation on every small polynomial.
    Valuation a = Valuation::augmented(ex.nu, ex.q1, 2);
    Valuation b = Valuation::augmented(ex.nu, ex.q2, 4);
    bool pointwise = true;
    for (const auto& f : enumerate_polys(ex.T, 3, 2)) pointwise = pointwise && eval(a, f) <= eval(b, f);
    CHECK(pointwise);
    Valuation c = Valuation::augmented(ex.nu, ex.q1, 3);
    CHECK_FALSE(eval(c, ex.q1) <= eval(b, ex.q1));
}

TEST_CASE("same-degree comparison report") {
    Example ex;
    auto r = check_same_degree_comparison(ex.nu, ex.q1, 3, ex.q2, 4);
    CHECK(r.nu2_of_q1 == naive_eval(Valuation::augmented(ex.nu1, ex.q2, 4), ex.q1));
    CHECK(r.nu1_of_q2 == naive_eval(ex.nu1, ex.q2));
    CHECK(r.nu_of_diff == Value(2));
    CHECK(r.nu_of_q1 == Value(1));
    CHECK(r.nu_of_q2 == Value(1));
    CHECK(r.equal_base_values);
    CHECK(r.status == SameDegreeReport::Status::HypothesisViolated);

    auto same = check_same_degree_comparison(ex.nu, ex.q1, 3, ex.q1, 4);
    CHECK(same.status == SameDegreeReport::Status::HypothesisViolated);
    CHECK_FALSE(same.not_equivalent);

    auto good = check_same_degree_comparison(ex.nu, ex.q1, 2, ex.q2, 4);
    CHECK(good.status == SameDegreeReport::Status::Pass);
}

TEST_CASE("property: evaluator agrees with the naive min formula") {
    for (const auto& chain : chains()) {
        const GroundField& K = chain.field();
        std::vector<Valuation> vs;
        for (std::size_t i = 0; i < chain.size(); ++i) {
            vs.push_back(chain.valuation(i));
            vs.push_back(chain.truncation_at(i));
        }
        Rng rng(41);
        std::vector<Poly> fs = enumerate_polys(K, 2, 2);
        for (int k = 0; k < 150; ++k) fs.push_back(random_poly(K, 6, 5, rng));
        for (const auto& v : vs)
            for (const auto& f : fs) CHECK(eval(v, f) == naive_eval(v, f));
    }
}

TEST_CASE("property: truncations are dominated and agree below the key degree") {
    for (const auto& chain : chains()) {
        Rng rng(8);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            Valuation tr = chain.truncation_at(i);
            for (int k = 0; k < 80; ++k) {
                Poly f = random_poly(chain.field(), 6, 4, rng);
                CHECK(eval(tr, f) <= eval(chain.top(), f));
                if (f.degree() < chain.key(i).degree()) CHECK(eval(tr, f) == eval(chain.top(), f));
            }
        }
    }
}

TEST_CASE("property: key powers shift the value by gamma") {
    for (const auto& chain : chains()) {
        const Valuation& v = chain.top();
        const Poly& q = chain.key(chain.size() - 1);
        Rng rng(4);
        for (int k = 0; k < 60; ++k) {
            Poly f = random_poly(chain.field(), q.degree() - 1, 5, rng);
            if (f.is_zero()) continue;
            for (unsigned e = 0; e < 3; ++e)
                CHECK(eval(v, f * q.pow(e)) == eval(v, f) + v.gamma().scale(Rational(e)));
        }
        for (std::size_t i = 1; i < chain.size(); ++i)
            CHECK(eval(chain.valuation(i), chain.key(i)) > eval(chain.valuation(i - 1), chain.key(i)));
    }
}

TEST_CASE("property: axioms on exhaustive small pairs") {
    for (const auto& chain : chains()) {
        const Valuation& v = chain.top();
        auto fs = enumerate_polys(chain.field(), 1, 2);
        for (const auto& f : fs)
            for (const auto& g : fs) {
                CHECK(eval(v, f * g) == eval(v, f) + eval(v, g));
                CHECK(eval(v, f + g) >= min(eval(v, f), eval(v, g)));
            }
    }
}
