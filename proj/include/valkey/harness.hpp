#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "valkey/poly.hpp"

namespace valkey {

class Valuation;
class MacLaneChain;
class FamilyPrefix;

/// Sampling budget for a suite. Exhaustive passes use the small fixed
/// grids below; `trials` random draws use degree <= degree_bound and
/// coefficient height <= height_bound.
struct Sampler {
    int degree_bound = 4;
    int height_bound = 3;
    int trials = 1000;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Deterministic draws on top of mt19937_64. The bounded draws avoid the
/// standard distributions, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [lo, hi].
    long uniform(long lo, long hi);
    bool chance(unsigned num, unsigned den) { return uniform(0, static_cast<long>(den) - 1) < static_cast<long>(num); }

private:
    std::mt19937_64 engine_;
};

/// The level-h coefficient grid: 0, ±u^k for 0 <= k < h, plus 1/u (h >= 2)
/// and 1 + u, where u is p or t. Duplicates (as in characteristic 2) are
/// dropped.
std::vector<GroundElement> height_grid(const GroundField& field, int level);

/// Every polynomial of degree <= max_degree with coefficients in the
/// level grid, in a fixed order; the zero polynomial comes first.
std::vector<Poly> enumerate_polys(const GroundField& field, int max_degree, int level);

/// Random element of height <= h: a/b with |a|, b <= h over Q; sparse
/// numerators in t over t^k or t^k (1 + t) denominators for t-adic fields.
/// Zero is drawn occasionally.
GroundElement random_element(const GroundField& field, int height, Rng& rng);
Poly random_poly(const GroundField& field, int max_degree, int height, Rng& rng);
Poly random_monic(const GroundField& field, int degree, int height, Rng& rng);

struct Failure {
    std::string relation;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::string lhs;
    std::string rhs;
};

struct SuiteReport {
    static constexpr std::size_t kRecorded = 20;

    std::string suite;
    std::string subject;
    std::size_t checks = 0;
    std::size_t failure_count = 0;
    std::vector<Failure> failures;   // the first kRecorded, in check order
    std::size_t skipped = 0;         // inputs a limit prefix was too short to evaluate
    bool hypotheses_hold = true;
    std::size_t witness_count = 0;
    std::vector<Failure> witnesses;  // hypothesis violations, first kRecorded
    std::vector<std::string> notes;

    bool pass() const { return failure_count == 0; }

    void check(bool holds, Failure f);
    /// As above, but builds the failure record only when the check fails.
    template <class Make>
        requires std::is_invocable_r_v<Failure, Make>
    void check(bool holds, Make&& make) {
        ++checks;
        if (!holds) fail(make());
    }
    void fail(Failure f);
    void witness(Failure f);
    /// Appends counts, failures and witnesses of `other` after ours.
    void absorb(const SuiteReport& other);
};

/// Runs body(i, report) for i in [0, n), split into fixed chunks so that the
/// merged report does not depend on the number of worker threads.
SuiteReport run_chunked(std::string suite, std::size_t n, const std::function<void(std::size_t, SuiteReport&)>& body);

/// ν(fg) = ν(f) + ν(g), ν(f + g) >= min, ν(1) = 0, ν(0) = ∞: exhaustively on
/// degree <= 2 level-2 pairs and on s.trials random pairs.
SuiteReport check_axioms(const Valuation& v, const Sampler& s);

/// Tests hypotheses (i) and (ii) of the min-formula criterion for μ = v_base
/// on K[x]_n, n = deg q, and, when they hold on every sample, the axioms for
/// the extension μ'. Violations are recorded as witnesses, not failures.
SuiteReport check_theorem1(const Valuation& v_base, const Poly& q, const Value& gamma, const Sampler& s);

/// The derivative bound ν(∂_k(fg)) > ν(fg) - kε(Q) and the remainder rule
/// ν(r) = ν(h₁⋯h_s) < ν(aQ) for products of polynomials below deg Q.
SuiteReport check_lemma23(const MacLaneChain& chain, std::size_t i, const Sampler& s);

/// Homomorphism, domain, y-primality, I_Q primality, equivalence congruence
/// and non-factorization of the key at step i.
SuiteReport check_graded(const MacLaneChain& chain, std::size_t i, const Sampler& s);

/// Every sampled f of positive degree has a chain key Q, deg Q <= deg f,
/// with ν_Q(f) = ν(f). Members of limit-step prefixes count as keys.
SuiteReport check_complete_set(const MacLaneChain& chain, const Sampler& s);

/// KP2 by exhaustion, KP1 by sampling, and the remainder bound for f = aQ + r.
/// Throws Precondition when Q is not monic.
SuiteReport check_mlv_key(const Valuation& v, const Poly& q, const Sampler& s);

/// Pairwise key comparisons, ε-agreement of truncations and the key verdict
/// of every step.
SuiteReport check_keys(const MacLaneChain& chain, const Sampler& s);

/// mlv_correspondence for every step that has a successor.
SuiteReport check_correspondence(const MacLaneChain& chain, const Sampler& s);

/// Early stopping on the first `short_length` members against the whole
/// prefix, ν_F on products and sums, product classification and monotonicity.
SuiteReport check_stabilization(const FamilyPrefix& prefix, std::size_t short_length, const Sampler& s);

}  // namespace valkey
