#pragma once

#include <utility>
#include <vector>

#include "valkey/valuation.hpp"

namespace valkey {

class MacLaneChain;

/// in_Q(f) in gr_Q(K[x]) = R_Q[y] for the truncation ν_Q of an ambient
/// valuation. Only the support S_Q(f) is kept: the exponents i whose
/// term f_i Q^i attains ν_Q(f), each with its expansion coefficient f_i.
struct InitialForm {
    Poly key;
    Value value;
    std::vector<std::pair<int, Poly>> terms;  // ascending exponent

    std::vector<int> support() const;
};

/// Throws NoInitialForm when f = 0 or ν_Q(f) = ∞.
InitialForm initial_form(const Valuation& ambient, const Poly& key, const Poly& f);

/// f ~ g: f = g, or v(f) = v(g) is finite and v(f - g) exceeds it.
bool equivalent(const Valuation& v, const Poly& f, const Poly& g);

/// Equality of two initial forms: same value and support, with termwise
/// ν-equivalent coefficients.
bool same_initial_form(const Valuation& ambient, const InitialForm& a, const InitialForm& b);

/// y | in_Q(f), i.e. 0 is not in the support.
bool y_divides(const Valuation& ambient, const Poly& key, const Poly& f);

/// in_Q(Q') | in_Q(f) for Q = chain.key(step) and Q' ∈ Ψ(Q), decided as
/// ν_Q(f) < ν(f). Throws PsiEmpty/Precondition when Q' is not in Ψ(Q).
bool inQprime_divides(const MacLaneChain& chain, std::size_t step, const Poly& qprime, const Poly& f);

/// in_Q(f) * in_Q(g) computed from the two forms alone: coefficient products
/// f_i g_j are reduced as a Q + r and only the r parts are collected, then the
/// support is re-minimized.
InitialForm multiply_initial_forms(const Valuation& ambient, const Poly& key, const InitialForm& a, const InitialForm& b);

}  // namespace valkey
