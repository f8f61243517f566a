#pragma once

#include <string>
#include <vector>

#include "valkey/ground.hpp"

namespace valkey {

/// Dense univariate polynomial over a ground field K. Coefficients are stored
/// by ascending exponent and trimmed, so the leading coefficient is nonzero
/// unless the polynomial is zero. The zero polynomial has degree -1.
class Poly {
public:
    explicit Poly(GroundField field) : field_(field) {}
    Poly(GroundField field, std::vector<GroundElement> coeffs);

    static Poly constant(GroundField field, const GroundElement& c);
    static Poly x(GroundField field);
    /// c * x^n
    static Poly monomial(GroundField field, const GroundElement& c, int n);

    const GroundField& field() const { return field_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_monic() const { return !is_zero() && coeffs_.back().is_one(); }
    bool is_constant() const { return coeffs_.size() <= 1; }

    /// Coefficient of x^i; zero outside the stored range.
    GroundElement coeff(int i) const;
    const GroundElement& leading() const { return coeffs_.back(); }
    const std::vector<GroundElement>& coeffs() const { return coeffs_; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const GroundElement& c) const;
    Poly operator-() const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly pow(unsigned n) const;

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
    }

    std::string to_string() const;

private:
    void trim();
    void require_same_field(const Poly& o) const;

    GroundField field_;
    std::vector<GroundElement> coeffs_;
};

struct Division {
    Poly quotient;
    Poly remainder;
};

/// f = quotient * q + remainder with deg(remainder) < deg(q). Throws
/// DivisionByZero for q = 0.
Division euclid_divide(const Poly& f, const Poly& q);

/// f = parts[0] + parts[1] q + ... + parts[r] q^r with deg(parts[i]) < deg(q).
/// The zero polynomial expands to an empty part list.
struct QExpansion {
    Poly base;
    std::vector<Poly> parts;

    Poly reconstruct() const;
};

/// Throws InvalidBase when deg(q) < 1.
QExpansion q_expansion(const Poly& f, const Poly& q);

/// Divided derivative ∂_k, ∂_k(x^n) = C(n,k) x^(n-k); binomials are formed in Z
/// first so the result is correct in positive characteristic.
Poly hasse_derivative(const Poly& f, int k);

Integer binomial(unsigned long n, unsigned long k);

}  // namespace valkey
