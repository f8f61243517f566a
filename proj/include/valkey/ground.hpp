#pragma once

#include <string>
#include <variant>
#include <vector>

#include "valkey/value.hpp"

namespace valkey {

/// Coefficients of k[t]: Q when the modulus is 0, GF(p) otherwise. GF(p)
/// elements are stored as their least nonnegative residue.
class CoefficientField {
public:
    CoefficientField() = default;
    explicit CoefficientField(unsigned long modulus) : modulus_(modulus) {}

    unsigned long modulus() const { return modulus_; }
    bool is_rationals() const { return modulus_ == 0; }

    Rational reduce(const Rational& a) const;
    Rational add(const Rational& a, const Rational& b) const;
    Rational sub(const Rational& a, const Rational& b) const;
    Rational mul(const Rational& a, const Rational& b) const;
    Rational neg(const Rational& a) const;
    Rational inv(const Rational& a) const;

    friend bool operator==(const CoefficientField&, const CoefficientField&) = default;

private:
    unsigned long modulus_ = 0;
};

/// A reduced fraction num/den of polynomials in t (ascending coefficients).
/// The denominator is monic, gcd(num, den) = 1, and zero is 0/1.
class RationalFunction {
public:
    using Coeffs = std::vector<Rational>;

    /// Reduces an arbitrary fraction into canonical form.
    static RationalFunction normalized(Coeffs num, Coeffs den, CoefficientField field);
    /// Accepts only an already-canonical fraction; throws InvalidInput otherwise.
    static RationalFunction from_reduced(Coeffs num, Coeffs den, CoefficientField field);
    static RationalFunction constant(const Rational& c, CoefficientField field);

    const Coeffs& numerator() const { return num_; }
    const Coeffs& denominator() const { return den_; }
    CoefficientField field() const { return field_; }

    bool is_zero() const { return num_.empty(); }
    /// t-order: ord_t(num) - ord_t(den); infinite for zero.
    Value order() const;

    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction operator-() const;

    friend bool operator==(const RationalFunction&, const RationalFunction&) = default;

    std::string to_string() const;

private:
    RationalFunction(Coeffs num, Coeffs den, CoefficientField field)
        : num_(std::move(num)), den_(std::move(den)), field_(field) {}

    Coeffs num_;
    Coeffs den_;
    CoefficientField field_;
};

/// An element of K. Which alternative is live is dictated by the field:
/// p-adic rationals hold a Rational, t-adic fields a RationalFunction.
class GroundElement {
public:
    explicit GroundElement(Rational q) : rep_(std::move(q)) {}
    explicit GroundElement(RationalFunction f) : rep_(std::move(f)) {}

    bool is_zero() const;
    bool is_one() const;

    GroundElement operator+(const GroundElement& o) const;
    GroundElement operator-(const GroundElement& o) const;
    GroundElement operator*(const GroundElement& o) const;
    GroundElement operator/(const GroundElement& o) const;
    GroundElement operator-() const;
    GroundElement& operator+=(const GroundElement& o) { return *this = *this + o; }
    GroundElement& operator-=(const GroundElement& o) { return *this = *this - o; }
    GroundElement& operator*=(const GroundElement& o) { return *this = *this * o; }
    /// *this += a * b and *this -= a * b, in place where the representation allows.
    void add_mul(const GroundElement& a, const GroundElement& b);
    void sub_mul(const GroundElement& a, const GroundElement& b);

    friend bool operator==(const GroundElement&, const GroundElement&) = default;

    bool is_rational() const { return std::holds_alternative<Rational>(rep_); }
    const Rational& as_rational() const { return std::get<Rational>(rep_); }
    const RationalFunction& as_function() const { return std::get<RationalFunction>(rep_); }

    /// True when the text form needs parentheses to be used as a factor.
    bool is_compound() const;
    std::string to_string() const;

private:
    std::variant<Rational, RationalFunction> rep_;
};

/// The valued field (K, ν₀): p-adic rationals or k(t) with the t-adic valuation.
class GroundField {
public:
    enum class Kind { PAdic, TAdic };

    static GroundField padic(long p);
    static GroundField tadic_rationals();
    static GroundField tadic_prime(long p);

    Kind kind() const { return kind_; }
    /// The residue characteristic p for PAdic; the coefficient modulus for TAdic.
    unsigned long prime() const { return prime_; }
    CoefficientField coefficients() const;

    GroundElement zero() const;
    GroundElement one() const;
    GroundElement from_integer(const Integer& n) const;
    GroundElement from_rational(const Rational& q) const;
    /// The variable t; only meaningful for TAdic fields.
    GroundElement t() const;
    /// p for PAdic, t for TAdic.
    GroundElement uniformizer() const;

    /// ν₀(a). Throws FieldMismatch when `a` does not belong to this field.
    Value valuation(const GroundElement& a) const;
    bool contains(const GroundElement& a) const;

    std::string to_string() const;

    friend bool operator==(const GroundField&, const GroundField&) = default;

private:
    GroundField(Kind kind, unsigned long prime) : kind_(kind), prime_(prime) {}

    Kind kind_;
    unsigned long prime_;  // 0 for TAdic over Q
};

/// The least common denominator of `elems`: a positive integer for PAdic
/// fields, a monic polynomial in t for TAdic fields. One for an empty list.
GroundElement common_denominator(const GroundField& field, const std::vector<GroundElement>& elems);

bool is_prime(long n);

}  // namespace valkey
