#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace valkey {

using Integer = mpz_class;
using Rational = mpq_class;

/// An element of Q ∪ {∞}, the value group every valuation here lands in.
/// Finite values are kept in lowest terms (GMP canonicalizes on every op).
class Value {
public:
    Value() : infinite_(false), q_(0) {}
    Value(long n) : infinite_(false), q_(n) {}  // NOLINT(google-explicit-constructor)
    Value(const Rational& q) : infinite_(false), q_(q) { q_.canonicalize(); }  // NOLINT
    Value(long num, long den);

    static Value infinity() {
        Value v;
        v.infinite_ = true;
        return v;
    }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }

    /// Throws if the value is infinite.
    const Rational& rational() const;

    Value operator+(const Value& other) const;
    Value operator-(const Value& other) const;  // finite - finite only
    Value& operator+=(const Value& other) { return *this = *this + other; }

    /// Multiplies by a rational; infinity requires a positive factor.
    Value scale(const Rational& factor) const;

    friend bool operator==(const Value& a, const Value& b);
    friend std::strong_ordering operator<=>(const Value& a, const Value& b);

    std::string to_string() const;
    /// Accepts "inf", "n" and "n/d".
    static Value parse(std::string_view text);

private:
    bool infinite_;
    Rational q_;
};

inline const Value& min(const Value& a, const Value& b) { return b < a ? b : a; }
inline const Value& max(const Value& a, const Value& b) { return a < b ? b : a; }

inline std::ostream& operator<<(std::ostream& os, const Value& v) { return os << v.to_string(); }

/// Canonical text for a rational: "n" or "n/d".
std::string rational_to_string(const Rational& q);
Rational parse_rational(std::string_view text);

}  // namespace valkey
