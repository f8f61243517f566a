#include "valkey/value.hpp"

#include "valkey/error.hpp"

namespace valkey {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::InvalidBase: return "InvalidBase";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::NotStabilized: return "NotStabilized";
    case ErrorKind::Precondition: return "Precondition";
    case ErrorKind::PsiEmpty: return "PsiEmpty";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::UndefinedEpsilon: return "UndefinedEpsilon";
    case ErrorKind::NoInitialForm: return "NoInitialForm";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

Value::Value(long num, long den) : infinite_(false) {
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "value with zero denominator");
    q_ = Rational(num, den);
    q_.canonicalize();
}

const Rational& Value::rational() const {
    if (infinite_) throw Error(ErrorKind::InvalidInput, "infinite value has no rational part");
    return q_;
}

Value Value::operator+(const Value& other) const {
    if (infinite_ || other.infinite_) return infinity();
    Value r;
    mpq_add(r.q_.get_mpq_t(), q_.get_mpq_t(), other.q_.get_mpq_t());
    return r;
}

Value Value::operator-(const Value& other) const {
    if (infinite_ || other.infinite_)
        throw Error(ErrorKind::InvalidInput, "subtraction involving infinity is undefined");
    Value r;
    mpq_sub(r.q_.get_mpq_t(), q_.get_mpq_t(), other.q_.get_mpq_t());
    return r;
}

Value Value::scale(const Rational& factor) const {
    if (infinite_) {
        if (sgn(factor) <= 0)
            throw Error(ErrorKind::InvalidInput, "infinity scaled by a non-positive factor");
        return infinity();
    }
    Value r;
    mpq_mul(r.q_.get_mpq_t(), q_.get_mpq_t(), factor.get_mpq_t());
    return r;
}

bool operator==(const Value& a, const Value& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.q_ == b.q_;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.infinite_ || b.infinite_) {
        if (a.infinite_ == b.infinite_) return std::strong_ordering::equal;
        return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    int c = cmp(a.q_, b.q_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string rational_to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool valid_integer(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

Integer integer_from(std::string_view s) {
    if (!valid_integer(s))
        throw Error(ErrorKind::InvalidInput, "malformed integer '" + std::string(s) + "'");
    if (s[0] == '+') s.remove_prefix(1);
    return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(integer_from(text));
    Integer num = integer_from(text.substr(0, slash));
    Integer den = integer_from(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string Value::to_string() const { return infinite_ ? "inf" : rational_to_string(q_); }

Value Value::parse(std::string_view text) {
    if (text == "inf" || text == "Infinity" || text == "infinity") return infinity();
    return Value(parse_rational(text));
}

}  // namespace valkey
