#include "valkey/ground.hpp"

#include <algorithm>
#include <utility>

#include "valkey/error.hpp"

namespace valkey {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// --- CoefficientField -------------------------------------------------------

Rational CoefficientField::reduce(const Rational& a) const {
    if (modulus_ == 0) return a;
    Integer m(modulus_);
    Integer num = a.get_num() % m;
    if (num < 0) num += m;
    if (a.get_den() == 1) return Rational(num);
    Integer den = a.get_den() % m;
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "denominator divisible by the characteristic");
    Integer inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    Integer r = (num * inv) % m;
    return Rational(r);
}

Rational CoefficientField::add(const Rational& a, const Rational& b) const {
    if (modulus_ == 0) return a + b;
    Integer r = (a.get_num() + b.get_num()) % Integer(modulus_);
    return Rational(r);
}

Rational CoefficientField::sub(const Rational& a, const Rational& b) const {
    if (modulus_ == 0) return a - b;
    Integer m(modulus_);
    Integer r = (a.get_num() - b.get_num()) % m;
    if (r < 0) r += m;
    return Rational(r);
}

Rational CoefficientField::mul(const Rational& a, const Rational& b) const {
    if (modulus_ == 0) return a * b;
    Integer r = (a.get_num() * b.get_num()) % Integer(modulus_);
    return Rational(r);
}

Rational CoefficientField::neg(const Rational& a) const {
    if (modulus_ == 0) return -a;
    if (a == 0) return a;
    return Rational(Integer(modulus_) - a.get_num());
}

Rational CoefficientField::inv(const Rational& a) const {
    if (a == 0) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    if (modulus_ == 0) return 1 / a;
    Integer m(modulus_), r;
    mpz_invert(r.get_mpz_t(), a.get_num().get_mpz_t(), m.get_mpz_t());
    return Rational(r);
}

// --- polynomials in t ------------------------------------------------------

namespace {

using Coeffs = RationalFunction::Coeffs;

void trim(Coeffs& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Coeffs add(const Coeffs& a, const Coeffs& b, CoefficientField k) {
    const Coeffs& longer = a.size() >= b.size() ? a : b;
    const Coeffs& shorter = a.size() >= b.size() ? b : a;
    Coeffs r(longer);
    for (std::size_t i = 0; i < shorter.size(); ++i) r[i] += shorter[i];
    if (!k.is_rationals())
        for (auto& c : r) c = k.reduce(c);
    trim(r);
    return r;
}

Coeffs negate(const Coeffs& a, CoefficientField k) {
    Coeffs r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = k.neg(a[i]);
    return r;
}

Coeffs mul(const Coeffs& a, const Coeffs& b, CoefficientField k) {
    if (a.empty() || b.empty()) return {};
    Coeffs r(a.size() + b.size() - 1);
    Rational term;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            mpq_mul(term.get_mpq_t(), a[i].get_mpq_t(), b[j].get_mpq_t());
            r[i + j] += term;
        }
    }
    if (!k.is_rationals())
        for (auto& c : r) c = k.reduce(c);
    trim(r);
    return r;
}

Coeffs scale(const Coeffs& a, const Rational& c, CoefficientField k) {
    Coeffs r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = k.mul(a[i], c);
    trim(r);
    return r;
}

bool is_unit_poly(const Coeffs& a) { return a.size() == 1 && a[0] == 1; }

std::size_t t_order(const Coeffs& a) {
    std::size_t i = 0;
    while (i < a.size() && a[i] == 0) ++i;
    return i;
}

bool is_monomial(const Coeffs& a) { return !a.empty() && t_order(a) + 1 == a.size(); }

Coeffs t_power(std::size_t e) {
    Coeffs r(e + 1);
    r[e] = 1;
    return r;
}

Coeffs shifted(const Coeffs& a, std::size_t e) {
    if (e == 0 || a.empty()) return a;
    Coeffs r(a.size() + e);
    std::copy(a.begin(), a.end(), r.begin() + static_cast<long>(e));
    return r;
}

// num / t^j in lowest terms; num is trimmed and nonzero.
std::pair<Coeffs, Coeffs> cancel_t_power(Coeffs num, std::size_t j) {
    std::size_t e = std::min(t_order(num), j);
    if (e > 0) num.erase(num.begin(), num.begin() + static_cast<long>(e));
    return {std::move(num), t_power(j - e)};
}

// Exact division with remainder; b must be nonzero.
std::pair<Coeffs, Coeffs> divmod(Coeffs a, const Coeffs& b, CoefficientField k) {
    if (a.size() < b.size()) return {{}, std::move(a)};
    Rational lead_inv = k.inv(b.back());
    Coeffs q(a.size() - b.size() + 1);
    for (std::size_t shift = q.size(); shift-- > 0;) {
        const Rational& top = a[shift + b.size() - 1];
        if (top == 0) continue;
        Rational c = k.mul(top, lead_inv);
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = k.sub(a[shift + j], k.mul(c, b[j]));
    }
    trim(q);
    trim(a);
    return {std::move(q), std::move(a)};
}

Coeffs make_monic(const Coeffs& a, CoefficientField k) {
    if (a.empty() || a.back() == 1) return a;
    return scale(a, k.inv(a.back()), k);
}

Coeffs gcd(Coeffs a, Coeffs b, CoefficientField k) {
    if (b.empty()) return make_monic(a, k);
    if (a.empty()) return make_monic(b, k);
    // Monomial fast path: gcd(t^i * u, t^j) = t^min(i, j) when t^j is a pure power.
    if (is_monomial(b) && b.back() != 0) {
        std::size_t e = std::min(t_order(a), b.size() - 1);
        Coeffs r(e + 1);
        r[e] = 1;
        return r;
    }
    if (is_monomial(a)) return gcd(std::move(b), std::move(a), k);
    while (!b.empty()) {
        auto [q, r] = divmod(std::move(a), b, k);
        a = std::move(b);
        b = make_monic(r, k);
    }
    return make_monic(a, k);
}

std::string coeffs_to_string(const Coeffs& a, char var) {
    if (a.empty()) return "0";
    std::string out;
    bool first = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        Rational c = a[i];
        bool negative = c < 0;
        if (negative) c = -c;
        std::string mono;
        if (i == 0) {
            mono = rational_to_string(c);
        } else {
            std::string power = std::string(1, var) + (i == 1 ? "" : "^" + std::to_string(i));
            mono = (c == 1) ? power : rational_to_string(c) + "*" + power;
        }
        if (first) out = negative ? "-" + mono : mono;
        else out += (negative ? " - " : " + ") + mono;
        first = false;
    }
    return out;
}

}  // namespace

// --- RationalFunction ------------------------------------------------------

RationalFunction RationalFunction::normalized(Coeffs num, Coeffs den, CoefficientField field) {
    for (auto& c : num) c = field.reduce(c);
    for (auto& c : den) c = field.reduce(c);
    trim(num);
    trim(den);
    if (den.empty()) throw Error(ErrorKind::DivisionByZero, "rational function with zero denominator");
    if (num.empty()) return RationalFunction({}, {Rational(1)}, field);
    if (is_monomial(den)) {
        if (den.back() != 1) num = scale(num, field.inv(den.back()), field);
        auto [n, d] = cancel_t_power(std::move(num), den.size() - 1);
        return RationalFunction(std::move(n), std::move(d), field);
    }
    if (!is_unit_poly(den)) {
        Coeffs g = gcd(num, den, field);
        if (!is_unit_poly(g)) {
            num = divmod(std::move(num), g, field).first;
            den = divmod(std::move(den), g, field).first;
        }
        if (den.back() != 1) {
            Rational c = field.inv(den.back());
            num = scale(num, c, field);
            den = scale(den, c, field);
        }
    }
    return RationalFunction(std::move(num), std::move(den), field);
}

RationalFunction RationalFunction::from_reduced(Coeffs num, Coeffs den, CoefficientField field) {
    for (const auto& c : num)
        if (field.reduce(c) != c)
            throw Error(ErrorKind::InvalidInput, "coefficient is not a canonical field element");
    for (const auto& c : den)
        if (field.reduce(c) != c)
            throw Error(ErrorKind::InvalidInput, "coefficient is not a canonical field element");
    if (den.empty() || den.back() == 0)
        throw Error(ErrorKind::DivisionByZero, "rational function with zero or untrimmed denominator");
    if (!num.empty() && num.back() == 0)
        throw Error(ErrorKind::InvalidInput, "numerator has trailing zero coefficients");
    if (den.back() != 1) throw Error(ErrorKind::InvalidInput, "denominator is not monic");
    if (num.empty() && !is_unit_poly(den)) throw Error(ErrorKind::InvalidInput, "zero must be written 0/1");
    if (!num.empty() && !is_unit_poly(gcd(num, den, field)))
        throw Error(ErrorKind::InvalidInput, "rational function is not reduced");
    return RationalFunction(std::move(num), std::move(den), field);
}

RationalFunction RationalFunction::constant(const Rational& c, CoefficientField field) {
    Rational r = field.reduce(c);
    Coeffs num;
    if (r != 0) num.push_back(r);
    return RationalFunction(std::move(num), {Rational(1)}, field);
}

Value RationalFunction::order() const {
    if (num_.empty()) return Value::infinity();
    return Value(static_cast<long>(t_order(num_)) - static_cast<long>(t_order(den_)));
}

namespace {
void require_same(CoefficientField a, CoefficientField b) {
    if (!(a == b)) throw Error(ErrorKind::FieldMismatch, "rational functions over different coefficient fields");
}
}  // namespace

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    require_same(field_, o.field_);
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) {
        Coeffs n = add(num_, o.num_, field_);
        if (is_unit_poly(den_)) return RationalFunction(std::move(n), den_, field_);
        return normalized(std::move(n), den_, field_);
    }
    if (is_monomial(den_) && is_monomial(o.den_)) {
        std::size_t j = den_.size() - 1, k = o.den_.size() - 1, m = std::max(j, k);
        Coeffs n = add(shifted(num_, m - j), shifted(o.num_, m - k), field_);
        if (n.empty()) return constant(0, field_);
        auto [rn, rd] = cancel_t_power(std::move(n), m);
        return RationalFunction(std::move(rn), std::move(rd), field_);
    }
    // With g = gcd(den, o.den), only g can share factors with the new numerator.
    Coeffs g = gcd(den_, o.den_, field_);
    Coeffs a = is_unit_poly(g) ? o.den_ : divmod(o.den_, g, field_).first;
    Coeffs b = is_unit_poly(g) ? den_ : divmod(den_, g, field_).first;
    Coeffs n = add(mul(num_, a, field_), mul(o.num_, b, field_), field_);
    if (n.empty()) return constant(0, field_);
    Coeffs d = mul(den_, a, field_);
    if (!is_unit_poly(g)) {
        Coeffs h = gcd(n, g, field_);
        if (!is_unit_poly(h)) {
            n = divmod(std::move(n), h, field_).first;
            d = divmod(std::move(d), h, field_).first;
        }
    }
    return RationalFunction(std::move(n), std::move(d), field_);
}

RationalFunction RationalFunction::operator-() const {
    return RationalFunction(negate(num_, field_), den_, field_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const { return *this + (-o); }

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    require_same(field_, o.field_);
    if (is_zero() || o.is_zero()) return constant(0, field_);
    if (is_unit_poly(den_) && is_unit_poly(o.den_))
        return RationalFunction(mul(num_, o.num_, field_), den_, field_);
    if (is_monomial(den_) && is_monomial(o.den_)) {
        auto [n, d] = cancel_t_power(mul(num_, o.num_, field_), den_.size() + o.den_.size() - 2);
        return RationalFunction(std::move(n), std::move(d), field_);
    }
    // A polynomial factor that the other denominator divides exactly.
    for (auto [a, b] : {std::pair{this, &o}, std::pair{&o, this}}) {
        if (!is_unit_poly(a->den_) || is_unit_poly(b->den_)) continue;
        auto [q, r] = divmod(a->num_, b->den_, field_);
        if (r.empty()) return RationalFunction(mul(q, b->num_, field_), {Rational(1)}, field_);
    }
    // Cross-cancel so the result needs no further reduction beyond monicity.
    Coeffs g1 = gcd(num_, o.den_, field_);
    Coeffs g2 = gcd(o.num_, den_, field_);
    Coeffs n1 = is_unit_poly(g1) ? num_ : divmod(num_, g1, field_).first;
    Coeffs d2 = is_unit_poly(g1) ? o.den_ : divmod(o.den_, g1, field_).first;
    Coeffs n2 = is_unit_poly(g2) ? o.num_ : divmod(o.num_, g2, field_).first;
    Coeffs d1 = is_unit_poly(g2) ? den_ : divmod(den_, g2, field_).first;
    Coeffs n = mul(n1, n2, field_);
    Coeffs d = mul(d1, d2, field_);
    if (d.back() != 1) {
        Rational c = field_.inv(d.back());
        n = scale(n, c, field_);
        d = scale(d, c, field_);
    }
    return RationalFunction(std::move(n), std::move(d), field_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    require_same(field_, o.field_);
    if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by the zero rational function");
    Coeffs n = o.den_;
    Coeffs d = o.num_;
    Rational c = field_.inv(d.back());
    RationalFunction inverse(scale(n, c, field_), scale(d, c, field_), field_);
    return *this * inverse;
}

std::string RationalFunction::to_string() const {
    if (is_unit_poly(den_)) return coeffs_to_string(num_, 't');
    return "(" + coeffs_to_string(num_, 't') + ")/(" + coeffs_to_string(den_, 't') + ")";
}

GroundElement common_denominator(const GroundField& field, const std::vector<GroundElement>& elems) {
    if (field.kind() == GroundField::Kind::PAdic) {
        Integer d(1);
        for (const auto& e : elems) {
            const Integer& den = e.as_rational().get_den();
            if (den != 1) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), den.get_mpz_t());
        }
        return GroundElement(Rational(d));
    }
    CoefficientField k = field.coefficients();
    Coeffs d{Rational(1)};
    for (const auto& e : elems) {
        const Coeffs& den = e.as_function().denominator();
        if (is_unit_poly(den)) continue;
        if (is_monomial(d) && is_monomial(den)) {
            if (den.size() > d.size()) d = den;
            continue;
        }
        Coeffs g = gcd(d, den, k);
        d = mul(d, is_unit_poly(g) ? den : divmod(den, g, k).first, k);
    }
    return GroundElement(RationalFunction::from_reduced(std::move(d), {Rational(1)}, k));
}

// --- GroundElement ---------------------------------------------------------

namespace {

template <typename Op>
GroundElement combine(const std::variant<Rational, RationalFunction>& a,
                      const std::variant<Rational, RationalFunction>& b, Op op) {
    if (a.index() != b.index())
        throw Error(ErrorKind::FieldMismatch, "ground elements from different fields");
    if (a.index() == 0) return GroundElement(Rational(op(std::get<0>(a), std::get<0>(b))));
    return GroundElement(op(std::get<1>(a), std::get<1>(b)));
}

}  // namespace

bool GroundElement::is_zero() const {
    if (auto q = std::get_if<Rational>(&rep_)) return *q == 0;
    return std::get<RationalFunction>(rep_).is_zero();
}

bool GroundElement::is_one() const {
    if (auto q = std::get_if<Rational>(&rep_)) return *q == 1;
    const auto& f = std::get<RationalFunction>(rep_);
    return is_unit_poly(f.numerator()) && is_unit_poly(f.denominator());
}

GroundElement GroundElement::operator+(const GroundElement& o) const {
    return combine(rep_, o.rep_, [](const auto& x, const auto& y) { return x + y; });
}

GroundElement GroundElement::operator-(const GroundElement& o) const {
    return combine(rep_, o.rep_, [](const auto& x, const auto& y) { return x - y; });
}

GroundElement GroundElement::operator*(const GroundElement& o) const {
    return combine(rep_, o.rep_, [](const auto& x, const auto& y) { return x * y; });
}

GroundElement GroundElement::operator/(const GroundElement& o) const {
    if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero in K");
    return combine(rep_, o.rep_, [](const auto& x, const auto& y) { return x / y; });
}

void GroundElement::add_mul(const GroundElement& a, const GroundElement& b) {
    auto* q = std::get_if<Rational>(&rep_);
    if (q && a.is_rational() && b.is_rational()) {
        thread_local Rational term;
        mpq_mul(term.get_mpq_t(), a.as_rational().get_mpq_t(), b.as_rational().get_mpq_t());
        *q += term;
        return;
    }
    *this = *this + a * b;
}

void GroundElement::sub_mul(const GroundElement& a, const GroundElement& b) {
    auto* q = std::get_if<Rational>(&rep_);
    if (q && a.is_rational() && b.is_rational()) {
        thread_local Rational term;
        mpq_mul(term.get_mpq_t(), a.as_rational().get_mpq_t(), b.as_rational().get_mpq_t());
        *q -= term;
        return;
    }
    *this = *this - a * b;
}

GroundElement GroundElement::operator-() const {
    if (auto q = std::get_if<Rational>(&rep_)) return GroundElement(Rational(-*q));
    return GroundElement(-std::get<RationalFunction>(rep_));
}

bool GroundElement::is_compound() const {
    if (auto q = std::get_if<Rational>(&rep_)) return *q < 0 || q->get_den() != 1;
    const auto& f = std::get<RationalFunction>(rep_);
    if (!is_unit_poly(f.denominator())) return true;
    const auto& n = f.numerator();
    if (n.empty()) return false;
    std::size_t nonzero = 0;
    for (const auto& c : n) nonzero += (c != 0);
    if (nonzero > 1) return true;
    const Rational& c = n.back();
    return c < 0 || c.get_den() != 1;
}

std::string GroundElement::to_string() const {
    if (auto q = std::get_if<Rational>(&rep_)) return rational_to_string(*q);
    return std::get<RationalFunction>(rep_).to_string();
}

// --- GroundField -----------------------------------------------------------

GroundField GroundField::padic(long p) {
    if (!is_prime(p)) throw Error(ErrorKind::InvalidInput, "p-adic field needs a prime, got " + std::to_string(p));
    return GroundField(Kind::PAdic, static_cast<unsigned long>(p));
}

GroundField GroundField::tadic_rationals() { return GroundField(Kind::TAdic, 0); }

GroundField GroundField::tadic_prime(long p) {
    if (!is_prime(p)) throw Error(ErrorKind::InvalidInput, "GF(p) needs a prime, got " + std::to_string(p));
    return GroundField(Kind::TAdic, static_cast<unsigned long>(p));
}

CoefficientField GroundField::coefficients() const {
    return CoefficientField(kind_ == Kind::TAdic ? prime_ : 0);
}

GroundElement GroundField::zero() const { return from_rational(Rational(0)); }
GroundElement GroundField::one() const { return from_rational(Rational(1)); }

GroundElement GroundField::from_integer(const Integer& n) const { return from_rational(Rational(n)); }

GroundElement GroundField::from_rational(const Rational& q) const {
    if (kind_ == Kind::PAdic) {
        Rational r = q;
        r.canonicalize();
        return GroundElement(std::move(r));
    }
    return GroundElement(RationalFunction::constant(q, coefficients()));
}

GroundElement GroundField::t() const {
    if (kind_ != Kind::TAdic) throw Error(ErrorKind::FieldMismatch, "t is not an element of " + to_string());
    return GroundElement(RationalFunction::normalized({Rational(0), Rational(1)}, {Rational(1)}, coefficients()));
}

GroundElement GroundField::uniformizer() const {
    return kind_ == Kind::PAdic ? from_integer(Integer(prime_)) : t();
}

bool GroundField::contains(const GroundElement& a) const {
    if (kind_ == Kind::PAdic) return a.is_rational();
    return !a.is_rational() && a.as_function().field() == coefficients();
}

Value GroundField::valuation(const GroundElement& a) const {
    if (!contains(a)) throw Error(ErrorKind::FieldMismatch, "element does not belong to " + to_string());
    if (kind_ == Kind::TAdic) return a.as_function().order();
    const Rational& q = a.as_rational();
    if (q == 0) return Value::infinity();
    Integer p(prime_);
    Integer rest;
    long vnum = static_cast<long>(mpz_remove(rest.get_mpz_t(), q.get_num().get_mpz_t(), p.get_mpz_t()));
    long vden = static_cast<long>(mpz_remove(rest.get_mpz_t(), q.get_den().get_mpz_t(), p.get_mpz_t()));
    return Value(vnum - vden);
}

std::string GroundField::to_string() const {
    if (kind_ == Kind::PAdic) return "PAdic(" + std::to_string(prime_) + ")";
    if (prime_ == 0) return "TAdic(Q)";
    return "TAdic(GF(" + std::to_string(prime_) + "))";
}

}  // namespace valkey
