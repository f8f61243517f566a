#include "valkey/poly.hpp"

#include <algorithm>

#include "valkey/error.hpp"

namespace valkey {

Poly::Poly(GroundField field, std::vector<GroundElement> coeffs) : field_(field), coeffs_(std::move(coeffs)) {
    for (const auto& c : coeffs_)
        if (!field_.contains(c)) throw Error(ErrorKind::FieldMismatch, "coefficient outside " + field_.to_string());
    trim();
}

Poly Poly::constant(GroundField field, const GroundElement& c) { return Poly(field, {c}); }

Poly Poly::x(GroundField field) { return Poly(field, {field.zero(), field.one()}); }

Poly Poly::monomial(GroundField field, const GroundElement& c, int n) {
    std::vector<GroundElement> coeffs(static_cast<std::size_t>(n) + 1, field.zero());
    coeffs.back() = c;
    return Poly(field, std::move(coeffs));
}

void Poly::trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

void Poly::require_same_field(const Poly& o) const {
    if (!(field_ == o.field_))
        throw Error(ErrorKind::FieldMismatch, "polynomials over " + field_.to_string() + " and " + o.field_.to_string());
}

GroundElement Poly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return field_.zero();
    return coeffs_[static_cast<std::size_t>(i)];
}

Poly Poly::operator+(const Poly& o) const {
    require_same_field(o);
    if (o.is_zero()) return *this;
    if (is_zero()) return o;
    Poly r(field_);
    std::size_t n = std::max(coeffs_.size(), o.coeffs_.size());
    r.coeffs_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < coeffs_.size() && i < o.coeffs_.size()) r.coeffs_.push_back(coeffs_[i] + o.coeffs_[i]);
        else r.coeffs_.push_back(i < coeffs_.size() ? coeffs_[i] : o.coeffs_[i]);
    }
    r.trim();
    return r;
}

Poly Poly::operator-() const {
    Poly r(field_);
    r.coeffs_.reserve(coeffs_.size());
    for (const auto& c : coeffs_) r.coeffs_.push_back(-c);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    require_same_field(o);
    if (is_zero() || o.is_zero()) return Poly(field_);
    std::vector<GroundElement> r(coeffs_.size() + o.coeffs_.size() - 1, field_.zero());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
            if (o.coeffs_[j].is_zero()) continue;
            r[i + j].add_mul(coeffs_[i], o.coeffs_[j]);
        }
    }
    Poly p(field_);
    p.coeffs_ = std::move(r);
    p.trim();
    return p;
}

Poly Poly::operator*(const GroundElement& c) const {
    if (!field_.contains(c)) throw Error(ErrorKind::FieldMismatch, "scalar outside " + field_.to_string());
    if (c.is_zero()) return Poly(field_);
    Poly r(field_);
    r.coeffs_.reserve(coeffs_.size());
    for (const auto& a : coeffs_) r.coeffs_.push_back(a * c);
    r.trim();
    return r;
}

Poly Poly::pow(unsigned n) const {
    Poly result = constant(field_, field_.one());
    Poly base = *this;
    while (n > 0) {
        if (n & 1U) result = result * base;
        n >>= 1U;
        if (n > 0) base = base * base;
    }
    return result;
}

std::string Poly::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const GroundElement& c = coeffs_[i];
        if (c.is_zero()) continue;
        std::string power = i == 0 ? "" : (i == 1 ? "x" : "x^" + std::to_string(i));
        std::string term;
        if (i == 0) {
            term = c.to_string();
            if (c.is_compound() && !first) term = "(" + term + ")";
        } else if (c.is_one()) {
            term = power;
        } else if ((-c).is_one()) {
            term = "-" + power;
        } else if (c.is_compound() && !(-c).is_compound()) {
            term = "-" + (-c).to_string() + "*" + power;
        } else {
            std::string ct = c.to_string();
            term = (c.is_compound() ? "(" + ct + ")" : ct) + "*" + power;
        }
        if (first) {
            out = term;
        } else if (term.starts_with("-")) {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
        first = false;
    }
    return out;
}

Division euclid_divide(const Poly& f, const Poly& q) {
    if (q.is_zero()) throw Error(ErrorKind::DivisionByZero, "Euclidean division by the zero polynomial");
    if (!(f.field() == q.field())) throw Error(ErrorKind::FieldMismatch, "division across ground fields");
    const GroundField& field = f.field();
    if (f.degree() < q.degree()) return {Poly(field), f};

    std::vector<GroundElement> rem = f.coeffs();
    const auto& qc = q.coeffs();
    std::size_t n = qc.size();
    std::vector<GroundElement> quot(rem.size() - n + 1, field.zero());
    const bool monic = q.is_monic();
    GroundElement lead_inv = monic ? field.one() : field.one() / q.leading();
    for (std::size_t shift = quot.size(); shift-- > 0;) {
        const GroundElement& top = rem[shift + n - 1];
        if (top.is_zero()) continue;
        GroundElement c = monic ? top : top * lead_inv;
        for (std::size_t j = 0; j + 1 < n; ++j)
            if (!qc[j].is_zero()) rem[shift + j].sub_mul(c, qc[j]);
        rem[shift + n - 1] = field.zero();
        quot[shift] = std::move(c);
    }
    rem.resize(n - 1, field.zero());
    return {Poly(field, std::move(quot)), Poly(field, std::move(rem))};
}

Poly QExpansion::reconstruct() const {
    Poly acc(base.field());
    for (std::size_t i = parts.size(); i-- > 0;) acc = acc * base + parts[i];
    return acc;
}

QExpansion q_expansion(const Poly& f, const Poly& q) {
    if (q.degree() < 1)
        throw Error(ErrorKind::InvalidBase, "q-expansion needs a base of degree >= 1, got " + q.to_string());
    QExpansion out{q, {}};
    // Expand the denominator-free multiple D*f and divide the parts by D.
    GroundElement den = f.field().kind() == GroundField::Kind::TAdic ? common_denominator(f.field(), f.coeffs()) : f.field().one();
    Poly rest = den.is_one() ? f : f * den;
    while (!rest.is_zero()) {
        Division d = euclid_divide(rest, q);
        out.parts.push_back(std::move(d.remainder));
        rest = std::move(d.quotient);
    }
    if (!den.is_one()) {
        GroundElement inv = f.field().one() / den;
        for (auto& part : out.parts) part = part * inv;
    }
    return out;
}

Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Poly hasse_derivative(const Poly& f, int k) {
    if (k < 0) throw Error(ErrorKind::InvalidOrder, "Hasse derivative of negative order " + std::to_string(k));
    const GroundField& field = f.field();
    if (k > f.degree()) return Poly(field);
    std::vector<GroundElement> out;
    out.reserve(static_cast<std::size_t>(f.degree() - k + 1));
    for (int n = k; n <= f.degree(); ++n) {
        const GroundElement& c = f.coeffs()[static_cast<std::size_t>(n)];
        if (c.is_zero()) {
            out.push_back(field.zero());
            continue;
        }
        out.push_back(c * field.from_integer(binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(k))));
    }
    return Poly(field, std::move(out));
}

}  // namespace valkey
