#include "twistorcm/poly.hpp"

#include "twistorcm/errors.hpp"

#include <algorithm>
#include <sstream>

namespace twistorcm::exactalg {

namespace {
const Rational kZero(0);
}

Poly::Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Poly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly Poly::constant(const Rational& c) {
    return Poly(std::vector<Rational>{c});
}

Poly Poly::variable() {
    return Poly(std::vector<Rational>{Rational(0), Rational(1)});
}

Poly Poly::monomial(int degree, const Rational& c) {
    if (degree < 0) throw InvalidInput("monomial with negative degree");
    std::vector<Rational> v(static_cast<size_t>(degree) + 1, Rational(0));
    v.back() = c;
    return Poly(std::move(v));
}

bool Poly::is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }

const Rational& Poly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return kZero;
    return coeffs_[static_cast<size_t>(i)];
}

const Rational& Poly::leading() const {
    if (is_zero()) throw InvalidInput("leading coefficient of zero polynomial");
    return coeffs_.back();
}

Poly Poly::operator-() const {
    std::vector<Rational> v(coeffs_);
    for (auto& c : v) c = -c;
    return Poly(std::move(v));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Rational> v(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) v[i] = coeffs_[i];
    for (size_t i = 0; i < o.coeffs_.size(); ++i) v[i] += o.coeffs_[i];
    return Poly(std::move(v));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<Rational> v(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j)
            v[i + j] += coeffs_[i] * o.coeffs_[j];
    return Poly(std::move(v));
}

Poly Poly::operator*(const Rational& c) const {
    if (c == 0) return Poly();
    std::vector<Rational> v(coeffs_);
    for (auto& x : v) x *= c;
    return Poly(std::move(v));
}

std::pair<Poly, Poly> Poly::divrem(const Poly& divisor) const {
    if (divisor.is_zero()) throw InvalidInput("polynomial division by zero");
    Poly rem = *this;
    const int dd = divisor.degree();
    if (rem.degree() < dd) return {Poly(), rem};
    std::vector<Rational> q(static_cast<size_t>(rem.degree() - dd) + 1, Rational(0));
    const Rational& lead = divisor.leading();
    while (!rem.is_zero() && rem.degree() >= dd) {
        const int k = rem.degree() - dd;
        const Rational f = rem.leading() / lead;
        q[static_cast<size_t>(k)] = f;
        std::vector<Rational> sub(static_cast<size_t>(k), Rational(0));
        for (const auto& c : divisor.coeffs_) sub.push_back(c * f);
        rem = rem - Poly(std::move(sub));
    }
    return {Poly(std::move(q)), rem};
}

Rational Poly::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly Poly::derivative() const {
    if (degree() < 1) return Poly();
    std::vector<Rational> v;
    v.reserve(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) v.push_back(coeffs_[i] * Rational(static_cast<long>(i)));
    return Poly(std::move(v));
}

Poly Poly::monic() const {
    if (is_zero()) throw InvalidInput("monic of zero polynomial");
    return *this * (Rational(1) / leading());
}

Poly Poly::compose_square() const {
    if (is_zero()) return Poly();
    std::vector<Rational> v(2 * coeffs_.size() - 1, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) v[2 * i] = coeffs_[i];
    return Poly(std::move(v));
}

Poly Poly::scale_argument(const Rational& c) const {
    std::vector<Rational> v(coeffs_);
    Rational p(1);
    for (auto& x : v) {
        x *= p;
        p *= c;
    }
    return Poly(std::move(v));
}

Rational Poly::content() const {
    if (is_zero()) throw InvalidInput("content of zero polynomial");
    Integer num_gcd = 0, den_lcm = 1;
    for (const auto& c : coeffs_) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    return make_rational(num_gcd, den_lcm);
}

Poly Poly::primitive_part() const { return *this * (Rational(1) / content()); }

std::string Poly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = coeff(i);
        if (c == 0) continue;
        if (!first) out << (c > 0 ? " + " : " - ");
        else if (c < 0) out << "-";
        const Rational a = abs(c);
        if (i == 0 || a != 1) out << rational_to_string(a);
        if (i > 0) {
            if (a != 1) out << "*";
            out << var;
            if (i > 1) out << "^" << i;
        }
        first = false;
    }
    return out.str();
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x.divrem(y).second;
        // keep the coefficients small; gcd is only defined up to a unit
        if (!r.is_zero()) r = r.primitive_part();
        x = y;
        y = r;
    }
    if (x.is_zero()) return x;
    return x.monic();
}

Poly squarefree_part(const Poly& f) {
    if (f.degree() < 1) return f;
    const Poly g = poly_gcd(f, f.derivative());
    return f.divrem(g).first.monic();
}

Rational resultant(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) throw InvalidInput("resultant of zero polynomial");
    // Res(a, b) via the Euclidean recurrence
    Poly x = a, y = b;
    Rational res(1);
    bool negate = false;
    while (y.degree() > 0) {
        const Poly r = x.divrem(y).second;
        if (r.is_zero()) return Rational(0);
        Rational lead_pow(1);
        for (int i = 0; i < x.degree() - r.degree(); ++i) lead_pow *= y.leading();
        res *= lead_pow;
        if ((x.degree() % 2) == 1 && (y.degree() % 2) == 1) negate = !negate;
        x = y;
        y = r;
    }
    // y is a nonzero constant here (r == 0 handled above)
    Rational tail(1);
    for (int i = 0; i < x.degree(); ++i) tail *= y.leading();
    res *= tail;
    return negate ? -res : res;
}

Rational discriminant(const Poly& f) {
    if (f.degree() < 1) throw InvalidInput("discriminant needs degree >= 1");
    if (f.degree() == 1) return Rational(1);
    const int n = f.degree();
    Rational r = resultant(f, f.derivative()) / f.leading();
    if (((n * (n - 1)) / 2) % 2 == 1) r = -r;
    return r;
}

} // namespace twistorcm::exactalg
