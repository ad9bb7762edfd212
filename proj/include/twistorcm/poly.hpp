#ifndef TWISTORCM_POLY_HPP
#define TWISTORCM_POLY_HPP

#include "twistorcm/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace twistorcm::exactalg {

/// Dense univariate polynomial over the rationals, coefficients stored lowest
/// degree first with no trailing zeros.  The zero polynomial has an empty
/// coefficient vector and degree -1.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs);
    static Poly zero() { return Poly(); }
    static Poly constant(const Rational& c);
    static Poly variable();                       // X
    static Poly monomial(int degree, const Rational& c);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_one() const;
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    const Rational& coeff(int i) const;           // 0 outside range
    const Rational& leading() const;              // requires nonzero

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rational& c) const;
    bool operator==(const Poly& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    /// Quotient and remainder; divisor must be nonzero.
    std::pair<Poly, Poly> divrem(const Poly& divisor) const;

    Rational eval(const Rational& x) const;
    Poly derivative() const;
    Poly monic() const;                           // requires nonzero
    /// Substitute X -> X^2.
    Poly compose_square() const;
    /// Substitute X -> c*X.
    Poly scale_argument(const Rational& c) const;

    /// Positive rational c such that (1/c) * poly is primitive integral.
    Rational content() const;                     // requires nonzero
    Poly primitive_part() const;

    std::string to_string(const std::string& var = "X") const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

Poly poly_gcd(const Poly& a, const Poly& b);      // monic gcd
Poly squarefree_part(const Poly& f);              // f / gcd(f, f'), monic

/// Resultant of two nonzero polynomials (Euclidean algorithm form).
Rational resultant(const Poly& a, const Poly& b);
/// disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f).
Rational discriminant(const Poly& f);

} // namespace twistorcm::exactalg

#endif
