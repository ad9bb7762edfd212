#ifndef TWISTORCM_ROOTS_HPP
#define TWISTORCM_ROOTS_HPP

#include "twistorcm/poly.hpp"

#include <optional>
#include <vector>

namespace twistorcm::exactalg {

/// Closed interval with exact rational endpoints.
struct QInterval {
    Rational lo, hi;
    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / 2; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

QInterval interval_add(const QInterval& a, const QInterval& b);
QInterval interval_sub(const QInterval& a, const QInterval& b);
QInterval interval_mul(const QInterval& a, const QInterval& b);
QInterval interval_scale(const QInterval& a, const Rational& c);
/// Enclosure of f over the interval (interval Horner).
QInterval interval_eval(const Poly& f, const QInterval& x);
/// Enclosure of sqrt over [max(lo,0), hi]; caller guarantees the true value
/// is nonnegative.  `bits` controls the output granularity.
QInterval interval_sqrt(const QInterval& a, int bits);
/// [l, u] with l <= sqrt(q) <= u and u - l <= 2^-bits, for q >= 0.
QInterval rational_sqrt_enclosure(const Rational& q, int bits);

/// Width-capped refinement policy for all certified interval computations.
struct PrecisionPolicy {
    int start_bits = 128;
    int cap_bits = 4096;
};

/// Sturm chain of the squarefree part of f.
class SturmChain {
public:
    explicit SturmChain(const Poly& f);
    const Poly& poly() const { return sqfree_; }
    /// Number of real roots in (a, b].
    int count(const Rational& a, const Rational& b) const;
    int count_all() const;
    /// Strict upper bound on the absolute value of every complex root.
    Rational root_bound() const;

private:
    int variations(const Rational& x) const;
    Poly sqfree_;
    std::vector<Poly> chain_;
};

/// Certificate for the real-root count of a squarefree polynomial: pairwise
/// disjoint open isolating intervals with non-root rational endpoints, one per
/// real root, sorted increasingly.
struct RealRootCertificate {
    Poly polynomial;   // squarefree part actually isolated
    int count = 0;
    std::vector<QInterval> isolating_intervals;
};

/// Sturm count plus isolating intervals.  The squarefree part is taken first.
RealRootCertificate count_real_roots(const Poly& f);

/// Halve an isolating interval of `f` (simple root, sign change across it).
QInterval bisect_once(const Poly& f, const QInterval& iv);
/// Refine an isolating interval until width <= 2^-bits.
QInterval refine_to_width(const Poly& f, QInterval iv, int bits);

} // namespace twistorcm::exactalg

#endif
