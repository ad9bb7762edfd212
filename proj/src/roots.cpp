#include "twistorcm/roots.hpp"

#include "twistorcm/errors.hpp"

#include <algorithm>

namespace twistorcm::exactalg {

QInterval interval_add(const QInterval& a, const QInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
QInterval interval_sub(const QInterval& a, const QInterval& b) { return {a.lo - b.hi, a.hi - b.lo}; }

QInterval interval_mul(const QInterval& a, const QInterval& b) {
    const Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)), std::max(std::max(p1, p2), std::max(p3, p4))};
}

QInterval interval_scale(const QInterval& a, const Rational& c) {
    if (c >= 0) return {a.lo * c, a.hi * c};
    return {a.hi * c, a.lo * c};
}

QInterval interval_eval(const Poly& f, const QInterval& x) {
    QInterval acc{Rational(0), Rational(0)};
    for (int i = f.degree(); i >= 0; --i) {
        acc = interval_mul(acc, x);
        acc.lo += f.coeff(i);
        acc.hi += f.coeff(i);
    }
    return acc;
}

QInterval rational_sqrt_enclosure(const Rational& q, int bits) {
    if (q < 0) throw InvalidInput("sqrt enclosure of negative rational");
    if (q == 0) return {Rational(0), Rational(0)};
    // floor(sqrt(q * 4^k)) / 2^k brackets sqrt(q) within 2^-k
    Integer scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * bits));
    Integer scaled;  // floor(q * 4^bits)
    Integer num = q.get_num() * scale;
    mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
    Integer root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    Integer denom = 1;
    mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    return {make_rational(root, denom), make_rational(root + 1, denom)};
}

QInterval interval_sqrt(const QInterval& a, int bits) {
    const Rational lo = a.lo < 0 ? Rational(0) : a.lo;
    if (a.hi < 0) throw InvalidInput("sqrt of negative interval");
    return {rational_sqrt_enclosure(lo, bits).lo, rational_sqrt_enclosure(a.hi, bits).hi};
}

SturmChain::SturmChain(const Poly& f) {
    if (f.degree() < 0) throw InvalidInput("Sturm chain of zero polynomial");
    sqfree_ = f.degree() == 0 ? f.monic() : squarefree_part(f);
    chain_.push_back(sqfree_);
    if (sqfree_.degree() >= 1) chain_.push_back(sqfree_.derivative());
    while (chain_.back().degree() >= 1) {
        Poly r = chain_[chain_.size() - 2].divrem(chain_.back()).second;
        if (r.is_zero()) break;
        // primitive_part divides by a positive scalar, so signs are preserved
        r = (-r).primitive_part();
        chain_.push_back(std::move(r));
    }
}

int SturmChain::variations(const Rational& x) const {
    int var = 0, prev = 0;
    for (const auto& p : chain_) {
        const int s = sign_of(p.eval(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

int SturmChain::count(const Rational& a, const Rational& b) const {
    if (a > b) throw InvalidInput("Sturm count with reversed interval");
    return variations(a) - variations(b);
}

Rational SturmChain::root_bound() const {
    if (sqfree_.degree() < 1) return Rational(1);
    Rational mx(0);
    const Rational& lead = sqfree_.leading();
    for (int i = 0; i < sqfree_.degree(); ++i) mx = std::max(mx, Rational(abs(sqfree_.coeff(i) / lead)));
    return mx + 1;
}

int SturmChain::count_all() const {
    const Rational b = root_bound();
    return count(-b, b);
}

namespace {

// Split point inside (lo, hi) that is not a root of f.  The midpoint works
// except when it happens to be a root; then walk through a deterministic
// sequence of nearby rationals (finitely many roots, so this terminates).
Rational non_root_split(const Poly& f, const Rational& lo, const Rational& hi) {
    Rational mid = (lo + hi) / 2;
    Rational step = (hi - lo) / 4;
    while (f.eval(mid) == 0) {
        mid += step;
        step /= 2;
    }
    return mid;
}

void isolate(const SturmChain& chain, const Rational& lo, const Rational& hi,
             std::vector<QInterval>& out) {
    const int n = chain.count(lo, hi);
    if (n == 0) return;
    if (n == 1) {
        out.push_back({lo, hi});
        return;
    }
    const Rational mid = non_root_split(chain.poly(), lo, hi);
    isolate(chain, lo, mid, out);
    isolate(chain, mid, hi, out);
}

} // namespace

RealRootCertificate count_real_roots(const Poly& f) {
    if (f.is_zero()) throw InvalidInput("real-root count of zero polynomial");
    RealRootCertificate cert;
    if (f.degree() == 0) {
        cert.polynomial = f.monic();
        return cert;
    }
    const SturmChain chain(f);
    cert.polynomial = chain.poly();
    Rational b = chain.root_bound();
    // make sure the endpoints are not roots (they cannot be: all roots are
    // strictly inside the Cauchy bound)
    std::vector<QInterval> intervals;
    isolate(chain, -b, b, intervals);
    // adjacent intervals can share a split point; bisect until they are
    // properly disjoint (the shared endpoint is never a root)
    for (size_t i = 1; i < intervals.size(); ++i) {
        while (intervals[i - 1].hi >= intervals[i].lo) {
            if (intervals[i - 1].width() >= intervals[i].width())
                intervals[i - 1] = bisect_once(cert.polynomial, intervals[i - 1]);
            else
                intervals[i] = bisect_once(cert.polynomial, intervals[i]);
        }
    }
    cert.isolating_intervals = std::move(intervals);
    cert.count = static_cast<int>(cert.isolating_intervals.size());
    return cert;
}

QInterval bisect_once(const Poly& f, const QInterval& iv) {
    const int slo = sign_of(f.eval(iv.lo));
    const int shi = sign_of(f.eval(iv.hi));
    if (slo == 0 || shi == 0 || slo == shi)
        throw InvalidInput("bisect_once needs a sign change across the interval");
    const Rational mid = non_root_split(f, iv.lo, iv.hi);
    const int smid = sign_of(f.eval(mid));
    if (smid == slo) return {mid, iv.hi};
    return {iv.lo, mid};
}

QInterval refine_to_width(const Poly& f, QInterval iv, int bits) {
    Integer denom = 1;
    mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    const Rational target = make_rational(1, denom);
    while (iv.width() > target) iv = bisect_once(f, iv);
    return iv;
}

} // namespace twistorcm::exactalg
