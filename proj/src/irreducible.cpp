#include "twistorcm/irreducible.hpp"

#include "twistorcm/errors.hpp"

#include <algorithm>
#include <cstdint>

namespace twistorcm::exactalg {

namespace {

// ---------------------------------------------------------------------------
// arithmetic mod a small prime, for modular irreducibility certificates
// ---------------------------------------------------------------------------

using ModPoly = std::vector<uint64_t>;  // lowest degree first, no trailing zeros

void mp_trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ModPoly mp_mul(const ModPoly& a, const ModPoly& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    ModPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + static_cast<__uint128_t>(a[i]) * b[j]) % p;
    }
    mp_trim(c);
    return c;
}

uint64_t mod_inverse(uint64_t a, uint64_t p) {
    // p prime, a != 0 mod p
    int64_t t = 0, nt = 1;
    int64_t r = static_cast<int64_t>(p), nr = static_cast<int64_t>(a % p);
    while (nr != 0) {
        const int64_t q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (t < 0) t += static_cast<int64_t>(p);
    return static_cast<uint64_t>(t);
}

ModPoly mp_rem(ModPoly a, const ModPoly& m, uint64_t p) {
    const uint64_t inv = mod_inverse(m.back(), p);
    while (a.size() >= m.size()) {
        const uint64_t f = (static_cast<__uint128_t>(a.back()) * inv) % p;
        const size_t off = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i) {
            const uint64_t sub = (static_cast<__uint128_t>(f) * m[i]) % p;
            a[off + i] = (a[off + i] + p - sub) % p;
        }
        mp_trim(a);
        if (a.size() > off + m.size()) throw TheoremViolation("modular reduction failed to shrink");
    }
    return a;
}

ModPoly mp_gcd(ModPoly a, ModPoly b, uint64_t p) {
    while (!b.empty()) {
        ModPoly r = mp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

ModPoly mp_powmod_x(uint64_t e_base, int e_exp, const ModPoly& m, uint64_t p) {
    // X^(e_base^e_exp) mod m, by e_exp rounds of exponentiation by e_base
    ModPoly acc = mp_rem({0, 1}, m, p);
    for (int round = 0; round < e_exp; ++round) {
        // acc <- acc^e_base mod m
        ModPoly result = {1};
        ModPoly sq = acc;
        uint64_t e = e_base;
        while (e > 0) {
            if (e & 1) result = mp_rem(mp_mul(result, sq, p), m, p);
            sq = mp_rem(mp_mul(sq, sq, p), m, p);
            e >>= 1;
        }
        acc = std::move(result);
    }
    return acc;
}

ModPoly mp_sub_x(ModPoly a, uint64_t p) {
    if (a.size() < 2) a.resize(2, 0);
    a[1] = (a[1] + p - 1) % p;
    mp_trim(a);
    return a;
}

// Rabin's criterion: f of degree n is irreducible mod p iff X^(p^n) == X
// mod f and gcd(X^(p^(n/q)) - X, f) = 1 for every prime q | n.
bool irreducible_mod_p(const ModPoly& f, uint64_t p) {
    const int n = static_cast<int>(f.size()) - 1;
    ModPoly top = mp_sub_x(mp_powmod_x(p, n, f, p), p);
    if (!top.empty()) return false;
    int m = n;
    for (int q = 2; q * q <= m; ++q) {
        if (m % q) continue;
        while (m % q == 0) m /= q;
        ModPoly g = mp_gcd(f, mp_sub_x(mp_powmod_x(p, n / q, f, p), p), p);
        if (g.size() != 1) return false;
    }
    if (m > 1) {
        ModPoly g = mp_gcd(f, mp_sub_x(mp_powmod_x(p, n / m, f, p), p), p);
        if (g.size() != 1) return false;
    }
    return true;
}

std::vector<Integer> integer_coeffs(const Poly& f) {
    // primitive integral form, positive leading coefficient
    Poly prim = f.primitive_part();
    if (prim.leading() < 0) prim = -prim;
    std::vector<Integer> out;
    out.reserve(static_cast<size_t>(prim.degree()) + 1);
    for (const auto& c : prim.coeffs()) {
        if (c.get_den() != 1) throw TheoremViolation("primitive part not integral");
        out.push_back(c.get_num());
    }
    return out;
}

// All divisors of |v| with both signs; throws Unsupported when the
// factorization or divisor count exceeds the desk-scale budget.
std::vector<Integer> signed_divisors(const Integer& v) {
    Integer n = abs(v);
    if (n == 0) throw InvalidInput("divisors of zero");
    std::vector<std::pair<Integer, int>> fact;
    Integer d = 2;
    long steps = 0;
    while (n > 1) {
        if (++steps > 2'000'000)
            throw Unsupported("integer factorization beyond desk-scale budget in factor search");
        if (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
            int e = 0;
            while (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
                n /= d;
                ++e;
            }
            fact.emplace_back(d, e);
        }
        d += (d == 2) ? 1 : 2;
        if (d * d > n && n > 1) {
            fact.emplace_back(n, 1);
            break;
        }
    }
    std::vector<Integer> divs = {Integer(1)};
    for (const auto& [prime, e] : fact) {
        const size_t base = divs.size();
        Integer pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= prime;
            for (size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
        if (divs.size() > 4096) throw Unsupported("divisor set beyond desk-scale budget in factor search");
    }
    const size_t base = divs.size();
    for (size_t i = 0; i < base; ++i) divs.push_back(-divs[i]);
    return divs;
}

// Lagrange interpolation through (points[i], values[i]).
Poly interpolate(const std::vector<Rational>& points, const std::vector<Rational>& values) {
    Poly acc;
    for (size_t i = 0; i < points.size(); ++i) {
        Poly basis = Poly::constant(Rational(1));
        Rational denom(1);
        for (size_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            basis = basis * (Poly::variable() - Poly::constant(points[j]));
            denom *= points[i] - points[j];
        }
        acc = acc + basis * (values[i] / denom);
    }
    return acc;
}

// Kronecker search for a factor of degree exactly k of the primitive integral
// polynomial f.  Returns a monic rational factor when found.
std::optional<Poly> kronecker_degree(const Poly& f, int k,
                                     const std::vector<Rational>& points,
                                     const std::vector<std::vector<Integer>>& divisor_sets) {
    std::vector<size_t> idx(static_cast<size_t>(k) + 1, 0);
    std::vector<Rational> values(static_cast<size_t>(k) + 1);
    while (true) {
        bool first_positive = divisor_sets[0][idx[0]] > 0;
        if (first_positive) {  // factors come in +- pairs; fix the sign at the first point
            for (int i = 0; i <= k; ++i) values[static_cast<size_t>(i)] = Rational(divisor_sets[static_cast<size_t>(i)][idx[static_cast<size_t>(i)]]);
            Poly cand = interpolate({points.begin(), points.begin() + k + 1}, values);
            if (cand.degree() == k) {
                const auto [q, r] = f.divrem(cand);
                if (r.is_zero() && q.degree() >= 1) return cand.monic();
            }
        }
        // advance the odometer
        int pos = 0;
        while (pos <= k) {
            if (++idx[static_cast<size_t>(pos)] < divisor_sets[static_cast<size_t>(pos)].size()) break;
            idx[static_cast<size_t>(pos)] = 0;
            ++pos;
        }
        if (pos > k) return std::nullopt;
    }
}

} // namespace

std::vector<Rational> rational_roots(const Poly& f) {
    if (f.is_zero()) throw InvalidInput("rational roots of zero polynomial");
    std::vector<Rational> roots;
    Poly g = f;
    // strip powers of X
    while (g.coeff(0) == 0 && g.degree() >= 1) {
        if (std::find(roots.begin(), roots.end(), Rational(0)) == roots.end()) roots.push_back(Rational(0));
        std::vector<Rational> shifted(g.coeffs().begin() + 1, g.coeffs().end());
        g = Poly(std::move(shifted));
    }
    if (g.degree() < 1) return roots;
    const std::vector<Integer> c = integer_coeffs(g);
    const std::vector<Integer> ps = signed_divisors(c.front());
    const std::vector<Integer> qs = signed_divisors(c.back());
    for (const auto& p : ps) {
        for (const auto& q : qs) {
            if (q < 0) continue;
            const Rational cand = make_rational(p, q);
            if (g.eval(cand) == 0 && std::find(roots.begin(), roots.end(), cand) == roots.end())
                roots.push_back(cand);
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::optional<Poly> find_rational_factor(const Poly& f) {
    if (f.is_zero() || f.degree() < 1) throw InvalidInput("factor search needs degree >= 1");
    if (f.degree() == 1) return std::nullopt;

    // linear factors via the rational root theorem (complete)
    const auto roots = rational_roots(f);
    if (!roots.empty())
        return Poly::variable() - Poly::constant(roots.front());
    if (f.degree() <= 3) return std::nullopt;

    Poly prim = f.primitive_part();
    if (prim.leading() < 0) prim = -prim;

    // Kronecker: a degree-k factor is determined by its values at k+1 points,
    // and those values divide the values of f there.
    const int kmax = f.degree() / 2;
    std::vector<Rational> points;
    std::vector<std::vector<Integer>> divisor_sets;
    long a = 0;
    while (static_cast<int>(points.size()) < kmax + 1) {
        const Rational x(a);
        a = (a > 0) ? -a : (-a + 1);
        const Rational v = prim.eval(x);
        if (v == 0) continue;  // cannot happen: rational roots were excluded
        points.push_back(x);
        divisor_sets.push_back(signed_divisors(v.get_num()));
    }
    for (int k = 2; k <= kmax; ++k) {
        auto factor = kronecker_degree(prim, k, points, divisor_sets);
        if (factor) return factor;
    }
    return std::nullopt;
}

bool irreducible_over_rationals(const Poly& f) {
    if (f.is_zero()) throw InvalidInput("irreducibility of the zero polynomial");
    if (f.degree() < 1) throw InvalidInput("irreducibility needs degree >= 1");
    if (f.degree() == 1) return true;

    if (!rational_roots(f).empty()) return false;
    if (f.degree() <= 3) return true;

    // modular certificate: irreducible mod p for any prime p not dividing the
    // leading coefficient implies irreducible over Q
    const std::vector<Integer> c = integer_coeffs(f);
    static const uint64_t primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    for (uint64_t p : primes) {
        if (mpz_divisible_ui_p(c.back().get_mpz_t(), p)) continue;
        ModPoly fp(c.size());
        for (size_t i = 0; i < c.size(); ++i) {
            Integer r;
            mpz_mod_ui(r.get_mpz_t(), c[i].get_mpz_t(), p);
            fp[i] = r.get_ui();
        }
        mp_trim(fp);
        if (fp.size() != c.size()) continue;
        // need f squarefree mod p for Rabin's test
        ModPoly deriv;
        for (size_t i = 1; i < fp.size(); ++i) deriv.push_back((fp[i] * (i % p)) % p);
        mp_trim(deriv);
        if (deriv.empty()) continue;
        if (mp_gcd(fp, deriv, p).size() != 1) continue;
        if (irreducible_mod_p(fp, p)) return true;
    }

    // complete fallback (e.g. X^4+1, which is reducible mod every prime)
    return !find_rational_factor(f).has_value();
}

} // namespace twistorcm::exactalg
