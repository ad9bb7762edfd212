#include "twistorcm/extension.hpp"

#include "twistorcm/errors.hpp"

#include <algorithm>

namespace twistorcm::exactalg {

CMContext CMContext::build(const Conjugation& conj) {
    if (conj.is_identity()) throw InvalidInput("CM context needs a nontrivial conjugation");
    CMContext ctx;
    ctx.conj = conj;
    const QMat fixed = conj.fixed_subspace();
    std::vector<FieldElement> fixed_elems;
    for (int r = 0; r < fixed.rows(); ++r) fixed_elems.push_back(conj.field()->from_coords(fixed.row(r)));
    ctx.k0 = Subfield::from_closed_span(conj.field(), fixed_elems);
    ctx.k0_abs = ctx.k0.make_abstract();
    return ctx;
}

namespace {

// Trace matrix of the power basis of a monic integral polynomial, via
// Newton's identities: M[k][i] = p_{k+i}, p_j the power sums of the roots.
QMat power_trace_matrix(const Poly& g) {
    const int n = g.degree();
    std::vector<Rational> p(static_cast<size_t>(2 * n - 1), Rational(0));
    p[0] = Rational(n);
    for (int k = 1; k <= 2 * n - 2; ++k) {
        Rational acc(0);
        if (k <= n) acc = g.coeff(n - k) * Rational(-k);
        for (int j = 1; j < k && j <= n; ++j) {
            if (k - j < 1) break;
            acc -= g.coeff(n - j) * p[static_cast<size_t>(k - j)];
        }
        p[static_cast<size_t>(k)] = acc;
    }
    QMat m(n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) m.at(k, i) = p[static_cast<size_t>(k + i)];
    return m;
}

QInterval interval_pow(const QInterval& x, int e) {
    QInterval acc{Rational(1), Rational(1)};
    for (int i = 0; i < e; ++i) acc = interval_mul(acc, x);
    return acc;
}

} // namespace

std::optional<FieldElement> sqrt_in_totally_real(const FieldElement& e,
                                                 const PrecisionPolicy& policy) {
    const NumberField::Ptr field = e.parent();
    if (!field->is_totally_real()) throw InvalidInput("sqrt_in_totally_real on a non-totally-real field");
    if (e.is_zero()) return field->zero();
    const int n = field->degree();

    if (n == 1) {
        const auto r = rational_sqrt(e.as_rational());
        if (!r) return std::nullopt;
        return field->from_rational(*r);
    }

    // squares are totally positive
    const auto signs = certified_signs_at_real_embeddings(e, policy);
    for (int s : *signs)
        if (s < 0) return std::nullopt;
    // the norm of a square is a rational square
    if (!rational_sqrt(e.norm())) return std::nullopt;

    // integral model: beta' = lambda * beta has monic integral minimal
    // polynomial g'; elements of O_F have power-basis denominators dividing
    // any D with index^2 | disc(g') and index | D
    const Poly& g = field->modulus();
    Integer lambda = 1;
    for (const auto& c : g.coeffs()) mpz_lcm(lambda.get_mpz_t(), lambda.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Rational> gp_coeffs(static_cast<size_t>(n) + 1);
    Rational scale(1);
    for (int i = n; i >= 0; --i) {
        gp_coeffs[static_cast<size_t>(i)] = g.coeff(i) * scale;
        scale *= Rational(lambda);
    }
    const Poly gprime = Poly(std::move(gp_coeffs));
    const Rational disc = discriminant(gprime);
    if (disc == 0) throw TheoremViolation("zero discriminant of an irreducible modulus");
    Integer dbound = abs(disc.get_num());

    // w = c^2 * e expressed in the beta' power basis, integral
    QVec e_coords = e.coords();
    std::vector<Rational> w_coords(static_cast<size_t>(n));
    Rational inv_l(1);
    for (int i = 0; i < n; ++i) {
        w_coords[static_cast<size_t>(i)] = e_coords[static_cast<size_t>(i)] * inv_l;
        inv_l /= Rational(lambda);
    }
    Integer c = common_denominator(w_coords);
    for (auto& x : w_coords) x *= Rational(c) * Rational(c);
    const Poly w_rep = Poly(std::vector<Rational>(w_coords));

    const QMat trace_m = power_trace_matrix(gprime);
    const auto trace_inv = inverse(trace_m);
    if (!trace_inv) throw TheoremViolation("singular power trace matrix");

    // target width for unique candidate extraction
    const Rational extraction_width = make_rational(1, dbound * dbound) / 2;

    const RealRootCertificate cert = count_real_roots(gprime);
    if (cert.count != n) throw TheoremViolation("integral model lost real roots");
    std::vector<QInterval> roots = cert.isolating_intervals;

    int bits = policy.start_bits;
    while (true) {
        for (auto& iv : roots) iv = refine_to_width(gprime, iv, bits);
        // value and sqrt enclosures per embedding
        std::vector<QInterval> sqrts(static_cast<size_t>(n));
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            const QInterval v = interval_eval(w_rep, roots[static_cast<size_t>(i)]);
            if (v.hi < 0) throw TheoremViolation("sign certificate contradicted by interval data");
            sqrts[static_cast<size_t>(i)] = interval_sqrt(v, bits);
        }
        // root power table
        std::vector<std::vector<QInterval>> pow_table(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            pow_table[static_cast<size_t>(i)].reserve(static_cast<size_t>(n));
            for (int k = 0; k < n; ++k)
                pow_table[static_cast<size_t>(i)].push_back(interval_pow(roots[static_cast<size_t>(i)], k));
        }

        bool all_narrow = true;
        for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
            // sign vector: embedding 0 fixed positive, the rest from the mask
            std::vector<QInterval> rhs(static_cast<size_t>(n), QInterval{Rational(0), Rational(0)});
            for (int k = 0; k < n; ++k) {
                QInterval acc{Rational(0), Rational(0)};
                for (int i = 0; i < n; ++i) {
                    QInterval term = interval_mul(pow_table[static_cast<size_t>(i)][static_cast<size_t>(k)],
                                                  sqrts[static_cast<size_t>(i)]);
                    if (i > 0 && (mask >> (i - 1)) & 1u) term = interval_scale(term, Rational(-1));
                    acc = interval_add(acc, term);
                }
                rhs[static_cast<size_t>(k)] = acc;
            }
            // candidate coordinates = trace_inv * rhs
            std::vector<Rational> cand(static_cast<size_t>(n));
            bool narrow = true, in_grid = true;
            for (int r = 0; r < n && narrow; ++r) {
                QInterval ci{Rational(0), Rational(0)};
                for (int k = 0; k < n; ++k)
                    ci = interval_add(ci, interval_scale(rhs[static_cast<size_t>(k)], trace_inv->at(r, k)));
                if (ci.width() >= extraction_width) { narrow = false; break; }
                // unique rational with denominator dividing dbound, if any
                Rational scaled = ci.mid() * Rational(dbound);
                Integer rounded;
                Rational half = scaled + make_rational(1, 2);
                mpz_fdiv_q(rounded.get_mpz_t(), half.get_num().get_mpz_t(), half.get_den().get_mpz_t());
                const Rational candidate = make_rational(rounded, dbound);
                if (!ci.contains(candidate)) { in_grid = false; }
                cand[static_cast<size_t>(r)] = candidate;
            }
            if (!narrow) { all_narrow = false; continue; }
            if (!in_grid) continue;
            // exact verification in the beta' model: z^2 mod g' == w
            const Poly z{std::vector<Rational>(cand)};
            if ((z * z).divrem(gprime).second == w_rep) {
                // back to the original basis: beta'^i = lambda^i beta^i, and
                // undo the integral scaling by c
                std::vector<Rational> out(static_cast<size_t>(n));
                Rational l_pow(1);
                for (int i = 0; i < n; ++i) {
                    out[static_cast<size_t>(i)] = cand[static_cast<size_t>(i)] * l_pow / Rational(c);
                    l_pow *= Rational(lambda);
                }
                return field->element(Poly(std::move(out)));
            }
        }
        if (all_narrow) return std::nullopt;  // certified: no sign vector verified
        if (bits >= policy.cap_bits)
            throw PrecisionExhausted("square-root reconstruction undecided at " +
                                     std::to_string(policy.cap_bits) + " bits");
        bits *= 2;
    }
}

std::optional<FieldElement> sqrt_in_field(const FieldElement& e,
                                          const std::optional<CMContext>& cm,
                                          const PrecisionPolicy& policy) {
    const NumberField::Ptr field = e.parent();
    if (field->degree() == 1) {
        const auto r = rational_sqrt(e.as_rational());
        if (!r) return std::nullopt;
        return field->from_rational(*r);
    }
    if (field->is_totally_real()) return sqrt_in_totally_real(e, policy);
    if (!cm || cm->conj.field().get() != field.get())
        throw Unsupported("square roots only implemented over Q, totally real, and CM base fields");
    if (e.is_zero()) return field->zero();

    const Conjugation& conj = cm->conj;
    const FieldElement theta = field->generator();
    const FieldElement eta = theta - conj.apply(theta);
    if (eta.is_zero()) throw InvalidInput("conjugation fixes the generator of a CM field");
    const FieldElement big_d = eta * eta;  // totally negative element of K0

    const FieldElement ebar = conj.apply(e);
    const FieldElement u = (e + ebar) * make_rational(1, 2);
    const FieldElement vdiff = e - ebar;

    auto to_k0 = [&](const FieldElement& x) { return cm->k0_abs.to_abstract(x); };
    auto from_k0 = [&](const FieldElement& x) { return cm->k0_abs.embedding.apply(x); };

    if (vdiff.is_zero()) {
        // e lies in K0: either sqrt(e) in K0, or sqrt(e/D) in K0 with z = y*eta
        const auto direct = sqrt_in_totally_real(to_k0(e), policy);
        if (direct) return from_k0(*direct);
        const auto twisted = sqrt_in_totally_real(to_k0(e / big_d), policy);
        if (twisted) return from_k0(*twisted) * eta;
        return std::nullopt;
    }

    const FieldElement v = vdiff / (eta * Rational(2));
    if (!(conj.apply(v) == v)) throw TheoremViolation("K0-component not fixed by conjugation");
    // z = x + y*eta, x,y in K0: x^2 + y^2 D = u, 2xy = v; so x^2 is a root of
    // 4W^2 - 4uW + D v^2 = 0, i.e. W = (u +- sqrt(u^2 - D v^2)) / 2
    const FieldElement disc_elt = u * u - big_d * v * v;
    const auto disc_root = sqrt_in_totally_real(to_k0(disc_elt), policy);
    if (!disc_root) return std::nullopt;
    for (int sign = 0; sign < 2; ++sign) {
        const FieldElement w_abs = (to_k0(u) + (sign == 0 ? *disc_root : -*disc_root)) * make_rational(1, 2);
        const auto x_abs = sqrt_in_totally_real(w_abs, policy);
        if (!x_abs || x_abs->is_zero()) continue;
        const FieldElement x = from_k0(*x_abs);
        const FieldElement y = v / (x * Rational(2));
        const FieldElement z = x + y * eta;
        if (z * z == e) return z;
    }
    return std::nullopt;
}

std::optional<std::pair<FieldElement, FieldElement>> quadratic_roots_in_base(
    const FieldElement& p, const FieldElement& q,
    const std::optional<CMContext>& cm, const PrecisionPolicy& policy) {
    if (p.parent().get() != q.parent().get())
        throw InvalidInput("quadratic coefficients from different fields");
    const FieldElement disc = p * p - q * Rational(4);
    const auto w = sqrt_in_field(disc, cm, policy);
    if (!w) return std::nullopt;
    const FieldElement r1 = (-p + *w) * make_rational(1, 2);
    const FieldElement r2 = (-p - *w) * make_rational(1, 2);
    return std::make_pair(r1, r2);
}

namespace {

// Elements of base[Y]/(Y^2 + pY + q) as pairs u + vY.
struct QuadPair {
    FieldElement u, v;
};

QuadPair qp_mul(const QuadPair& a, const QuadPair& b, const FieldElement& p, const FieldElement& q) {
    // (u1 + v1 Y)(u2 + v2 Y) with Y^2 = -pY - q
    const FieldElement vv = a.v * b.v;
    return {a.u * b.u - q * vv, a.u * b.v + a.v * b.u - p * vv};
}

QVec qp_coords(const QuadPair& a) {
    QVec c = a.u.coords();
    const QVec d = a.v.coords();
    c.insert(c.end(), d.begin(), d.end());
    return c;
}

} // namespace

QuadraticExtension compose_extension(const FieldElement& p, const FieldElement& q,
                                     const std::optional<CMContext>& cm,
                                     const PrecisionPolicy& policy,
                                     bool compute_root_minpoly) {
    const NumberField::Ptr base = p.parent();
    if (base.get() != q.parent().get())
        throw InvalidInput("quadratic coefficients from different fields");
    if (quadratic_roots_in_base(p, q, cm, policy))
        throw NotAFieldExtension("quadratic Y^2 + (" + p.to_string() + ")Y + (" + q.to_string() +
                                 ") splits over the base field");

    const int n = base->degree();
    const int big = 2 * n;
    const QuadPair y{base->zero(), base->one()};
    const QuadPair theta{base->generator(), base->zero()};

    // primitive element xi = Y + lambda*theta; in a field only finitely many
    // lambda fail, and 2n^2 + 1 candidates are more than the failure count
    // (lambda = 1 first: the bare root is rarely primitive)
    std::vector<long> lambdas = {1, 0};
    for (long l = 2; l <= 2L * n * n + 1; ++l) lambdas.push_back(l);
    for (long lambda : lambdas) {
        QuadPair xi{theta.u * Rational(lambda), base->one()};
        std::vector<QVec> powers;
        QuadPair pw{base->one(), base->zero()};
        for (int k = 0; k < big; ++k) {
            powers.push_back(qp_coords(pw));
            pw = qp_mul(pw, xi, p, q);
        }
        powers.push_back(qp_coords(pw));  // xi^{2n}
        QMat pow_rows = QMat::from_rows({powers.begin(), powers.begin() + big});

        // one elimination pass: the modulus dependence and the expressions of
        // theta and Y in the xi-power basis
        int pow_rank = 0;
        const auto sols = solve_many(pow_rows.transpose(),
                                     {powers.back(), qp_coords(theta), qp_coords(y)},
                                     &pow_rank);
        if (pow_rank != big) continue;
        if (!sols) throw TheoremViolation("primitive power dependence unsolvable");
        std::vector<Rational> mod_coeffs(static_cast<size_t>(big) + 1);
        for (int k = 0; k < big; ++k) mod_coeffs[static_cast<size_t>(k)] = -(*sols)[0][static_cast<size_t>(k)];
        mod_coeffs[static_cast<size_t>(big)] = 1;
        // the algebra is a field (split ruled out), so this minimal polynomial
        // of full degree is irreducible
        NumberField::Ptr absolute = NumberField::create_certified(Poly(std::move(mod_coeffs)));

        QuadraticExtension ext;
        ext.absolute = absolute;
        ext.base_embedding = FieldHom(base, absolute->from_coords((*sols)[1]));  // validates
        ext.adjoined_root = absolute->from_coords((*sols)[2]);
        // the adjoined root must satisfy the quadratic
        const FieldElement pe = ext.base_embedding.apply(p);
        const FieldElement qe = ext.base_embedding.apply(q);
        if (!((ext.adjoined_root * ext.adjoined_root + pe * ext.adjoined_root + qe).is_zero()))
            throw TheoremViolation("adjoined root fails its defining quadratic");
        if (compute_root_minpoly)
            ext.root_absolute_minpoly = minimal_polynomial(ext.adjoined_root);
        ext.primitive_shift = lambda;
        // the generator really is root + shift * theta
        if (!(ext.adjoined_root + ext.base_embedding.apply(base->generator()) * Rational(lambda) ==
              absolute->generator()))
            throw TheoremViolation("primitive shift bookkeeping broken");
        return ext;
    }
    throw BudgetExhausted("no primitive element for the quadratic extension within budget");
}

} // namespace twistorcm::exactalg
