#include "twistorcm/twistor.hpp"

#include "twistorcm/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace twistorcm::twistor {

using exactalg::certified_signs_at_real_embeddings;
using exactalg::kernel_basis;
using exactalg::make_rational;
using exactalg::minimal_polynomial;
using exactalg::rational_to_string;
using hodge::apply_matrix;
using hodge::expand_over_basis;

TwistorSetup extend_by_polarization(hodge::CMHodgeStructure base, long d) {
    if (d <= 0) throw InvalidInput("polarization square d must be positive");
    const int r = base.rank();
    QMat ext(r + 1, r + 1);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) ext.at(i, j) = base.space.gram().at(i, j);
    ext.at(r, r) = d;
    const exactalg::Signature sig = exactalg::signature(ext);
    if (!(sig.positive == 3 && sig.negative == r - 2 && sig.null == 0))
        throw SignatureMismatch("extended form must have signature (3, r-2)",
                                sig.positive, sig.negative, sig.null);
    const auto ainv = exactalg::inverse(base.alpha_matrix);
    if (!ainv) throw TheoremViolation("alpha matrix is singular");
    return TwistorSetup{std::move(base), d, std::move(ext), *ainv};
}

std::string location_name(Location loc) {
    switch (loc) {
        case Location::Pole: return "pole";
        case Location::Equator: return "equator";
        case Location::Generic: return "generic";
    }
    return "?";
}

PolarizedClass classify_class(const TwistorSetup& setup, const QVec& lprime) {
    const int r = setup.rank();
    if (static_cast<int>(lprime.size()) != r + 1)
        throw InvalidInput("class vector must have r+1 coordinates");
    PolarizedClass cls;
    cls.vec = lprime;
    const QVec glp = setup.extended_gram * lprime;
    cls.norm = Rational(0);
    for (int i = 0; i <= r; ++i) cls.norm += lprime[static_cast<size_t>(i)] * glp[static_cast<size_t>(i)];
    cls.m = lprime[static_cast<size_t>(r)] * Rational(setup.d);
    bool t_zero = true;
    for (int i = 0; i < r; ++i) t_zero &= lprime[static_cast<size_t>(i)] == 0;
    if (t_zero) cls.location = Location::Pole;
    else if (lprime[static_cast<size_t>(r)] == 0) cls.location = Location::Equator;
    else cls.location = Location::Generic;
    return cls;
}

namespace {

// Basis adapted to a class: gamma~_1 = T-component of l', gamma~_i =
// alpha^{1-i}(gamma~_1); sigma rescaled so (sigma.l') = 1, after which its
// pairing coordinates are exactly (1, alpha, ..., alpha^{r-1}).
struct AdaptedFrame {
    QMat change;                 // columns: adapted basis in the distinguished basis
    QMat gram;                   // adapted T-part Gram matrix
    QVec pairings;               // p_i = (l'.gamma~_i)
    FieldElement w;              // (sigma.l') before the rescale
    FieldElement s;              // (sigma.conj sigma) after the rescale
};

AdaptedFrame adapted_frame(const TwistorSetup& setup, const PolarizedClass& cls) {
    const int r = setup.rank();
    const auto& base = setup.base;
    const auto K = base.field.field;
    QVec t(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) t[static_cast<size_t>(i)] = cls.vec[static_cast<size_t>(i)];

    AdaptedFrame frame;
    frame.change = QMat(r, r);
    QVec v = t;
    for (int j = 0; j < r; ++j) {
        for (int i = 0; i < r; ++i) frame.change.at(i, j) = v[static_cast<size_t>(i)];
        v = setup.alpha_inverse * v;
    }
    if (!exactalg::inverse(frame.change))
        throw TheoremViolation("adapted class basis is degenerate");
    frame.gram = frame.change.transpose() * base.space.gram() * frame.change;

    frame.w = K->zero();
    for (int i = 0; i < r; ++i)
        frame.w = frame.w + base.sigma_coords[static_cast<size_t>(i)] * t[static_cast<size_t>(i)];
    if (frame.w.is_zero())
        throw TheoremViolation("(sigma.l') vanished for a class with nonzero T-part");
    // the adapted pairing coordinates are w * alpha^{i-1}; after the rescale
    // they are the base coordinates again
    for (int i = 0; i < r; ++i) {
        FieldElement xi = K->zero();
        for (int j = 0; j < r; ++j)
            xi = xi + base.sigma_coords[static_cast<size_t>(j)] * frame.change.at(j, i);
        if (!(xi == frame.w * base.sigma_coords[static_cast<size_t>(i)]))
            throw TheoremViolation("adapted coordinates are not alpha-power multiples");
    }
    frame.s = base.sigma_sigma_bar / (frame.w * base.field.conjugate(frame.w));

    const QVec gt = base.space.gram() * t;
    frame.pairings = QVec(static_cast<size_t>(r), Rational(0));
    for (int i = 0; i < r; ++i) {
        Rational acc(0);
        for (int k = 0; k < r; ++k) acc += gt[static_cast<size_t>(k)] * frame.change.at(k, i);
        frame.pairings[static_cast<size_t>(i)] = acc;
    }
    return frame;
}

Conjugation extend_conjugation(const exactalg::QuadraticExtension& ext,
                               const Conjugation& base_conj,
                               const FieldElement& root_conj_image) {
    const auto L = ext.absolute;
    // generator = root + shift * theta, so its conjugate is the conjugated
    // root plus shift times the conjugated base generator
    const FieldElement theta = ext.base_embedding.apply(base_conj.field()->generator());
    const FieldElement theta_bar =
        ext.base_embedding.apply(base_conj.apply(base_conj.field()->generator()));
    const FieldElement image = root_conj_image + theta_bar * Rational(ext.primitive_shift);
    Conjugation conj(L, image);  // validates involution + root of modulus
    // restriction to the base must match
    if (!(conj.apply(theta) == theta_bar))
        throw TheoremViolation("extended conjugation does not restrict to the base one");
    return conj;
}

ClassAmbient make_ambient(const TwistorSetup& setup, const FieldElement& disc,
                          const PrecisionPolicy& policy) {
    const auto& base = setup.base;
    const auto K = base.field.field;
    ClassAmbient amb;
    const auto root = exactalg::sqrt_in_field(disc, base.field.cm, policy);
    if (root) {
        amb.field = K;
        amb.from_base = FieldHom::identity(K);
        amb.conj = base.field.conj();
        amb.extended = false;
        // fix the distinguished-embedding sign of omega to be positive
        FieldElement omega = *root;
        if (!omega.is_zero()) {
            const auto signs = certified_signs_at_real_embeddings(
                base.field.cm.k0_abs.to_abstract(omega), policy);
            if ((*signs)[static_cast<size_t>(base.distinguished_embedding)] < 0) omega = -omega;
        }
        amb.omega = omega;
        return amb;
    }
    auto ext = exactalg::compose_extension(K->zero(), -disc, base.field.cm, policy, false);
    amb.field = ext.absolute;
    amb.from_base = ext.base_embedding;
    // omega is real at the distinguished realization, so conjugation fixes it
    amb.conj = extend_conjugation(ext, base.field.conj(), ext.adjoined_root);
    amb.omega = ext.adjoined_root;
    amb.extended = true;
    return amb;
}

void require_generic(const PolarizedClass& cls) {
    if (cls.location == Location::Pole)
        throw InvalidInput("pole class: the fibre is the base structure itself");
    if (cls.location == Location::Equator)
        throw InvalidInput("equator class: use equator_analysis");
    if (!cls.admissible())
        throw InvalidInput("class not positive: (l'.l') = " + rational_to_string(cls.norm));
}

} // namespace

std::pair<TwistorPoint, TwistorPoint> point_from_class(const TwistorSetup& setup,
                                                       const PolarizedClass& cls,
                                                       const PrecisionPolicy& policy) {
    require_generic(cls);
    const auto& base = setup.base;
    const auto K = base.field.field;
    const AdaptedFrame frame = adapted_frame(setup, cls);
    const Rational m = cls.m;

    // roots of t^2 + m t - d/(2s); discriminant m^2 + 2d/s
    const FieldElement disc = K->from_rational(m * m) +
                              K->from_rational(Rational(2 * setup.d)) / frame.s;
    if (!(base.field.conjugate(disc) == disc))
        throw TheoremViolation("root discriminant not fixed by conjugation");
    const auto disc_signs = certified_signs_at_real_embeddings(
        base.field.cm.k0_abs.to_abstract(disc), policy);
    if ((*disc_signs)[static_cast<size_t>(base.distinguished_embedding)] <= 0)
        throw TheoremViolation("root discriminant not positive at the distinguished embedding");

    ClassAmbient amb = make_ambient(setup, disc, policy);
    const FieldElement m_emb = amb.field->from_rational(m);
    const FieldElement a = (amb.omega - m_emb) * make_rational(1, 2);
    const FieldElement b = (-amb.omega - m_emb) * make_rational(1, 2);
    // conic membership: 2ab s + d = 0, exactly
    const FieldElement s_emb = amb.from_base.apply(frame.s);
    if (!((a * b * s_emb * Rational(2)) + Rational(setup.d) == amb.field->zero()))
        throw TheoremViolation("constructed point violates the conic equation");
    TwistorPoint first{amb, a, b};
    TwistorPoint second{amb, b, a};
    return {std::move(first), std::move(second)};
}

namespace {

FibreStructure fibre_structure_impl(const TwistorSetup& setup, const PolarizedClass& cls,
                                    const AdaptedFrame& frame, const TwistorPoint& point,
                                    const PrecisionPolicy& policy) {
    const auto& base = setup.base;
    const int r = setup.rank();
    const Rational m = cls.m;

    QMat gram(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            gram.at(i, j) = frame.gram.at(i, j) +
                            Rational(setup.d) / (m * m) * frame.pairings[static_cast<size_t>(i)] *
                                frame.pairings[static_cast<size_t>(j)];

    FibreStructure fibre{hodge::QuadraticSpace(std::move(gram)), {}, {}, {}, point.ambient,
                         frame.s, {}};
    if (!(fibre.space.sig() == exactalg::Signature{2, r - 2, 0}))
        throw TheoremViolation("fibre form does not have signature (2, r-2)");

    const FieldElement alpha_emb = point.ambient.from_base.apply(base.alpha);
    fibre.m_shift = QVec(static_cast<size_t>(r), Rational(0));
    for (int i = 0; i < r; ++i) {
        fibre.m_shift[static_cast<size_t>(i)] =
            -(Rational(setup.d) / m) * frame.pairings[static_cast<size_t>(i)];
        const FieldElement xp =
            point.a * (alpha_emb.pow(i) - alpha_emb.pow(-i)) - alpha_emb.pow(-i) * m;
        fibre.x_prime.push_back(xp);
        fibre.sigma_coords.push_back(xp + fibre.m_shift[static_cast<size_t>(i)]);
        // direct bilinear route: a alpha^{i-1} + b alpha^{1-i} + m_i
        const FieldElement direct = point.a * alpha_emb.pow(i) + point.b * alpha_emb.pow(-i) +
                                    fibre.m_shift[static_cast<size_t>(i)];
        if (!(direct == fibre.sigma_coords.back()))
            throw TheoremViolation("fibre coordinate formula mismatch");
        if (xp.is_zero()) throw TheoremViolation("fibre coordinate x'_i vanished");
    }
    if (!(fibre.x_prime[0] == point.ambient.field->from_rational(-m)))
        throw TheoremViolation("x'_1 != -m");

    // exact isotropy and (sigma'.conj sigma') = m^2 s + 2d
    const auto gram_inv = exactalg::inverse(fibre.space.gram());
    const auto weights = apply_matrix(*gram_inv, fibre.sigma_coords);
    FieldElement iso = point.ambient.field->zero();
    FieldElement pairing = point.ambient.field->zero();
    for (int i = 0; i < r; ++i) {
        iso = iso + fibre.sigma_coords[static_cast<size_t>(i)] * weights[static_cast<size_t>(i)];
        pairing = pairing + point.ambient.conj.apply(fibre.sigma_coords[static_cast<size_t>(i)]) *
                                weights[static_cast<size_t>(i)];
    }
    if (!iso.is_zero()) throw TheoremViolation("(sigma'.sigma') != 0");
    fibre.s_prime = base.field.field->from_rational(m * m) * frame.s + Rational(2 * setup.d);
    if (!(pairing == point.ambient.from_base.apply(fibre.s_prime)))
        throw TheoremViolation("(sigma'.conj sigma') != m^2 s + 2d");
    const auto sp_signs = certified_signs_at_real_embeddings(
        base.field.cm.k0_abs.to_abstract(fibre.s_prime), policy);
    if ((*sp_signs)[static_cast<size_t>(base.distinguished_embedding)] <= 0)
        throw TheoremViolation("(sigma'.conj sigma') not positive at the distinguished embedding");

    // the coordinates stay Q-linearly independent
    if (exactalg::rank(expand_over_basis(fibre.sigma_coords)) != r)
        throw TheoremViolation("fibre coordinates lost Q-linear independence");
    return fibre;
}

FibreQuadraticData fibre_quadratic_impl(const TwistorSetup& setup, const PolarizedClass& cls,
                                        const AdaptedFrame& frame, const TwistorPoint& point,
                                        const PrecisionPolicy& policy) {
    const auto& base = setup.base;
    const auto K = base.field.field;
    const Rational m = cls.m;

    FibreQuadraticData quad{{}, {}, {}, false, {}};
    const FieldElement alpha = base.alpha;
    const FieldElement trace_part = alpha + alpha.inverse();
    quad.gamma = K->from_rational(m) * trace_part;
    const FieldElement two_cos_double = alpha * alpha + (alpha * alpha).inverse();
    quad.delta = K->from_rational(m * m) -
                 (K->from_rational(Rational(setup.d)) / (frame.s * Rational(2))) *
                     (two_cos_double - Rational(2));
    if (!(base.field.conjugate(quad.gamma) == quad.gamma) ||
        !(base.field.conjugate(quad.delta) == quad.delta))
        throw TheoremViolation("gamma or delta not fixed by conjugation");

    // structural identity: gamma^2 - 4 delta = (alpha^2 + alpha^-2 - 2)(m^2 + 2d/s)
    const FieldElement disc = quad.gamma * quad.gamma - quad.delta * Rational(4);
    const FieldElement root_disc =
        K->from_rational(m * m) + K->from_rational(Rational(2 * setup.d)) / frame.s;
    if (!(disc == (two_cos_double - Rational(2)) * root_disc))
        throw TheoremViolation("discriminant factorization identity failed");

    const auto signs =
        certified_signs_at_real_embeddings(base.field.cm.k0_abs.to_abstract(disc), policy);
    quad.disc_signs = *signs;
    quad.totally_negative = true;
    for (int sg : quad.disc_signs) quad.totally_negative &= (sg < 0);

    // eta = a alpha + b alpha^{-1} = x'_2, and it satisfies the quadratic
    const FieldElement alpha_emb = point.ambient.from_base.apply(alpha);
    quad.eta = point.a * alpha_emb + point.b * alpha_emb.inverse();
    const FieldElement gamma_emb = point.ambient.from_base.apply(quad.gamma);
    const FieldElement delta_emb = point.ambient.from_base.apply(quad.delta);
    if (!((quad.eta * quad.eta + gamma_emb * quad.eta + delta_emb).is_zero()))
        throw TheoremViolation("eta does not satisfy X^2 + gamma X + delta");
    return quad;
}

FibreCMField build_fibre_cm_field(const TwistorSetup& setup, const PolarizedClass& cls,
                                  const FibreQuadraticData& quad, const ClassAmbient& amb,
                                  const PrecisionPolicy& policy) {
    const auto& base = setup.base;
    const int r = setup.rank();
    if (!quad.totally_negative) {
        std::ostringstream msg;
        msg << "gamma^2 - 4 delta is not totally negative (signs:";
        for (int sg : quad.disc_signs) msg << " " << sg;
        msg << ") for class " << rational_to_string(cls.m);
        throw TheoremViolation(msg.str());
    }
    FibreCMField result{quad, {}, {}, {}, {}};
    const auto& k0_abs = base.field.cm.k0_abs;
    const FieldElement gamma_abs = k0_abs.to_abstract(quad.gamma);
    const FieldElement delta_abs = k0_abs.to_abstract(quad.delta);
    auto ext = exactalg::compose_extension(gamma_abs, delta_abs, std::nullopt, policy);
    result.absolute_field = ext.absolute;
    if (result.absolute_field->degree() != r)
        throw TheoremViolation("fibre CM field does not have degree r");
    result.absolute_minpoly = minimal_polynomial(quad.eta);
    if (result.absolute_minpoly != ext.root_absolute_minpoly)
        throw TheoremViolation("closed-form and tower minimal polynomials differ");

    std::vector<FieldElement> k0_in_ambient;
    for (const auto& b : base.field.cm.k0.basis())
        k0_in_ambient.push_back(amb.from_base.apply(b));
    result.real_subfield = Subfield::from_closed_span(amb.field, k0_in_ambient);
    std::vector<FieldElement> gens = k0_in_ambient;
    gens.push_back(quad.eta);
    result.field_in_ambient = Subfield::generated_by(amb.field, gens);
    if (result.field_in_ambient.degree() != r)
        throw TheoremViolation("K0(eta) does not have degree r inside the ambient field");
    return result;
}

} // namespace

FibreStructure fibre_structure(const TwistorSetup& setup, const PolarizedClass& cls,
                               const PrecisionPolicy& policy) {
    require_generic(cls);
    const AdaptedFrame frame = adapted_frame(setup, cls);
    const auto points = point_from_class(setup, cls, policy);
    return fibre_structure_impl(setup, cls, frame, points.first, policy);
}

FibreQuadraticData fibre_quadratic_data(const TwistorSetup& setup, const PolarizedClass& cls,
                                        const PrecisionPolicy& policy) {
    require_generic(cls);
    const AdaptedFrame frame = adapted_frame(setup, cls);
    const auto points = point_from_class(setup, cls, policy);
    return fibre_quadratic_impl(setup, cls, frame, points.first, policy);
}

FibreCMField fibre_cm_field(const TwistorSetup& setup, const PolarizedClass& cls,
                            const PrecisionPolicy& policy) {
    require_generic(cls);
    const AdaptedFrame frame = adapted_frame(setup, cls);
    const auto points = point_from_class(setup, cls, policy);
    const auto quad = fibre_quadratic_impl(setup, cls, frame, points.first, policy);
    return build_fibre_cm_field(setup, cls, quad, points.first.ambient, policy);
}

FibreConsistency verify_fibre_cm(const TwistorSetup& setup, const PolarizedClass& cls,
                                 const PrecisionPolicy& policy) {
    require_generic(cls);
    const AdaptedFrame frame = adapted_frame(setup, cls);
    const auto points = point_from_class(setup, cls, policy);
    const auto fibre = fibre_structure_impl(setup, cls, frame, points.first, policy);
    const auto quad = fibre_quadratic_impl(setup, cls, frame, points.first, policy);
    const int r = setup.rank();

    FibreConsistency rec{quad, hodge::endomorphism_field(fibre.space, fibre.sigma_coords),
                         false, false, false, false, false, -1, {}};
    rec.solver_cm_full_degree = rec.solver.classification == hodge::FieldClassification::CM &&
                                rec.solver.degree == r;
    if (!rec.solver_cm_full_degree) {
        std::ostringstream msg;
        msg << "solver endomorphism field is "
            << (rec.solver.classification == hodge::FieldClassification::CM ? "CM" : "totally real")
            << " of degree " << rec.solver.degree << ", expected CM of degree " << r;
        rec.alarms.push_back(msg.str());
    }

    if (quad.totally_negative) {
        const auto field = build_fibre_cm_field(setup, cls, quad, fibre.ambient, policy);
        rec.two_route_equal = field.field_in_ambient.same_subspace(rec.solver.scalar_span);
        if (!rec.two_route_equal)
            rec.alarms.push_back("closed-formula field and solver field differ as subspaces");
        rec.k0_equal = field.real_subfield.same_subspace(rec.solver.real_scalar_span);
        if (!rec.k0_equal)
            rec.alarms.push_back("maximal totally real subfield differs from K0");
    } else {
        std::ostringstream msg;
        msg << "gamma^2 - 4 delta not totally negative (signs:";
        for (int sg : quad.disc_signs) msg << " " << sg;
        msg << ")";
        rec.alarms.push_back(msg.str());
        // K0 persistence can still be compared against the solver's real part
        std::vector<FieldElement> k0_in_ambient;
        for (const auto& b : setup.base.field.cm.k0.basis())
            k0_in_ambient.push_back(fibre.ambient.from_base.apply(b));
        rec.k0_equal = Subfield::from_closed_span(fibre.ambient.field, k0_in_ambient)
                           .same_subspace(rec.solver.real_scalar_span);
        if (!rec.k0_equal) rec.alarms.push_back("maximal totally real subfield differs from K0");
    }

    try {
        const auto ev = hodge::is_cm(fibre.space, fibre.sigma_coords, fibre.ambient.conj, rec.solver);
        rec.criteria_agree = true;
        rec.cm_verdict = ev.verdict;
    } catch (const TheoremViolation& e) {
        rec.criteria_agree = false;
        rec.alarms.push_back(std::string("CM criteria disagree: ") + e.what());
    }
    rec.rho = picard_number_at(setup, cls, policy);
    return rec;
}

EquatorReport equator_analysis(const TwistorSetup& setup, const PolarizedClass& cls,
                               const PrecisionPolicy& policy) {
    if (cls.location != Location::Equator)
        throw InvalidInput("equator_analysis needs a class with m = 0");
    if (!cls.admissible())
        throw InvalidInput("class not positive: (l'.l') = " + rational_to_string(cls.norm));
    const auto& base = setup.base;
    const auto K = base.field.field;
    const int r = setup.rank();
    const AdaptedFrame frame = adapted_frame(setup, cls);

    // a = sqrt(d / 2s), real at the distinguished realization
    const FieldElement a_sq = K->from_rational(Rational(setup.d)) / (frame.s * Rational(2));
    const auto a_signs =
        certified_signs_at_real_embeddings(base.field.cm.k0_abs.to_abstract(a_sq), policy);
    if ((*a_signs)[static_cast<size_t>(base.distinguished_embedding)] <= 0)
        throw TheoremViolation("d/(2s) not positive at the distinguished embedding");
    const ClassAmbient amb = make_ambient(setup, a_sq, policy);
    const FieldElement a = amb.omega;
    const FieldElement alpha_emb = amb.from_base.apply(base.alpha);

    // T' basis: l, gamma'_i = gamma~_i - (p_i / norm) l'  (i = 2..r)
    EquatorReport report;
    QMat gram(r, r);
    gram.at(0, 0) = Rational(setup.d);
    for (int i = 1; i < r; ++i)
        for (int j = 1; j < r; ++j)
            gram.at(i, j) = frame.gram.at(i, j) -
                            frame.pairings[static_cast<size_t>(i)] *
                                frame.pairings[static_cast<size_t>(j)] / cls.norm;
    const hodge::QuadraticSpace space{std::move(gram)};
    if (!(space.sig() == exactalg::Signature{2, r - 2, 0}))
        throw TheoremViolation("equator fibre form does not have signature (2, r-2)");

    std::vector<FieldElement> coords;
    coords.push_back(amb.field->from_rational(Rational(setup.d)));  // (sigma'.l) = d
    for (int i = 1; i < r; ++i)
        coords.push_back(a * (alpha_emb.pow(i) - alpha_emb.pow(-i)));
    // purely imaginary span has dimension r/2
    {
        std::vector<FieldElement> in_base;
        for (int i = 1; i < r; ++i)
            in_base.push_back(base.alpha.pow(i) - base.alpha.pow(-i));
        report.imaginary_span_dim = exactalg::rank(expand_over_basis(in_base));
        if (report.imaginary_span_dim != r / 2)
            report.alarms.push_back("imaginary span dimension != r/2");
    }

    report.period_field_degree = hodge::period_field(coords).degree();

    // minimal irreducible substructure: orthogonal complement of the rational
    // (1,1) classes inside T'
    const QMat kernel = hodge::rational_11_classes(coords);
    report.minimal_substructure_dim = r - kernel.rows();
    QMat sub_rows;
    if (kernel.rows() == 0) {
        sub_rows = QMat::identity(r);
    } else {
        sub_rows = kernel_basis(kernel * space.gram());
        if (sub_rows.rows() != r - kernel.rows())
            throw TheoremViolation("substructure dimension mismatch");
    }
    QMat sub_gram(sub_rows.rows(), sub_rows.rows());
    for (int i = 0; i < sub_rows.rows(); ++i)
        for (int j = 0; j < sub_rows.rows(); ++j)
            sub_gram.at(i, j) = space.pair(sub_rows.row(i), sub_rows.row(j));
    std::vector<FieldElement> sub_coords;
    for (int i = 0; i < sub_rows.rows(); ++i) {
        FieldElement acc = amb.field->zero();
        for (int j = 0; j < r; ++j)
            acc = acc + coords[static_cast<size_t>(j)] * sub_rows.at(i, j);
        sub_coords.push_back(acc);
    }
    try {
        const auto ev = hodge::is_cm(hodge::QuadraticSpace(std::move(sub_gram)), sub_coords, amb.conj);
        report.cm_verdict = ev.verdict;
    } catch (const TheoremViolation& e) {
        report.alarms.push_back(std::string("CM criteria disagree on the substructure: ") + e.what());
    }
    if (r > 2 && report.cm_verdict) report.alarms.push_back("equator fibre with r > 2 reported CM");
    if (r == 2 && !report.cm_verdict) report.alarms.push_back("equator fibre with r = 2 not CM");
    return report;
}

int picard_number_at(const TwistorSetup& setup, const PolarizedClass& cls,
                     const PrecisionPolicy& policy) {
    const auto& base = setup.base;
    const auto K = base.field.field;
    const int r = setup.rank();
    const int n = K->degree();

    if (cls.location == Location::Pole) {
        // sigma' = sigma: kernel of gamma -> (sigma.gamma) on T + Q l
        std::vector<FieldElement> coords = base.sigma_coords;
        coords.push_back(K->zero());
        return hodge::rational_11_classes(coords).rows();
    }
    if (!cls.admissible())
        throw InvalidInput("class not positive: (l'.l') = " + rational_to_string(cls.norm));

    const AdaptedFrame frame = adapted_frame(setup, cls);
    const Rational m = cls.m;
    // rescaled original-basis coordinates x_i / w, and their conjugates
    std::vector<FieldElement> x_resc, x_conj;
    for (int i = 0; i < r; ++i) {
        const FieldElement xi = base.sigma_coords[static_cast<size_t>(i)] / frame.w;
        x_resc.push_back(xi);
        x_conj.push_back(base.field.conjugate(xi));
    }
    const FieldElement disc =
        K->from_rational(m * m) + K->from_rational(Rational(2 * setup.d)) / frame.s;
    const auto split_root = exactalg::sqrt_in_field(disc, base.field.cm, policy);

    // (sigma'.gamma) for gamma = (v, c):
    //   a x_v + b xbar_v + c d  with a = (-m + omega)/2, b = (-m - omega)/2
    // = -(m/2)(x_v + xbar_v) + (omega/2)(x_v - xbar_v) + c d
    if (!split_root) {
        // omega generates a quadratic extension: both components must vanish
        QMat system(2 * n, r + 1);
        for (int i = 0; i < r; ++i) {
            const QVec sum = (x_resc[static_cast<size_t>(i)] + x_conj[static_cast<size_t>(i)]).coords();
            const QVec dif = (x_resc[static_cast<size_t>(i)] - x_conj[static_cast<size_t>(i)]).coords();
            for (int beta = 0; beta < n; ++beta) {
                system.at(beta, i) = -(m / 2) * sum[static_cast<size_t>(beta)];
                system.at(n + beta, i) = dif[static_cast<size_t>(beta)];
            }
        }
        system.at(0, r) = Rational(setup.d);
        return kernel_basis(system).rows();
    }
    const FieldElement omega = *split_root;
    const FieldElement a = (omega - Rational(m)) * make_rational(1, 2);
    const FieldElement b = (-omega - Rational(m)) * make_rational(1, 2);
    QMat system(n, r + 1);
    for (int i = 0; i < r; ++i) {
        const QVec c =
            (a * x_resc[static_cast<size_t>(i)] + b * x_conj[static_cast<size_t>(i)]).coords();
        for (int beta = 0; beta < n; ++beta) system.at(beta, i) = c[static_cast<size_t>(beta)];
    }
    system.at(0, r) = Rational(setup.d);
    return kernel_basis(system).rows();
}

int geometric_picard(int rho_z, int rho_s) {
    if (rho_z < 0 || rho_s < 1) throw InvalidInput("geometric_picard needs rho_z >= 0, rho_s >= 1");
    return rho_z + rho_s - 1;
}

std::vector<SurveyRow> jump_survey(const TwistorSetup& setup, long height,
                                   const PrecisionPolicy& policy) {
    if (height < 1) throw InvalidInput("survey height must be >= 1");
    const int dim = setup.rank() + 1;
    std::vector<SurveyRow> rows;
    std::vector<long> v(static_cast<size_t>(dim), -height);
    while (true) {
        // primitive, sign-normalized representatives only
        long g = 0;
        int first_nonzero_sign = 0;
        for (long x : v) {
            if (x != 0 && first_nonzero_sign == 0) first_nonzero_sign = x > 0 ? 1 : -1;
            g = std::gcd(g, std::labs(x));
        }
        if (g == 1 && first_nonzero_sign > 0) {
            QVec q(static_cast<size_t>(dim));
            for (int i = 0; i < dim; ++i) q[static_cast<size_t>(i)] = Rational(v[static_cast<size_t>(i)]);
            SurveyRow row;
            row.cls = q;
            const PolarizedClass cls = classify_class(setup, q);
            row.location = cls.location;
            row.m = cls.m;
            row.norm = cls.norm;
            if (!cls.admissible()) {
                row.rejected = true;
            } else {
                row.rho = picard_number_at(setup, cls, policy);
                // jump locality: excessive jumps happen only on the equator
                if (row.rho >= 2 && cls.location != Location::Equator)
                    throw TheoremViolation("excessive Picard jump off the equator");
                if (cls.location == Location::Generic && row.rho != 1)
                    throw TheoremViolation("generic point with rho != 1");
                if (cls.location == Location::Pole && row.rho != 1)
                    throw TheoremViolation("pole with rho != 1");
            }
            rows.push_back(std::move(row));
        }
        size_t pos = 0;
        while (pos < v.size() && v[pos] == height) v[pos++] = -height;
        if (pos == v.size()) break;
        ++v[pos];
    }
    return rows;
}

} // namespace twistorcm::twistor
