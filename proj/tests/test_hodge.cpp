#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "twistorcm/errors.hpp"
#include "twistorcm/hodge.hpp"

using namespace twistorcm;
using namespace twistorcm::hodge;

namespace {

using exactalg::make_rational;
using exactalg::Poly;

Poly poly_from_ints(const std::vector<long>& c) {
    std::vector<Rational> v;
    v.reserve(c.size());
    for (long x : c) v.emplace_back(x);
    return Poly(std::move(v));
}

CMFieldData gaussian_field() {
    return CMFieldData::identify(NumberField::create(poly_from_ints({1, 0, 1})));
}

CMFieldData zeta5_field() {
    return CMFieldData::identify(NumberField::create(poly_from_ints({1, 1, 1, 1, 1})));
}

// xi in K0 with exactly one positive embedding sign, by deterministic search
FieldElement one_positive_xi(const CMFieldData& k) {
    if (k.degree() == 2) return k.field->one();
    const auto& basis = k.cm.k0.basis();
    for (long h = 1; h <= 4; ++h) {
        std::vector<long> c(basis.size(), -h);
        while (true) {
            FieldElement cand = k.field->zero();
            for (size_t i = 0; i < basis.size(); ++i) cand = cand + basis[i] * Rational(c[i]);
            if (!cand.is_zero()) {
                const auto signs = exactalg::certified_signs_at_real_embeddings(
                    k.cm.k0_abs.to_abstract(cand));
                int pos = 0;
                for (int s : *signs) pos += (s > 0);
                if (pos == 1) return cand;
            }
            size_t i = 0;
            while (i < c.size() && c[i] == h) c[i++] = -h;
            if (i == c.size()) break;
            ++c[i];
        }
    }
    throw BudgetExhausted("no one-positive xi found in test helper");
}

CMHodgeStructure gaussian_structure() {
    const auto k = gaussian_field();
    return build_cm_structure(k, norm_one_primitive(k), k.field->one());
}

CMHodgeStructure zeta5_structure() {
    const auto k = zeta5_field();
    return build_cm_structure(k, norm_one_primitive(k), one_positive_xi(k));
}

} // namespace

TEST_CASE("CM field identification") {
    const auto gauss = gaussian_field();
    CHECK(gauss.degree() == 2);
    CHECK(gauss.cm.k0_abs.field->degree() == 1);
    const auto z5 = zeta5_field();
    CHECK(z5.cm.k0.degree() == 2);
    CHECK(z5.cm.k0_abs.field->is_totally_real());
    // conjugation really is the inverse map on the cyclotomic generator
    CHECK(z5.conjugate(z5.field->generator()) == z5.field->generator().inverse());
    // a totally real field is rejected
    CHECK_THROWS_AS(CMFieldData::identify(NumberField::create(poly_from_ints({-2, 0, 1}))),
                    InvalidInput);
}

TEST_CASE("norm-one primitive elements") {
    const auto gauss = gaussian_field();
    const FieldElement a = norm_one_primitive(gauss);
    CHECK(a * gauss.conjugate(a) == gauss.field->one());
    CHECK(exactalg::minimal_polynomial(a).degree() == 2);
    // for Q(i) the search lands on +-i
    CHECK((a == gauss.field->generator() || a == -gauss.field->generator()));

    const auto z5 = zeta5_field();
    const FieldElement b = norm_one_primitive(z5);
    CHECK(b * z5.conjugate(b) == z5.field->one());
    CHECK(exactalg::minimal_polynomial(b).degree() == 4);
    // the generator itself is norm-one and primitive: zeta^2 = gen/conj(gen)
    const FieldElement g = z5.field->generator();
    CHECK(g / z5.conjugate(g) == g * g);
}

TEST_CASE("trace-form construction: Gaussian example") {
    const auto h = gaussian_structure();
    CHECK(h.rank() == 2);
    // gram = 2 * identity in the distinguished basis
    CHECK(h.space.gram() == QMat::identity(2) * Rational(2));
    CHECK(h.space.sig() == Signature{2, 0, 0});
    CHECK(h.sigma_coords[0] == h.field.field->one());
    CHECK(h.sigma_coords[1] == h.alpha);
    // (sigma . conj sigma) = xi^-1 = 1
    CHECK(h.sigma_sigma_bar == h.field.field->one());
    // alpha matrix is an isometry with the right minimal polynomial
    CHECK(h.alpha_matrix.transpose() * h.space.gram() * h.alpha_matrix == h.space.gram());
}

TEST_CASE("trace-form construction: zeta5 example") {
    const auto h = zeta5_structure();
    CHECK(h.rank() == 4);
    CHECK(h.space.sig() == Signature{2, 2, 0});
    CHECK(h.sigma_sigma_bar * h.xi == h.field.field->one());
    // totally positive xi must be rejected with the computed signature
    const auto k = zeta5_field();
    try {
        build_cm_structure(k, norm_one_primitive(k), k.field->one());
        CHECK(false);
    } catch (const SignatureMismatch& e) {
        CHECK(e.positive == 4);
        CHECK(e.negative == 0);
    }
}

TEST_CASE("period coordinates and basis changes") {
    const auto h = zeta5_structure();
    const auto coords = period_coordinates(h);
    CHECK(coords.size() == 4);
    CHECK(coords[0] == h.field.field->one());
    // permutation: swap the first two basis vectors
    QMat perm = QMat::identity(4);
    std::swap(perm.at(0, 0), perm.at(0, 1));
    std::swap(perm.at(1, 1), perm.at(1, 0));
    const auto permuted = period_coordinates(h, perm);
    CHECK(permuted[0] == coords[1]);
    CHECK(permuted[1] == coords[0]);
    // a unimodular change keeps Q-linear independence (verified inside)
    QMat u = QMat::identity(4);
    u.at(0, 1) = 3;
    u.at(2, 3) = -2;
    CHECK(period_coordinates(h, u).size() == 4);
    QMat sing(4, 4);
    CHECK_THROWS_AS(period_coordinates(h, sing), InvalidInput);
}

TEST_CASE("period fields") {
    const auto gauss = gaussian_structure();
    CHECK(period_field(gauss).degree() == 2);
    const auto z5 = zeta5_structure();
    const Subfield k_t = period_field(z5);
    CHECK(k_t.degree() == 4);
    // the pairing coordinates are Q-linearly independent
    CHECK(exactalg::rank(expand_over_basis(z5.sigma_coords)) == 4);
}

TEST_CASE("rational (1,1) classes") {
    const auto z5 = zeta5_structure();
    CHECK(rational_11_classes(z5.sigma_coords).rows() == 0);
    // direct sum with a class pairing to zero: T + <e> with (sigma.e) = 0
    auto coords = z5.sigma_coords;
    coords.push_back(z5.field.field->zero());
    const QMat kernel = rational_11_classes(coords);
    CHECK(kernel.rows() == 1);
    CHECK(kernel.at(0, 4) == 1);
}

TEST_CASE("endomorphism field solver recovers the construction field") {
    const auto gauss = gaussian_structure();
    const auto res = endomorphism_field(gauss.space, gauss.sigma_coords);
    CHECK(!res.algebra_not_field);
    CHECK(res.degree == 2);
    CHECK(res.classification == FieldClassification::CM);
    CHECK(res.real_subfield_degree == 1);
    CHECK(res.lt_dimension == 2);

    const auto z5 = zeta5_structure();
    const auto res5 = endomorphism_field(z5.space, z5.sigma_coords);
    CHECK(res5.degree == 4);
    CHECK(res5.classification == FieldClassification::CM);
    CHECK(res5.real_subfield_degree == 2);
    // CM structures: endomorphism field = period field inside the ambient field
    CHECK(res5.scalar_span.same_subspace(period_field(z5)));
    // the endomorphism field embeds into the period field
    CHECK(period_field(z5).contains_subspace(res5.scalar_span));
    // the real scalar span is the maximal totally real subfield K0
    CHECK(res5.real_scalar_span.same_subspace(
        Subfield::from_closed_span(z5.field.field, z5.field.cm.k0.basis())));
}

TEST_CASE("identity-only endomorphisms for a non-CM structure") {
    // T = Q^3 with form diag(1,1,-1) and period (1, t, t^2), t a root of
    // X^4 - X^2 - 1: then (sigma.sigma) = 1 + t^2 - t^4 = 0 exactly
    const auto field = NumberField::create(poly_from_ints({-1, 0, -1, 0, 1}));
    QMat g(3, 3);
    g.at(0, 0) = 1;
    g.at(1, 1) = 1;
    g.at(2, 2) = -1;
    const QuadraticSpace space(g);
    const FieldElement t = field->generator();
    const std::vector<FieldElement> coords = {field->one(), t, t * t};
    // sanity: isotropy of the period vector
    const auto gi = exactalg::inverse(space.gram());
    const auto w = apply_matrix(*gi, coords);
    FieldElement acc = field->zero();
    for (int i = 0; i < 3; ++i) acc = acc + coords[i] * w[i];
    CHECK(acc.is_zero());

    const auto res = endomorphism_field(space, coords);
    CHECK(!res.algebra_not_field);
    CHECK(res.degree == 1);
    CHECK(res.classification == FieldClassification::TotallyReal);
    CHECK(res.primitive_minpoly.degree() == 1);
}

TEST_CASE("is_cm evaluates all three criteria") {
    const auto z5 = zeta5_structure();
    const auto ev = is_cm(z5.space, z5.sigma_coords, z5.field.conj());
    CHECK(ev.verdict);
    CHECK(ev.endomorphism_cm);
    CHECK(ev.period_cm);
    CHECK(ev.fields_equal);
    const auto gauss = gaussian_structure();
    CHECK(is_cm(gauss.space, gauss.sigma_coords, gauss.field.conj()).verdict);
}

TEST_CASE("positive plane rational dimension") {
    const auto z5 = zeta5_structure();
    CHECK(positive_plane_rational_dimension(z5.space, z5.sigma_coords, z5.field.conj()) == 0);
    const auto gauss = gaussian_structure();
    // r = 2: the positive plane is all of T
    CHECK(positive_plane_rational_dimension(gauss.space, gauss.sigma_coords, gauss.field.conj()) == 2);

    // extended space at an equator point: the polarization class lies in the
    // positive plane, so the rational part has dimension >= 1
    const auto K = gauss.field.field;
    QMat ext(3, 3);
    ext.at(0, 0) = 2;
    ext.at(1, 1) = 2;
    ext.at(2, 2) = 2;
    const QuadraticSpace ext_space(ext);
    // sigma' = sigma - conj(sigma) + l at the equator class gamma_1 (d = 2,
    // a = 1 since d/(2s) = 1): coordinates (0, 2i, 2)
    std::vector<FieldElement> coords = {
        K->zero(), K->generator() * Rational(2), K->from_rational(Rational(2))};
    const int dim = positive_plane_rational_dimension(ext_space, coords, gauss.field.conj());
    CHECK(dim >= 1);
    CHECK(dim == 2);
}
