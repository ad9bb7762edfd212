#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "twistorcm/errors.hpp"
#include "twistorcm/twistor.hpp"

using namespace twistorcm;
using namespace twistorcm::twistor;

namespace {

using exactalg::make_rational;
using exactalg::Poly;
using hodge::CMFieldData;
using hodge::CMHodgeStructure;

Poly poly_from_ints(const std::vector<long>& c) {
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return Poly(std::move(v));
}

QVec qvec(const std::vector<long>& c) {
    QVec v;
    for (long x : c) v.emplace_back(x);
    return v;
}

CMHodgeStructure gaussian_structure() {
    const auto k = CMFieldData::identify(NumberField::create(poly_from_ints({1, 0, 1})));
    return hodge::build_cm_structure(k, hodge::norm_one_primitive(k), k.field->one());
}

CMHodgeStructure zeta5_structure() {
    const auto k = CMFieldData::identify(NumberField::create(poly_from_ints({1, 1, 1, 1, 1})));
    const FieldElement c = k.field->generator() + k.field->generator().inverse();
    return hodge::build_cm_structure(k, k.field->generator(), -(k.field->one()) - c);
}

} // namespace

TEST_CASE("extend_by_polarization") {
    const auto gauss = extend_by_polarization(gaussian_structure(), 2);
    CHECK(gauss.extended_gram.rows() == 3);
    CHECK(gauss.extended_gram.at(0, 0) == 2);
    CHECK(gauss.extended_gram.at(2, 2) == 2);
    CHECK(exactalg::signature(gauss.extended_gram) == exactalg::Signature{3, 0, 0});
    const auto z5 = extend_by_polarization(zeta5_structure(), 1);
    CHECK(exactalg::signature(z5.extended_gram) == exactalg::Signature{3, 2, 0});
    CHECK_THROWS_AS(extend_by_polarization(gaussian_structure(), 0), InvalidInput);
}

TEST_CASE("classify_class: pole, equator, generic") {
    const auto setup = extend_by_polarization(gaussian_structure(), 2);
    const auto pole = classify_class(setup, qvec({0, 0, 1}));
    CHECK(pole.location == Location::Pole);
    const auto eq = classify_class(setup, qvec({1, 0, 0}));
    CHECK(eq.location == Location::Equator);
    CHECK(eq.m == 0);
    CHECK(eq.norm == 2);
    // running example: l' = gamma_1 + l with d = 2
    const auto gen = classify_class(setup, qvec({1, 0, 1}));
    CHECK(gen.location == Location::Generic);
    CHECK(gen.m == 2);
    CHECK(gen.norm == 4);
}

TEST_CASE("point_from_class: the Gaussian running example") {
    const auto setup = extend_by_polarization(gaussian_structure(), 2);
    const auto cls = classify_class(setup, qvec({1, 0, 1}));
    const auto [p, q] = point_from_class(setup, cls);
    // roots of t^2 + 2t - 1 in Q(i, sqrt 2)
    CHECK(p.ambient.extended);
    CHECK(p.ambient.field->degree() == 4);
    CHECK(p.a + p.b == p.ambient.field->from_rational(Rational(-2)));
    CHECK(p.a * p.b == p.ambient.field->from_rational(Rational(-1)));
    CHECK(q.a == p.b);
    // conic and orthogonality hold exactly (also asserted inside)
    const FieldElement s = p.ambient.from_base.apply(setup.base.sigma_sigma_bar);
    CHECK((p.a * p.b * s * Rational(2) + Rational(2)).is_zero());
    // wrong branches are rejected with the documented signals
    CHECK_THROWS_AS(point_from_class(setup, classify_class(setup, qvec({0, 0, 1}))), InvalidInput);
    CHECK_THROWS_AS(point_from_class(setup, classify_class(setup, qvec({1, 0, 0}))), InvalidInput);
}

TEST_CASE("fibre_structure invariants on the Gaussian example") {
    const auto setup = extend_by_polarization(gaussian_structure(), 2);
    const auto cls = classify_class(setup, qvec({1, 0, 1}));
    const auto fibre = fibre_structure(setup, cls);
    CHECK(fibre.space.sig() == exactalg::Signature{2, 0, 0});
    // x'_1 = -m
    CHECK(fibre.x_prime[0] == fibre.ambient.field->from_rational(Rational(-2)));
    // m_1 = -d/m (l'.gamma_1) = -(2/2)*2 = -2, so the first coordinate is -4
    CHECK(fibre.m_shift[0] == Rational(-2));
    CHECK(fibre.sigma_coords[0] == fibre.ambient.field->from_rational(Rational(-4)));
    // s' = m^2 s + 2d = 4 + 4 = 8
    CHECK(fibre.s_prime == setup.base.field.field->from_rational(Rational(8)));
}

TEST_CASE("fibre CM field: corrected closed formula, two routes agree") {
    const auto setup = extend_by_polarization(gaussian_structure(), 2);
    const auto cls = classify_class(setup, qvec({1, 0, 1}));
    const auto quad = fibre_quadratic_data(setup, cls);
    // gamma = m(alpha + alpha^-1) = 0, delta = m^2 - (d/2s)(alpha^2+alpha^-2-2) = 8
    CHECK(quad.gamma.is_zero());
    CHECK(quad.delta == setup.base.field.field->from_rational(Rational(8)));
    CHECK(quad.totally_negative);
    // eta^2 = -8: the fibre field is Q(sqrt(-2))
    CHECK((quad.eta * quad.eta) == quad.eta.parent()->from_rational(Rational(-8)));
    const auto field = fibre_cm_field(setup, cls);
    CHECK(field.absolute_field->degree() == 2);
    CHECK(field.absolute_minpoly == poly_from_ints({8, 0, 1}));
    const auto rec = verify_fibre_cm(setup, cls);
    CHECK(rec.pass());
    CHECK(rec.solver_cm_full_degree);
    CHECK(rec.two_route_equal);
    CHECK(rec.k0_equal);
    CHECK(rec.criteria_agree);
    CHECK(rec.cm_verdict);
    CHECK(rec.rho == 1);
}

TEST_CASE("conjugate pair gives the same fibre data") {
    const auto setup = extend_by_polarization(gaussian_structure(), 4);
    const auto cls = classify_class(setup, qvec({1, 1, 1}));
    REQUIRE(cls.location == Location::Generic);
    const auto [p, q] = point_from_class(setup, cls);
    CHECK(p.a == q.b);
    CHECK(p.b == q.a);
    // gamma, delta depend only on (m, d, s), hence are label-independent
    const auto quad = fibre_quadratic_data(setup, cls);
    const FieldElement eta_swapped =
        q.a * q.ambient.from_base.apply(setup.base.alpha) +
        q.b * q.ambient.from_base.apply(setup.base.alpha).inverse();
    const FieldElement gamma_emb = p.ambient.from_base.apply(quad.gamma);
    const FieldElement delta_emb = p.ambient.from_base.apply(quad.delta);
    CHECK((eta_swapped * eta_swapped + gamma_emb * eta_swapped + delta_emb).is_zero());
}

TEST_CASE("rank-4 fibres: honest alarms where the CM transfer fails") {
    // d = 3, l' = gamma_1 + l on the zeta5 structure: every hypothesis of the
    // CM-transfer statement holds, yet the solver finds only Q; the record
    // carries the alarms instead of pretending
    const auto setup = extend_by_polarization(zeta5_structure(), 3);
    const auto cls = classify_class(setup, qvec({1, 0, 0, 0, 1}));
    REQUIRE(cls.location == Location::Generic);
    REQUIRE(cls.norm == 1);
    const auto rec = verify_fibre_cm(setup, cls);
    CHECK(!rec.pass());
    CHECK(!rec.solver_cm_full_degree);
    CHECK(rec.solver.degree == 1);
    CHECK(!rec.quad.totally_negative);
    CHECK(rec.criteria_agree);   // all three CM criteria are consistently false here
    CHECK(!rec.cm_verdict);
    CHECK(rec.rho == 1);
    // fibre_cm_field itself signals the internal-consistency failure
    CHECK_THROWS_AS(fibre_cm_field(setup, cls), TheoremViolation);
    // lt_dimension records the line-preserving field of Remark-2.6(iii) type
    CHECK(rec.solver.lt_dimension == 4);
}

TEST_CASE("equator analysis") {
    // r = 2: the equator fibre is still CM (the rank-2 exception)
    const auto gauss = extend_by_polarization(gaussian_structure(), 2);
    const auto eq2 = classify_class(gauss, qvec({1, 0, 0}));
    const auto rep2 = equator_analysis(gauss, eq2);
    CHECK(rep2.cm_verdict);
    CHECK(rep2.imaginary_span_dim == 1);
    CHECK(rep2.minimal_substructure_dim == 2);
    CHECK(rep2.alarms.empty());

    // r = 4: never CM on the equator; period field degree > 2, imaginary span 2
    const auto z5 = extend_by_polarization(zeta5_structure(), 1);
    const auto eq4 = classify_class(z5, qvec({1, 0, 1, 0, 0}));
    REQUIRE(eq4.location == Location::Equator);
    REQUIRE(eq4.norm > 0);
    const auto rep4 = equator_analysis(z5, eq4);
    CHECK(!rep4.cm_verdict);
    CHECK(rep4.imaginary_span_dim == 2);
    CHECK(rep4.period_field_degree > 2);
    CHECK(rep4.alarms.empty());
    // minimal substructure: one rational (1,1) class inside T', so dim 3
    CHECK(rep4.minimal_substructure_dim == 3);
    CHECK_THROWS_AS(equator_analysis(z5, classify_class(z5, qvec({1, 0, 0, 0, 1}))), InvalidInput);
}

TEST_CASE("picard numbers") {
    const auto gauss = extend_by_polarization(gaussian_structure(), 2);
    CHECK(picard_number_at(gauss, classify_class(gauss, qvec({0, 0, 1}))) == 1);  // pole
    CHECK(picard_number_at(gauss, classify_class(gauss, qvec({1, 0, 1}))) == 1);  // generic
    CHECK(picard_number_at(gauss, classify_class(gauss, qvec({1, 0, 0}))) == 1);  // equator, r=2

    const auto z5 = extend_by_polarization(zeta5_structure(), 1);
    CHECK(picard_number_at(z5, classify_class(z5, qvec({0, 0, 0, 0, 1}))) == 1);
    // equator classes of a rank-4 CM structure always jump to r/2 = 2
    CHECK(picard_number_at(z5, classify_class(z5, qvec({1, 0, 1, 0, 0}))) == 2);
}

TEST_CASE("geometric picard dictionary") {
    CHECK(geometric_picard(1, 1) == 1);
    CHECK(geometric_picard(1, 20) == 20);
    CHECK(geometric_picard(0, 7) == 6);
    CHECK_THROWS_AS(geometric_picard(-1, 1), InvalidInput);
}

TEST_CASE("jump survey: locality holds exhaustively at small height") {
    const auto gauss = extend_by_polarization(gaussian_structure(), 2);
    const auto rows = jump_survey(gauss, 3);
    CHECK(!rows.empty());
    int generic = 0, equator = 0, poles = 0, rejected = 0;
    for (const auto& row : rows) {
        if (row.rejected) { ++rejected; continue; }
        if (row.location == Location::Generic) { ++generic; CHECK(row.rho == 1); }
        if (row.location == Location::Equator) { ++equator; CHECK(row.rho >= 1); }
        if (row.location == Location::Pole) { ++poles; CHECK(row.rho == 1); }
    }
    CHECK(generic > 0);
    CHECK(equator > 0);
    CHECK(poles == 1);
    // r = 2: no class anywhere jumps past 1, even at height 5
    for (const auto& row : jump_survey(gauss, 5))
        if (!row.rejected) CHECK(row.rho <= 1);
}

TEST_CASE("zeta5 survey at height 1: equator rows jump to exactly 2") {
    const auto z5 = extend_by_polarization(zeta5_structure(), 2);
    const auto rows = jump_survey(z5, 1);
    bool saw_eq = false;
    for (const auto& row : rows) {
        if (row.rejected) continue;
        if (row.location == Location::Equator) {
            saw_eq = true;
            CHECK(row.rho == 2);
        } else {
            CHECK(row.rho == 1);
        }
    }
    CHECK(saw_eq);
}
