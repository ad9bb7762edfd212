#ifndef TWISTORCM_TWISTOR_HPP
#define TWISTORCM_TWISTOR_HPP

#include "twistorcm/hodge.hpp"

#include <string>
#include <utility>
#include <vector>

namespace twistorcm::twistor {

using exactalg::Conjugation;
using exactalg::FieldElement;
using exactalg::FieldHom;
using exactalg::NumberField;
using exactalg::Poly;
using exactalg::PrecisionPolicy;
using exactalg::QMat;
using exactalg::QVec;
using exactalg::Rational;
using exactalg::Subfield;

/// T extended by a polarization class l with (l.l) = d > 0, of type (1,1)
/// and orthogonal to T.
struct TwistorSetup {
    hodge::CMHodgeStructure base;
    long d = 1;
    QMat extended_gram;   // diag(G, d)
    QMat alpha_inverse;   // matrix of alpha^{-1} on T
    int rank() const { return base.rank(); }
};

TwistorSetup extend_by_polarization(hodge::CMHodgeStructure base, long d);

enum class Location { Pole, Equator, Generic };
std::string location_name(Location loc);

/// A rational class l' in T + Q*l, with m = (l.l') and its own square.
struct PolarizedClass {
    QVec vec;       // r+1 coefficients over (gamma_1..gamma_r, l)
    Rational m;
    Rational norm;
    Location location = Location::Generic;
    bool admissible() const { return norm > 0; }
};

PolarizedClass classify_class(const TwistorSetup& setup, const QVec& lprime);

/// Field containing one class's twistor-point coordinates: the base CM field
/// itself when the root quadratic splits, its quadratic extension otherwise.
struct ClassAmbient {
    NumberField::Ptr field;
    FieldHom from_base;
    Conjugation conj;       // conjugation at the distinguished realization
    FieldElement omega;     // square root of the root-quadratic discriminant
    bool extended = false;
};

/// Twistor point orthogonal to a generic class, normalized to c = 1:
/// sigma' = a sigma + b conj(sigma) + l with a + b + m = 0 and
/// 2ab(sigma.conj sigma) + d = 0.
struct TwistorPoint {
    ClassAmbient ambient;
    FieldElement a, b;
};

/// The two conjugate points (swap of a and b).
std::pair<TwistorPoint, TwistorPoint> point_from_class(const TwistorSetup& setup,
                                                       const PolarizedClass& cls,
                                                       const PrecisionPolicy& policy = {});

/// The fibre Hodge structure T' = l'^perp in the basis
/// gamma'_i = gamma_i - m^{-1} (l'.gamma_i) l, with its period coordinates.
struct FibreStructure {
    hodge::QuadraticSpace space;            // gram' (rational)
    std::vector<FieldElement> sigma_coords; // (sigma'.gamma'_i) = x'_i + m_i
    std::vector<FieldElement> x_prime;      // a(alpha^{i-1}-alpha^{1-i}) - m alpha^{1-i}
    QVec m_shift;                           // m_i = -d m^{-1} (l'.gamma_i)
    ClassAmbient ambient;
    FieldElement s_rescaled;                // (sigma.conj sigma) after the l'-rescale, in K
    FieldElement s_prime;                   // (sigma'.conj sigma') = m^2 s + 2d, in K
};

FibreStructure fibre_structure(const TwistorSetup& setup, const PolarizedClass& cls,
                               const PrecisionPolicy& policy = {});

/// Closed-form fibre field data: the quadratic X^2 + gamma X + delta over K0
/// satisfied by eta = a alpha + b alpha^{-1}, with the certified embedding
/// signs of its discriminant.
struct FibreQuadraticData {
    FieldElement gamma;            // m (alpha + alpha^{-1}), in K
    FieldElement delta;            // m^2 - (d / 2s)(alpha^2 + alpha^{-2} - 2), in K
    std::vector<int> disc_signs;   // signs of gamma^2 - 4 delta at the K0 embeddings
    bool totally_negative = false;
    FieldElement eta;              // in the class ambient
};

/// The fibre CM field when the discriminant certificate holds.
struct FibreCMField {
    FibreQuadraticData quad;
    NumberField::Ptr absolute_field;   // degree r over Q
    Poly absolute_minpoly;             // of eta over Q
    Subfield field_in_ambient;         // K0(eta) inside the class ambient
    Subfield real_subfield;            // K0 embedded in the class ambient
};

FibreQuadraticData fibre_quadratic_data(const TwistorSetup& setup, const PolarizedClass& cls,
                                        const PrecisionPolicy& policy = {});

/// Builds the absolute field of X^2 + gamma X + delta over K0.  Throws
/// TheoremViolation when gamma^2 - 4 delta is not totally negative (the
/// internal-consistency alarm; see verify_fibre_cm for the non-throwing
/// diagnostic route).
FibreCMField fibre_cm_field(const TwistorSetup& setup, const PolarizedClass& cls,
                            const PrecisionPolicy& policy = {});

/// Full per-fibre verification record: the independent solver route, the
/// closed-formula route, and their comparisons.  Mismatches are collected as
/// alarms instead of aborting, so surveys can report them per class.
struct FibreConsistency {
    FibreQuadraticData quad;
    hodge::EndomorphismFieldResult solver;
    bool solver_cm_full_degree = false;
    bool two_route_equal = false;
    bool k0_equal = false;
    bool criteria_agree = false;       // the three CM criteria of is_cm
    bool cm_verdict = false;           // their common value when they agree
    int rho = -1;
    std::vector<std::string> alarms;
    bool pass() const { return alarms.empty(); }
};

FibreConsistency verify_fibre_cm(const TwistorSetup& setup, const PolarizedClass& cls,
                                 const PrecisionPolicy& policy = {});

/// Equator fibre analysis (m = 0): period-field degree, the dimension of the
/// purely imaginary coordinate span, the CM verdict of the minimal
/// substructure, and that substructure's dimension.
struct EquatorReport {
    int period_field_degree = 0;
    int imaginary_span_dim = 0;
    bool cm_verdict = false;
    int minimal_substructure_dim = 0;
    std::vector<std::string> alarms;
};

EquatorReport equator_analysis(const TwistorSetup& setup, const PolarizedClass& cls,
                               const PrecisionPolicy& policy = {});

/// Picard number of the twistor point attached to a class (poles included).
int picard_number_at(const TwistorSetup& setup, const PolarizedClass& cls,
                     const PrecisionPolicy& policy = {});

/// rho_z + rho_S - 1.
int geometric_picard(int rho_z, int rho_s);

struct SurveyRow {
    QVec cls;
    Location location = Location::Generic;
    Rational m, norm;
    bool rejected = false;   // norm <= 0
    int rho = -1;
};

/// All primitive integer classes of max-norm height <= H (sign-normalized),
/// with locations and Picard numbers; asserts jump locality (rho >= 2 only on
/// the equator, generic points have rho = 1, poles have rho = 1).
std::vector<SurveyRow> jump_survey(const TwistorSetup& setup, long height,
                                   const PrecisionPolicy& policy = {});

} // namespace twistorcm::twistor

#endif
