#ifndef TWISTORCM_HODGE_HPP
#define TWISTORCM_HODGE_HPP

#include "twistorcm/extension.hpp"

#include <optional>
#include <vector>

namespace twistorcm::hodge {

using exactalg::CMContext;
using exactalg::Conjugation;
using exactalg::FieldElement;
using exactalg::NumberField;
using exactalg::Poly;
using exactalg::PrecisionPolicy;
using exactalg::QMat;
using exactalg::QVec;
using exactalg::Rational;
using exactalg::Signature;
using exactalg::Subfield;

/// Finite-dimensional rational vector space with a nondegenerate symmetric
/// bilinear form of signature (2, n-2) or (3, n-3).
class QuadraticSpace {
public:
    explicit QuadraticSpace(QMat gram);
    int dim() const { return gram_.rows(); }
    const QMat& gram() const { return gram_; }
    const Signature& sig() const { return sig_; }
    Rational pair(const QVec& a, const QVec& b) const;

private:
    QMat gram_;
    Signature sig_;
};

/// A CM number field with its complex conjugation identified and the maximal
/// totally real subfield K0 extracted (as a subfield and as a standalone
/// totally real field).
struct CMFieldData {
    NumberField::Ptr field;
    CMContext cm;      // conj, k0, k0_abs
    int degree() const { return field->degree(); }
    const Conjugation& conj() const { return cm.conj; }
    FieldElement conjugate(const FieldElement& e) const { return cm.conj.apply(e); }

    /// Certify that K is CM and locate its conjugation.  Tried candidates:
    /// the supplied image, then theta^-1, -theta, and (degree 2) the other
    /// root of the modulus.
    static CMFieldData identify(const NumberField::Ptr& K,
                                std::optional<FieldElement> conj_image = std::nullopt);
};

/// Norm-one primitive element alpha = u / conj(u), found by a deterministic
/// small-height enumeration of u.
FieldElement norm_one_primitive(const CMFieldData& K, int height_budget = 3);

/// A rational Hodge structure of K3 type with CM, in its distinguished basis
/// gamma_i = alpha^{1-i}(gamma_1): the Gram matrix, the isometry alpha as a
/// matrix, and the period pairing coordinates (sigma . gamma_i) = alpha^{i-1}.
struct CMHodgeStructure {
    QuadraticSpace space;            // trace-form Gram in the distinguished basis
    QMat alpha_matrix;
    CMFieldData field;               // the ambient field K = Q(alpha)
    FieldElement alpha;
    FieldElement xi;                 // trace-form twist, in K0
    std::vector<FieldElement> sigma_coords;  // (1, alpha, ..., alpha^{r-1})
    FieldElement sigma_sigma_bar;    // (sigma . conj sigma), equals xi^-1
    int distinguished_embedding;     // index of the K0 embedding where it is positive
    int rank() const { return space.dim(); }
};

/// Trace-form construction: T = K with (x, y) = Tr_{K/Q}(xi * x * conj(y)).
/// Requires alpha * conj(alpha) = 1 and primitive, and xi in K0 with exactly
/// one positive real-embedding sign (signature (2, r-2)).
CMHodgeStructure build_cm_structure(const CMFieldData& K, const FieldElement& alpha,
                                    const FieldElement& xi,
                                    const PrecisionPolicy& policy = {});

/// Pairing coordinates after an optional rational change of basis; verifies
/// that the coordinates stay Q-linearly independent.
std::vector<FieldElement> period_coordinates(const CMHodgeStructure& h,
                                             const std::optional<QMat>& basis_change = std::nullopt);

/// Smallest subfield of the ambient field containing all x_i / x_1.
/// Throws InvalidInput when x_1 = 0 (reducible or degenerate input).
Subfield period_field(const std::vector<FieldElement>& coords);
Subfield period_field(const CMHodgeStructure& h);

/// Kernel of gamma -> (sigma . gamma) over Q: the rational (1,1) classes.
/// Rows of the result span the kernel; its row count is the Picard number of
/// the structure.
QMat rational_11_classes(const std::vector<FieldElement>& coords);

enum class FieldClassification { TotallyReal, CM };

struct EndomorphismFieldResult {
    bool algebra_not_field = false;      // input was reducible
    std::vector<QMat> matrix_basis;      // basis of End_Hdg as matrices
    std::vector<FieldElement> scalars;   // their scalar action on sigma
    Subfield scalar_span;                // End_Hdg embedded in the ambient field
    Subfield real_scalar_span;           // self-adjoint part, embedded
    QMat primitive_matrix;
    Poly primitive_minpoly;
    FieldClassification classification = FieldClassification::TotallyReal;
    int degree = 0;
    int real_subfield_degree = 0;
    int lt_dimension = 0;                // dim of { phi : phi(sigma) parallel sigma }
};

/// Solve the proportionality condition "phi(sigma) parallel sigma" (all 2x2
/// minors of the coordinate pair vanish, expanded over a Q-basis of the
/// ambient field), intersect with its image under the metric adjoint
/// phi -> G^-1 phi^T G, and classify the resulting field.
EndomorphismFieldResult endomorphism_field(const QuadraticSpace& space,
                                           const std::vector<FieldElement>& coords);

struct CMEvidence {
    bool endomorphism_cm = false;   // K_T a CM field of full degree
    bool period_cm = false;         // k_T a CM field of full degree
    bool fields_equal = false;      // K_T = k_T inside the ambient field
    bool verdict = false;
};

/// Evaluate the three equivalent CM criteria and check they agree.
/// `ambient_conj` is the conjugation of the ambient field of the coordinates.
CMEvidence is_cm(const QuadraticSpace& space, const std::vector<FieldElement>& coords,
                 const Conjugation& ambient_conj);
/// Same, reusing an already computed endomorphism solve for the structure.
CMEvidence is_cm(const QuadraticSpace& space, const std::vector<FieldElement>& coords,
                 const Conjugation& ambient_conj, const EndomorphismFieldResult& endo);

/// dim_Q (P_T intersect T): 0 generically, 1 or 2 in the special cases.
int positive_plane_rational_dimension(const QuadraticSpace& space,
                                      const std::vector<FieldElement>& coords,
                                      const Conjugation& ambient_conj);

// --- shared helpers -------------------------------------------------------

/// Expand a vector of ambient-field values into the (n x r) rational matrix
/// of their power-basis coordinates (column j = coords of values[j]).
QMat expand_over_basis(const std::vector<FieldElement>& values);
/// Apply a rational matrix to a vector of field elements.
std::vector<FieldElement> apply_matrix(const QMat& m, const std::vector<FieldElement>& v);
/// Intersection of two row spaces.
QMat intersect_row_spaces(const QMat& a, const QMat& b);

} // namespace twistorcm::hodge

#endif
