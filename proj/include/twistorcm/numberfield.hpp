#ifndef TWISTORCM_NUMBERFIELD_HPP
#define TWISTORCM_NUMBERFIELD_HPP

#include "twistorcm/linalg.hpp"
#include "twistorcm/poly.hpp"
#include "twistorcm/roots.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace twistorcm::exactalg {

class FieldElement;

/// Q[X]/(f) for a monic irreducible f.  Fields are immutable and shared by
/// pointer; two elements interoperate only when they share the same parent
/// object.
class NumberField : public std::enable_shared_from_this<NumberField> {
public:
    using Ptr = std::shared_ptr<const NumberField>;

    /// Verifies irreducibility (desk-scale decision procedure).
    static Ptr create(const Poly& modulus);
    /// For moduli whose irreducibility is already certified structurally
    /// (minimal polynomials of field elements, extension primitives).
    static Ptr create_certified(const Poly& modulus);
    /// The rationals as the degree-1 field Q[X]/(X).
    static Ptr rationals();

    const Poly& modulus() const { return modulus_; }
    int degree() const { return degree_; }

    FieldElement element(Poly rep) const;
    FieldElement from_rational(const Rational& q) const;
    FieldElement generator() const;
    FieldElement zero() const;
    FieldElement one() const;
    /// Element from power-basis coordinates (c_0 ... c_{n-1}).
    FieldElement from_coords(const QVec& coords) const;

    /// Number of real embeddings (real roots of the modulus).
    int real_embedding_count() const;
    bool is_totally_real() const { return real_embedding_count() == degree_; }
    bool is_totally_imaginary() const { return real_embedding_count() == 0; }
    /// Isolating intervals for the real roots of the modulus, sorted.
    const std::vector<QInterval>& real_root_intervals() const;

private:
    NumberField(Poly modulus, int degree) : modulus_(std::move(modulus)), degree_(degree) {}
    Poly modulus_;
    int degree_;
    // root isolation is computed on first use; once_flag keeps concurrent
    // readers safe without an external locking contract
    mutable std::once_flag roots_once_;
    mutable std::optional<RealRootCertificate> roots_;
};

/// Element of a NumberField: a representative polynomial of degree < deg(f).
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(NumberField::Ptr parent, Poly rep);

    const NumberField::Ptr& parent() const { return parent_; }
    const Poly& rep() const { return rep_; }
    bool is_zero() const { return rep_.is_zero(); }
    bool is_rational() const { return rep_.degree() <= 0; }
    Rational as_rational() const;   // requires is_rational()
    QVec coords() const;            // power-basis coordinates, length = degree

    FieldElement operator-() const;
    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator*(const Rational& c) const;
    FieldElement operator+(const Rational& c) const;
    FieldElement operator-(const Rational& c) const;
    FieldElement inverse() const;   // requires nonzero
    FieldElement operator/(const FieldElement& o) const;
    FieldElement pow(long e) const;
    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    /// Matrix of multiplication by this element in the power basis.
    QMat multiplication_matrix() const;
    Rational trace() const;
    Rational norm() const;

    std::string to_string(const std::string& var = "t") const { return rep_.to_string(var); }

private:
    void check_same_field(const FieldElement& o) const;
    NumberField::Ptr parent_;
    Poly rep_;
};

/// Monic polynomial of minimal degree with e as a root (always irreducible).
Poly minimal_polynomial(const FieldElement& e);

/// Q-algebra homomorphism between number fields, determined by the image of
/// the generator (verified to be a root of the domain modulus).
class FieldHom {
public:
    FieldHom() = default;
    FieldHom(NumberField::Ptr domain, FieldElement generator_image);
    const NumberField::Ptr& domain() const { return domain_; }
    const NumberField::Ptr& codomain() const { return image_.parent(); }
    const FieldElement& generator_image() const { return image_; }
    FieldElement apply(const FieldElement& e) const;
    static FieldHom identity(const NumberField::Ptr& field);

private:
    NumberField::Ptr domain_;
    FieldElement image_;
    QMat matrix_;  // codomain coords of the domain power basis images
};

/// Field involution given by the image of the generator; used for the complex
/// conjugation of CM fields and its extensions.
class Conjugation {
public:
    Conjugation() = default;
    /// Verifies: image is a root of the modulus and the map is an involution.
    Conjugation(NumberField::Ptr field, FieldElement generator_image);
    const NumberField::Ptr& field() const { return field_; }
    FieldElement apply(const FieldElement& e) const;
    bool is_identity() const;
    /// RREF basis (rows) of the fixed subspace, in power-basis coordinates.
    QMat fixed_subspace() const;

private:
    NumberField::Ptr field_;
    FieldElement image_;
    QMat matrix_;  // image coords of the power basis
};

/// Signs of a nonzero element at the real embeddings of a totally real field,
/// ordered by the embedding (ascending real root of the modulus).  Returns
/// nullopt when e = 0 (the "identically zero" signal).  Interval evaluation is
/// refined from policy.start_bits, doubling up to policy.cap_bits.
std::optional<std::vector<int>> certified_signs_at_real_embeddings(
    const FieldElement& e, const PrecisionPolicy& policy = {});

} // namespace twistorcm::exactalg

#endif
