#ifndef TWISTORCM_EXTENSION_HPP
#define TWISTORCM_EXTENSION_HPP

#include "twistorcm/subfield.hpp"

#include <optional>
#include <utility>

namespace twistorcm::exactalg {

/// Conjugation-aware data for a CM base field: the involution, its fixed
/// field, and the fixed field as a standalone totally real number field.
struct CMContext {
    Conjugation conj;
    Subfield k0;
    Subfield::Abstract k0_abs;
    static CMContext build(const Conjugation& conj);
};

/// Square root of an element of a totally real field, or certified nullopt.
/// Strategy: certified embedding signs (negative anywhere -> no), a rational
/// norm-square pretest, then exact reconstruction of the candidate root from
/// refined embedding intervals with an integrality denominator bound, checked
/// by exact squaring.
std::optional<FieldElement> sqrt_in_totally_real(const FieldElement& e,
                                                 const PrecisionPolicy& policy = {});

/// Square root in Q, a totally real field, or a CM field (the CM case reduces
/// to totally real square roots through K = K0 + K0*eta).  Throws Unsupported
/// for other base fields.
std::optional<FieldElement> sqrt_in_field(const FieldElement& e,
                                          const std::optional<CMContext>& cm,
                                          const PrecisionPolicy& policy = {});

/// Both roots of Y^2 + pY + q in the base field, or nullopt when the
/// quadratic is irreducible over it.
std::optional<std::pair<FieldElement, FieldElement>> quadratic_roots_in_base(
    const FieldElement& p, const FieldElement& q,
    const std::optional<CMContext>& cm, const PrecisionPolicy& policy = {});

/// base(Y)/(Y^2 + pY + q) as an absolute number field of degree 2*deg(base),
/// with the base embedding and the adjoined root tracked.
struct QuadraticExtension {
    NumberField::Ptr absolute;
    FieldHom base_embedding;
    FieldElement adjoined_root;
    Poly root_absolute_minpoly;  // minimal polynomial of the adjoined root
    long primitive_shift = 0;    // the generator is root + shift * theta
};

/// Builds the extension; throws NotAFieldExtension when the quadratic has a
/// root in the base (checked exactly first).  The absolute minimal polynomial
/// of the adjoined root can be skipped by performance-sensitive callers.
QuadraticExtension compose_extension(const FieldElement& p, const FieldElement& q,
                                     const std::optional<CMContext>& cm,
                                     const PrecisionPolicy& policy = {},
                                     bool compute_root_minpoly = true);

} // namespace twistorcm::exactalg

#endif
