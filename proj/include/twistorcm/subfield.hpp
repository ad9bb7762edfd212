#ifndef TWISTORCM_SUBFIELD_HPP
#define TWISTORCM_SUBFIELD_HPP

#include "twistorcm/numberfield.hpp"

namespace twistorcm::exactalg {

/// A subfield of an ambient number field, stored as a canonical (RREF)
/// Q-basis that contains 1 and is closed under multiplication.
class Subfield {
public:
    /// Empty placeholder; any real instance comes from the factories below.
    Subfield() = default;

    /// Smallest subfield containing Q and the given elements: saturate the
    /// Q-span of {1} u elements under pairwise products until stable.
    static Subfield generated_by(const NumberField::Ptr& ambient,
                                 const std::vector<FieldElement>& elements);
    /// Wrap an already multiplicatively closed span (verified).
    static Subfield from_closed_span(const NumberField::Ptr& ambient,
                                     const std::vector<FieldElement>& spanning);

    const NumberField::Ptr& ambient() const { return ambient_; }
    int degree() const { return static_cast<int>(basis_.size()); }
    const std::vector<FieldElement>& basis() const { return basis_; }
    const QMat& coord_rows() const { return rows_; }

    bool contains(const FieldElement& e) const;
    bool contains_subspace(const Subfield& other) const;
    bool same_subspace(const Subfield& other) const;
    bool is_stable_under(const Conjugation& conj) const;

    /// The subfield as a standalone number field: a primitive element is
    /// located by a deterministic search, its minimal polynomial becomes the
    /// modulus, and both directions of the identification are returned.
    struct Abstract {
        NumberField::Ptr field;
        FieldHom embedding;            // abstract -> ambient
        QMat power_rows;               // rows: coords of primitive^k in ambient
        FieldElement to_abstract(const FieldElement& ambient_elt) const;
    };
    Abstract make_abstract() const;

private:
    Subfield(NumberField::Ptr ambient, std::vector<FieldElement> basis, QMat rows)
        : ambient_(std::move(ambient)), basis_(std::move(basis)), rows_(std::move(rows)) {}
    NumberField::Ptr ambient_;
    std::vector<FieldElement> basis_;  // rows of rows_, as elements
    QMat rows_;                        // canonical RREF coordinate rows
};

} // namespace twistorcm::exactalg

#endif
