#include "twistorcm/subfield.hpp"

#include "twistorcm/errors.hpp"

namespace twistorcm::exactalg {

namespace {

QMat span_rows(const NumberField::Ptr& ambient, const std::vector<FieldElement>& elements) {
    std::vector<QVec> rows;
    rows.reserve(elements.size());
    for (const auto& e : elements) {
        if (e.parent().get() != ambient.get())
            throw InvalidInput("subfield generator outside the ambient field");
        rows.push_back(e.coords());
    }
    if (rows.empty()) return QMat(0, ambient->degree());
    return row_space(QMat::from_rows(rows));
}

std::vector<FieldElement> rows_to_elements(const NumberField::Ptr& ambient, const QMat& rows) {
    std::vector<FieldElement> out;
    out.reserve(static_cast<size_t>(rows.rows()));
    for (int r = 0; r < rows.rows(); ++r) out.push_back(ambient->from_coords(rows.row(r)));
    return out;
}

bool closed_under_products(const NumberField::Ptr& ambient, const QMat& rows) {
    const auto elems = rows_to_elements(ambient, rows);
    for (size_t i = 0; i < elems.size(); ++i)
        for (size_t j = i; j < elems.size(); ++j)
            if (!row_space_contains(rows, (elems[i] * elems[j]).coords())) return false;
    return true;
}

} // namespace

Subfield Subfield::generated_by(const NumberField::Ptr& ambient,
                                const std::vector<FieldElement>& elements) {
    std::vector<FieldElement> gens = elements;
    gens.push_back(ambient->one());
    QMat rows = span_rows(ambient, gens);
    while (true) {
        auto elems = rows_to_elements(ambient, rows);
        std::vector<QVec> all;
        for (int r = 0; r < rows.rows(); ++r) all.push_back(rows.row(r));
        for (size_t i = 0; i < elems.size(); ++i)
            for (size_t j = i; j < elems.size(); ++j)
                all.push_back((elems[i] * elems[j]).coords());
        QMat next = row_space(QMat::from_rows(all));
        if (next.rows() == rows.rows()) break;
        rows = std::move(next);
    }
    if (ambient->degree() % rows.rows() != 0)
        throw TheoremViolation("subfield degree does not divide the ambient degree");
    return Subfield(ambient, rows_to_elements(ambient, rows), rows);
}

Subfield Subfield::from_closed_span(const NumberField::Ptr& ambient,
                                    const std::vector<FieldElement>& spanning) {
    std::vector<FieldElement> gens = spanning;
    gens.push_back(ambient->one());
    QMat rows = span_rows(ambient, gens);
    if (!closed_under_products(ambient, rows))
        throw InvalidInput("span is not closed under multiplication");
    if (ambient->degree() % rows.rows() != 0)
        throw TheoremViolation("subfield degree does not divide the ambient degree");
    return Subfield(ambient, rows_to_elements(ambient, rows), rows);
}

bool Subfield::contains(const FieldElement& e) const {
    if (e.parent().get() != ambient_.get()) return false;
    return row_space_contains(rows_, e.coords());
}

bool Subfield::contains_subspace(const Subfield& other) const {
    if (other.ambient_.get() != ambient_.get()) return false;
    for (int r = 0; r < other.rows_.rows(); ++r)
        if (!row_space_contains(rows_, other.rows_.row(r))) return false;
    return true;
}

bool Subfield::same_subspace(const Subfield& other) const {
    return rows_ == other.rows_ && ambient_.get() == other.ambient_.get();
}

bool Subfield::is_stable_under(const Conjugation& conj) const {
    if (conj.field().get() != ambient_.get()) throw InvalidInput("conjugation on a different field");
    for (const auto& b : basis_)
        if (!row_space_contains(rows_, conj.apply(b).coords())) return false;
    return true;
}

Subfield::Abstract Subfield::make_abstract() const {
    const int n = degree();
    // deterministic primitive element search: basis elements, then small
    // integer combinations
    std::vector<FieldElement> candidates;
    for (const auto& b : basis_)
        if (!b.is_rational()) candidates.push_back(b);
    for (long w = 1; w <= 4; ++w) {
        FieldElement acc = ambient_->zero();
        Rational weight(1);
        for (const auto& b : basis_) {
            acc = acc + b * weight;
            weight *= Rational(w);
        }
        candidates.push_back(acc);
    }
    if (n == 1) candidates.push_back(ambient_->one());

    for (const auto& cand : candidates) {
        const Poly mp = minimal_polynomial(cand);
        if (mp.degree() != n) continue;
        NumberField::Ptr abs_field = NumberField::create_certified(mp);
        Abstract result;
        result.field = abs_field;
        result.embedding = FieldHom(abs_field, cand);
        std::vector<QVec> powers;
        FieldElement p = ambient_->one();
        for (int k = 0; k < n; ++k) {
            powers.push_back(p.coords());
            if (k + 1 < n) p = p * cand;
        }
        result.power_rows = QMat::from_rows(powers);
        return result;
    }
    throw BudgetExhausted("no primitive element found for subfield within the candidate budget");
}

FieldElement Subfield::Abstract::to_abstract(const FieldElement& ambient_elt) const {
    // solve coords(elt) = sum_k c_k coords(primitive^k)
    const QMat system = power_rows.transpose();
    const auto sol = solve(system, ambient_elt.coords());
    if (!sol) throw InvalidInput("element does not lie in the subfield");
    return field->from_coords(*sol);
}

} // namespace twistorcm::exactalg
