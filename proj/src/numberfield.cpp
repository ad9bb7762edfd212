#include "twistorcm/numberfield.hpp"

#include "twistorcm/errors.hpp"
#include "twistorcm/irreducible.hpp"

namespace twistorcm::exactalg {

NumberField::Ptr NumberField::create(const Poly& modulus) {
    if (modulus.degree() < 1) throw InvalidInput("number field modulus must have degree >= 1");
    const Poly monic = modulus.monic();
    if (!irreducible_over_rationals(monic))
        throw InvalidInput("number field modulus is reducible: " + monic.to_string());
    return Ptr(new NumberField(monic, monic.degree()));
}

NumberField::Ptr NumberField::create_certified(const Poly& modulus) {
    if (modulus.degree() < 1) throw InvalidInput("number field modulus must have degree >= 1");
    const Poly monic = modulus.monic();
    return Ptr(new NumberField(monic, monic.degree()));
}

NumberField::Ptr NumberField::rationals() {
    static Ptr q = create_certified(Poly::variable());
    return q;
}

FieldElement NumberField::element(Poly rep) const {
    return FieldElement(shared_from_this(), std::move(rep));
}

FieldElement NumberField::from_rational(const Rational& q) const {
    return element(Poly::constant(q));
}

FieldElement NumberField::generator() const { return element(Poly::variable()); }
FieldElement NumberField::zero() const { return element(Poly()); }
FieldElement NumberField::one() const { return element(Poly::constant(Rational(1))); }

FieldElement NumberField::from_coords(const QVec& coords) const {
    if (static_cast<int>(coords.size()) != degree_)
        throw InvalidInput("coordinate vector length does not match field degree");
    return element(Poly(std::vector<Rational>(coords)));
}

int NumberField::real_embedding_count() const {
    return static_cast<int>(real_root_intervals().size());
}

const std::vector<QInterval>& NumberField::real_root_intervals() const {
    std::call_once(roots_once_, [this] { roots_ = count_real_roots(modulus_); });
    return roots_->isolating_intervals;
}

FieldElement::FieldElement(NumberField::Ptr parent, Poly rep) : parent_(std::move(parent)) {
    if (!parent_) throw InvalidInput("field element without parent field");
    rep_ = rep.degree() >= parent_->degree() ? rep.divrem(parent_->modulus()).second : std::move(rep);
}

void FieldElement::check_same_field(const FieldElement& o) const {
    if (parent_.get() != o.parent_.get())
        throw InvalidInput("field elements from different parents");
}

Rational FieldElement::as_rational() const {
    if (!is_rational()) throw InvalidInput("element is not rational");
    return rep_.coeff(0);
}

QVec FieldElement::coords() const {
    QVec v(static_cast<size_t>(parent_->degree()), Rational(0));
    for (int i = 0; i <= rep_.degree(); ++i) v[static_cast<size_t>(i)] = rep_.coeff(i);
    return v;
}

FieldElement FieldElement::operator-() const { return FieldElement(parent_, -rep_); }

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same_field(o);
    return FieldElement(parent_, rep_ + o.rep_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same_field(o);
    return FieldElement(parent_, rep_ - o.rep_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same_field(o);
    return FieldElement(parent_, rep_ * o.rep_);
}

FieldElement FieldElement::operator*(const Rational& c) const {
    return FieldElement(parent_, rep_ * c);
}

FieldElement FieldElement::operator+(const Rational& c) const {
    return FieldElement(parent_, rep_ + Poly::constant(c));
}

FieldElement FieldElement::operator-(const Rational& c) const {
    return FieldElement(parent_, rep_ - Poly::constant(c));
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw InvalidInput("inverse of zero field element");
    // extended Euclid: a*rep + b*modulus = gcd = constant
    Poly r0 = parent_->modulus(), r1 = rep_;
    Poly s0 = Poly(), s1 = Poly::constant(Rational(1));
    while (!r1.is_zero()) {
        const auto [q, r] = r0.divrem(r1);
        Poly s2 = s0 - q * s1;
        r0 = r1; r1 = r;
        s0 = s1; s1 = std::move(s2);
    }
    if (r0.degree() != 0)
        throw TheoremViolation("element not invertible in a field: gcd " + r0.to_string());
    return FieldElement(parent_, s0 * (Rational(1) / r0.coeff(0)));
}

FieldElement FieldElement::operator/(const FieldElement& o) const { return *this * o.inverse(); }

FieldElement FieldElement::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    FieldElement acc = parent_->one();
    FieldElement base = *this;
    unsigned long n = static_cast<unsigned long>(e);
    while (n > 0) {
        if (n & 1UL) acc = acc * base;
        base = base * base;
        n >>= 1UL;
    }
    return acc;
}

bool FieldElement::operator==(const FieldElement& o) const {
    return parent_.get() == o.parent_.get() && rep_ == o.rep_;
}

QMat FieldElement::multiplication_matrix() const {
    const int n = parent_->degree();
    QMat m(n, n);
    FieldElement power = *this;  // this * gen^0
    for (int j = 0; j < n; ++j) {
        const QVec c = power.coords();
        for (int i = 0; i < n; ++i) m.at(i, j) = c[static_cast<size_t>(i)];
        if (j + 1 < n) power = FieldElement(parent_, power.rep() * Poly::variable());
    }
    return m;
}

Rational FieldElement::trace() const {
    const QMat m = multiplication_matrix();
    Rational t(0);
    for (int i = 0; i < m.rows(); ++i) t += m.at(i, i);
    return t;
}

Rational FieldElement::norm() const { return determinant(multiplication_matrix()); }

Poly minimal_polynomial(const FieldElement& e) {
    const int n = e.parent()->degree();
    // rows: coordinates of e^0, e^1, ...; stop at the first dependence
    std::vector<QVec> powers;
    FieldElement p = e.parent()->one();
    for (int k = 0; k <= n; ++k) {
        powers.push_back(p.coords());
        QMat m = QMat::from_rows(powers);
        if (rank(m) < static_cast<int>(powers.size())) {
            // e^k = sum of lower powers: solve the transposed system
            QMat lower(n, k);
            for (int j = 0; j < k; ++j)
                for (int i = 0; i < n; ++i) lower.at(i, j) = powers[static_cast<size_t>(j)][static_cast<size_t>(i)];
            const auto sol = solve(lower, powers.back());
            if (!sol) throw TheoremViolation("minimal polynomial dependence not solvable");
            std::vector<Rational> coeffs(static_cast<size_t>(k) + 1);
            for (int j = 0; j < k; ++j) coeffs[static_cast<size_t>(j)] = -(*sol)[static_cast<size_t>(j)];
            coeffs[static_cast<size_t>(k)] = 1;
            return Poly(std::move(coeffs));
        }
        p = p * e;
    }
    throw TheoremViolation("no dependence among field element powers");
}

FieldHom::FieldHom(NumberField::Ptr domain, FieldElement generator_image)
    : domain_(std::move(domain)), image_(std::move(generator_image)) {
    if (!domain_ || !image_.parent()) throw InvalidInput("incomplete field homomorphism");
    // image must satisfy the domain modulus
    FieldElement value = image_.parent()->zero();
    const Poly& f = domain_->modulus();
    for (int i = f.degree(); i >= 0; --i) value = value * image_ + f.coeff(i);
    if (!value.is_zero())
        throw InvalidInput("generator image does not satisfy the domain modulus");
    // cache the images of the power basis as a matrix
    const int n = domain_->degree();
    const int m = image_.parent()->degree();
    matrix_ = QMat(m, n);
    FieldElement power = image_.parent()->one();
    for (int j = 0; j < n; ++j) {
        const QVec coords = power.coords();
        for (int i = 0; i < m; ++i) matrix_.at(i, j) = coords[static_cast<size_t>(i)];
        if (j + 1 < n) power = power * image_;
    }
}

FieldHom FieldHom::identity(const NumberField::Ptr& field) {
    return FieldHom(field, field->generator());
}

FieldElement FieldHom::apply(const FieldElement& e) const {
    if (e.parent().get() != domain_.get()) throw InvalidInput("homomorphism applied outside its domain");
    const QVec out = matrix_ * e.coords();
    return image_.parent()->from_coords(out);
}

Conjugation::Conjugation(NumberField::Ptr field, FieldElement generator_image)
    : field_(std::move(field)), image_(std::move(generator_image)) {
    if (image_.parent().get() != field_.get())
        throw InvalidInput("conjugation image must live in the same field");
    FieldHom hom(field_, image_);  // validates root-of-modulus
    const FieldElement twice = hom.apply(image_);
    if (!(twice == field_->generator()))
        throw InvalidInput("conjugation candidate is not an involution");
    const int n = field_->degree();
    matrix_ = QMat(n, n);
    FieldElement power = field_->one();
    for (int j = 0; j < n; ++j) {
        const QVec coords = power.coords();
        for (int i = 0; i < n; ++i) matrix_.at(i, j) = coords[static_cast<size_t>(i)];
        if (j + 1 < n) power = power * image_;
    }
}

FieldElement Conjugation::apply(const FieldElement& e) const {
    if (e.parent().get() != field_.get()) throw InvalidInput("conjugation applied outside its field");
    return field_->from_coords(matrix_ * e.coords());
}

bool Conjugation::is_identity() const { return image_ == field_->generator(); }

QMat Conjugation::fixed_subspace() const {
    const int n = field_->degree();
    // columns: (conj - id) applied to the power basis
    QMat m(n, n);
    for (int j = 0; j < n; ++j) {
        const FieldElement img = apply(field_->element(Poly::monomial(j, Rational(1))));
        const QVec c = img.coords();
        for (int i = 0; i < n; ++i) m.at(i, j) = c[static_cast<size_t>(i)] - ((i == j) ? Rational(1) : Rational(0));
    }
    return row_space(kernel_basis(m));
}

std::optional<std::vector<int>> certified_signs_at_real_embeddings(
    const FieldElement& e, const PrecisionPolicy& policy) {
    const NumberField::Ptr& field = e.parent();
    if (!field->is_totally_real())
        throw InvalidInput("certified signs require a totally real field");
    if (e.is_zero()) return std::nullopt;

    const Poly& modulus = field->modulus();
    std::vector<QInterval> roots = field->real_root_intervals();
    std::vector<int> signs(roots.size(), 0);
    for (size_t i = 0; i < roots.size(); ++i) {
        // refine in small steps: a sign certified by a wide interval is just
        // as certified, and most values are far from zero
        int bits = 8;
        QInterval iv = roots[i];
        while (true) {
            iv = refine_to_width(modulus, iv, bits);
            const QInterval value = interval_eval(e.rep(), iv);
            if (!value.contains_zero()) {
                signs[i] = value.lo > 0 ? 1 : -1;
                break;
            }
            if (bits >= policy.cap_bits)
                throw PrecisionExhausted("sign of field element undecided at " +
                                         std::to_string(policy.cap_bits) + " bits");
            bits *= 2;
        }
    }
    return signs;
}

} // namespace twistorcm::exactalg
