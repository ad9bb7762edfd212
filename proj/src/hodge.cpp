#include "twistorcm/hodge.hpp"

#include "twistorcm/errors.hpp"

#include <algorithm>
#include <sstream>

namespace twistorcm::hodge {

using exactalg::FieldHom;
using exactalg::kernel_basis;
using exactalg::make_rational;
using exactalg::minimal_polynomial;
using exactalg::row_space;
using exactalg::row_space_contains;
using exactalg::count_real_roots;

QuadraticSpace::QuadraticSpace(QMat gram) : gram_(std::move(gram)) {
    if (!gram_.is_symmetric()) throw InvalidInput("Gram matrix must be symmetric");
    sig_ = exactalg::signature(gram_);
    const int n = gram_.rows();
    if (sig_.null != 0)
        throw SignatureMismatch("degenerate quadratic space", sig_.positive, sig_.negative, sig_.null);
    const bool k3_like = (sig_.positive == 2 && sig_.negative == n - 2) ||
                         (sig_.positive == 3 && sig_.negative == n - 3);
    if (!k3_like)
        throw SignatureMismatch("signature must be (2, n-2) or (3, n-3)",
                                sig_.positive, sig_.negative, sig_.null);
}

Rational QuadraticSpace::pair(const QVec& a, const QVec& b) const {
    const QVec gb = gram_ * b;
    Rational acc(0);
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * gb[i];
    return acc;
}

QMat expand_over_basis(const std::vector<FieldElement>& values) {
    if (values.empty()) return QMat(0, 0);
    const int n = values[0].parent()->degree();
    QMat m(n, static_cast<int>(values.size()));
    for (size_t j = 0; j < values.size(); ++j) {
        if (values[j].parent().get() != values[0].parent().get())
            throw InvalidInput("coordinate vector spans several fields");
        const QVec c = values[j].coords();
        for (int i = 0; i < n; ++i) m.at(i, static_cast<int>(j)) = c[static_cast<size_t>(i)];
    }
    return m;
}

std::vector<FieldElement> apply_matrix(const QMat& m, const std::vector<FieldElement>& v) {
    if (v.empty() || m.cols() != static_cast<int>(v.size()))
        throw InvalidInput("matrix application shape mismatch");
    const auto field = v[0].parent();
    std::vector<FieldElement> out;
    out.reserve(static_cast<size_t>(m.rows()));
    for (int r = 0; r < m.rows(); ++r) {
        FieldElement acc = field->zero();
        for (int c = 0; c < m.cols(); ++c)
            if (m.at(r, c) != 0) acc = acc + v[static_cast<size_t>(c)] * m.at(r, c);
        out.push_back(std::move(acc));
    }
    return out;
}

QMat intersect_row_spaces(const QMat& a, const QMat& b) {
    if (a.cols() != b.cols()) throw InvalidInput("row-space intersection shape mismatch");
    if (a.rows() == 0 || b.rows() == 0) return QMat(0, a.cols());
    // left kernel of the stack [A; B]: u A + v B = 0 gives u A in both spaces
    QMat stacked(a.rows() + b.rows(), a.cols());
    for (int r = 0; r < a.rows(); ++r) stacked.set_row(r, a.row(r));
    for (int r = 0; r < b.rows(); ++r) stacked.set_row(a.rows() + r, b.row(r));
    const QMat left = kernel_basis(stacked.transpose());
    std::vector<QVec> rows;
    for (int k = 0; k < left.rows(); ++k) {
        QVec v(static_cast<size_t>(a.cols()), Rational(0));
        for (int r = 0; r < a.rows(); ++r)
            for (int c = 0; c < a.cols(); ++c)
                v[static_cast<size_t>(c)] += left.at(k, r) * a.at(r, c);
        rows.push_back(std::move(v));
    }
    if (rows.empty()) return QMat(0, a.cols());
    return row_space(QMat::from_rows(rows));
}

CMFieldData CMFieldData::identify(const NumberField::Ptr& K, std::optional<FieldElement> conj_image) {
    const int r = K->degree();
    if (r < 2 || r % 2 != 0) throw InvalidInput("a CM field has even degree >= 2");
    if (!K->is_totally_imaginary())
        throw InvalidInput("not a CM field: the modulus has real roots");

    std::vector<FieldElement> candidates;
    if (conj_image) candidates.push_back(*conj_image);
    candidates.push_back(K->generator().inverse());
    candidates.push_back(-K->generator());
    if (r == 2) candidates.push_back(-K->generator() - K->modulus().coeff(1));

    for (const auto& cand : candidates) {
        Conjugation conj;
        try {
            conj = Conjugation(K, cand);
        } catch (const InvalidInput&) {
            continue;
        }
        if (conj.is_identity()) continue;
        if (conj.fixed_subspace().rows() != r / 2) continue;
        CMContext ctx;
        try {
            ctx = CMContext::build(conj);
        } catch (const std::exception&) {
            continue;
        }
        if (!ctx.k0_abs.field->is_totally_real()) continue;
        return CMFieldData{K, std::move(ctx)};
    }
    throw InvalidInput("complex conjugation not identified for this field; supply it explicitly");
}

FieldElement norm_one_primitive(const CMFieldData& K, int height_budget) {
    const int r = K.degree();
    // generator powers first: for cyclotomic-style fields they are norm-one
    // primitives with small coordinates, which keeps every later Gram and
    // period computation light
    for (int k = 1; k < 2 * r; ++k) {
        const FieldElement cand = K.field->generator().pow(k);
        if (cand * K.conjugate(cand) == K.field->one() &&
            minimal_polynomial(cand).degree() == r)
            return cand;
    }
    for (long h = 1; h <= height_budget; ++h) {
        // coordinate vectors with max-norm exactly h, lexicographic
        std::vector<long> c(static_cast<size_t>(r), -h);
        while (true) {
            long mx = 0;
            for (long x : c) mx = std::max(mx, std::labs(x));
            if (mx == h) {
                QVec coords;
                coords.reserve(c.size());
                for (long x : c) coords.emplace_back(x);
                const FieldElement u = K.field->from_coords(coords);
                if (!u.is_zero()) {
                    const FieldElement alpha = u / K.conjugate(u);
                    if (minimal_polynomial(alpha).degree() == r) return alpha;
                }
            }
            int pos = r - 1;
            while (pos >= 0 && c[static_cast<size_t>(pos)] == h) {
                c[static_cast<size_t>(pos)] = -h;
                --pos;
            }
            if (pos < 0) break;
            ++c[static_cast<size_t>(pos)];
        }
    }
    throw BudgetExhausted("no primitive norm-one element found within budget");
}

CMHodgeStructure build_cm_structure(const CMFieldData& K, const FieldElement& alpha,
                                    const FieldElement& xi, const PrecisionPolicy& policy) {
    const int r = K.degree();
    if (alpha.parent().get() != K.field.get() || xi.parent().get() != K.field.get())
        throw InvalidInput("alpha and xi must live in the CM field");
    if (!(alpha * K.conjugate(alpha) == K.field->one()))
        throw InvalidInput("not an isometry generator: alpha * conj(alpha) != 1");
    if (minimal_polynomial(alpha).degree() != r)
        throw InvalidInput("not an isometry generator: alpha is not primitive");
    if (xi.is_zero() || !(K.conjugate(xi) == xi))
        throw InvalidInput("xi must be a nonzero element of the totally real subfield");

    // Gram matrix of the trace form on the basis gamma_i = alpha^{1-i}
    QMat gram(r, r);
    std::vector<FieldElement> alpha_pow(static_cast<size_t>(2 * r - 1), K.field->one());
    // powers alpha^{-(r-1)} .. alpha^{r-1}, index k -> power k-(r-1)
    for (int k = 0; k < 2 * r - 1; ++k)
        alpha_pow[static_cast<size_t>(k)] = alpha.pow(k - (r - 1));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            gram.at(i, j) = (xi * alpha_pow[static_cast<size_t>(j - i + (r - 1))]).trace();

    const Signature sig = exactalg::signature(gram);
    if (!(sig.positive == 2 && sig.negative == r - 2 && sig.null == 0)) {
        std::ostringstream msg;
        msg << "signature mismatch: trace form has signature (" << sig.positive << ", "
            << sig.negative << ")";
        throw SignatureMismatch(msg.str(), sig.positive, sig.negative, sig.null);
    }

    // matrix of multiplication by alpha in the distinguished basis
    QMat basis_cols(r, r);
    for (int j = 0; j < r; ++j) {
        const QVec c = alpha_pow[static_cast<size_t>(r - 1 - j)].coords();  // alpha^{-j} = gamma_{j+1}
        for (int i = 0; i < r; ++i) basis_cols.at(i, j) = c[static_cast<size_t>(i)];
    }
    const auto basis_inv = exactalg::inverse(basis_cols);
    if (!basis_inv) throw InvalidInput("alpha powers do not span: alpha is not primitive");
    QMat alpha_matrix(r, r);
    for (int j = 0; j < r; ++j) {
        // alpha * gamma_{j+1} = alpha^{1-j}
        const QVec target = alpha_pow[static_cast<size_t>(r - j)].coords();
        const QVec col = *basis_inv * target;
        for (int i = 0; i < r; ++i) alpha_matrix.at(i, j) = col[static_cast<size_t>(i)];
    }
    if (!(alpha_matrix.transpose() * gram * alpha_matrix == gram))
        throw TheoremViolation("alpha matrix is not an isometry of the trace form");

    // period coordinates and (sigma . conj sigma)
    std::vector<FieldElement> sigma;
    sigma.reserve(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) sigma.push_back(alpha_pow[static_cast<size_t>(r - 1 + i)]);
    const auto gram_inv = exactalg::inverse(gram);
    if (!gram_inv) throw TheoremViolation("nondegenerate form with singular Gram matrix");
    const std::vector<FieldElement> weights = apply_matrix(*gram_inv, sigma);
    FieldElement sigma_sq = K.field->zero();
    FieldElement sigma_pair = K.field->zero();
    for (int i = 0; i < r; ++i) {
        sigma_sq = sigma_sq + sigma[static_cast<size_t>(i)] * weights[static_cast<size_t>(i)];
        sigma_pair = sigma_pair + K.conjugate(sigma[static_cast<size_t>(i)]) * weights[static_cast<size_t>(i)];
    }
    if (!sigma_sq.is_zero()) throw TheoremViolation("(sigma . sigma) != 0 in the trace model");
    if (!(sigma_pair * xi == K.field->one()))
        throw TheoremViolation("(sigma . conj sigma) * xi != 1 in the trace model");

    // distinguished embedding: the unique positive place of (sigma . conj sigma)
    const FieldElement s0_abs = K.cm.k0_abs.to_abstract(sigma_pair);
    const auto signs = exactalg::certified_signs_at_real_embeddings(s0_abs, policy);
    int positive_count = 0, positive_index = -1;
    for (size_t i = 0; i < signs->size(); ++i)
        if ((*signs)[i] > 0) { ++positive_count; positive_index = static_cast<int>(i); }
    if (positive_count != 1)
        throw SignatureMismatch("xi must have exactly one positive embedding sign",
                                2 * positive_count, r - 2 * positive_count, 0);

    return CMHodgeStructure{QuadraticSpace(gram), std::move(alpha_matrix), K, alpha, xi,
                            std::move(sigma), sigma_pair, positive_index};
}

std::vector<FieldElement> period_coordinates(const CMHodgeStructure& h,
                                             const std::optional<QMat>& basis_change) {
    std::vector<FieldElement> coords = h.sigma_coords;
    if (basis_change) {
        if (!exactalg::inverse(*basis_change)) throw InvalidInput("singular basis change");
        coords = apply_matrix(basis_change->transpose(), coords);
    }
    if (exactalg::rank(expand_over_basis(coords)) != static_cast<int>(coords.size()))
        throw TheoremViolation("period coordinates lost Q-linear independence");
    return coords;
}

Subfield period_field(const std::vector<FieldElement>& coords) {
    if (coords.empty()) throw InvalidInput("empty coordinate vector");
    const auto& x1 = coords[0];
    if (x1.is_zero()) throw InvalidInput("reducible or degenerate structure: (sigma . gamma_1) = 0");
    std::vector<FieldElement> ratios;
    for (size_t i = 1; i < coords.size(); ++i) ratios.push_back(coords[i] / x1);
    return Subfield::generated_by(x1.parent(), ratios);
}

Subfield period_field(const CMHodgeStructure& h) { return period_field(h.sigma_coords); }

QMat rational_11_classes(const std::vector<FieldElement>& coords) {
    return row_space(kernel_basis(expand_over_basis(coords)));
}

namespace {

// Reduce v against canonical RREF rows; linear in v.
QVec reduce_against(const QMat& rref_rows, const std::vector<int>& pivots, const QVec& v) {
    QVec w = v;
    for (size_t k = 0; k < pivots.size(); ++k) {
        const Rational f = w[static_cast<size_t>(pivots[k])];
        if (f == 0) continue;
        for (int c = 0; c < rref_rows.cols(); ++c)
            w[static_cast<size_t>(c)] -= f * rref_rows.at(static_cast<int>(k), c);
    }
    return w;
}

std::vector<int> pivot_columns(const QMat& rref_rows) {
    std::vector<int> pivots;
    for (int r = 0; r < rref_rows.rows(); ++r) {
        for (int c = 0; c < rref_rows.cols(); ++c) {
            if (rref_rows.at(r, c) != 0) { pivots.push_back(c); break; }
        }
    }
    return pivots;
}

QVec flatten(const QMat& m) {
    QVec v;
    v.reserve(static_cast<size_t>(m.rows()) * m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) v.push_back(m.at(r, c));
    return v;
}

QMat unflatten(const QVec& v, int rows, int cols) {
    QMat m(rows, cols);
    size_t k = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m.at(r, c) = v[k++];
    return m;
}

} // namespace

EndomorphismFieldResult endomorphism_field(const QuadraticSpace& space,
                                           const std::vector<FieldElement>& coords) {
    const int r = space.dim();
    if (static_cast<int>(coords.size()) != r) throw InvalidInput("coordinate count != dimension");
    const auto ambient = coords[0].parent();
    const int n = ambient->degree();

    EndomorphismFieldResult result;
    result.algebra_not_field = rational_11_classes(coords).rows() > 0;

    // sigma's coefficient vector in the given basis: s = G^-1 x
    const auto gram_inv = exactalg::inverse(space.gram());
    if (!gram_inv) throw InvalidInput("degenerate Gram matrix");
    const std::vector<FieldElement> s = apply_matrix(*gram_inv, coords);

    // pairwise products s_k s_j, expanded over the ambient power basis
    std::vector<std::vector<QVec>> prod(static_cast<size_t>(r),
                                        std::vector<QVec>(static_cast<size_t>(r)));
    for (int k = 0; k < r; ++k)
        for (int j = k; j < r; ++j) {
            const QVec c = (s[static_cast<size_t>(k)] * s[static_cast<size_t>(j)]).coords();
            prod[static_cast<size_t>(k)][static_cast<size_t>(j)] = c;
            prod[static_cast<size_t>(j)][static_cast<size_t>(k)] = c;
        }

    // linear system: for i < j and each basis coordinate beta,
    //   sum_k M[i][k] (s_k s_j)_beta - M[j][k] (s_k s_i)_beta = 0
    const int unknowns = r * r;
    QMat system((r * (r - 1) / 2) * n, unknowns);
    int row = 0;
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            for (int beta = 0; beta < n; ++beta) {
                for (int k = 0; k < r; ++k) {
                    system.at(row, i * r + k) += prod[static_cast<size_t>(k)][static_cast<size_t>(j)][static_cast<size_t>(beta)];
                    system.at(row, j * r + k) -= prod[static_cast<size_t>(k)][static_cast<size_t>(i)][static_cast<size_t>(beta)];
                }
                ++row;
            }
        }
    const QMat lt_flat = kernel_basis(system);
    result.lt_dimension = lt_flat.rows();
    if (result.lt_dimension == 0) throw TheoremViolation("identity endomorphism missing from solver kernel");

    // restrict to adjoint-stable elements: phi with G^-1 phi^T G still in L_T
    const QMat lt_rref = row_space(lt_flat);
    const std::vector<int> lt_pivots = pivot_columns(lt_rref);
    QMat residuals(lt_flat.rows(), unknowns);
    for (int k = 0; k < lt_flat.rows(); ++k) {
        const QMat phi = unflatten(lt_flat.row(k), r, r);
        const QMat adj = *gram_inv * phi.transpose() * space.gram();
        residuals.set_row(k, reduce_against(lt_rref, lt_pivots, flatten(adj)));
    }
    const QMat coeff_kernel = kernel_basis(residuals.transpose());

    std::vector<QMat> basis;
    for (int k = 0; k < coeff_kernel.rows(); ++k) {
        QVec combo(static_cast<size_t>(unknowns), Rational(0));
        for (int i = 0; i < lt_flat.rows(); ++i) {
            const Rational& w = coeff_kernel.at(k, i);
            if (w == 0) continue;
            for (int c = 0; c < unknowns; ++c) combo[static_cast<size_t>(c)] += w * lt_flat.at(i, c);
        }
        basis.push_back(unflatten(combo, r, r));
    }
    result.matrix_basis = basis;
    result.degree = static_cast<int>(basis.size());
    if (result.degree == 0) throw TheoremViolation("endomorphism field lost the identity");

    // scalar action on sigma
    int pivot = -1;
    for (int i = 0; i < r; ++i)
        if (!s[static_cast<size_t>(i)].is_zero()) { pivot = i; break; }
    if (pivot < 0) throw InvalidInput("zero period vector");
    for (const auto& phi : basis) {
        const std::vector<FieldElement> image = apply_matrix(phi, s);
        const FieldElement lambda = image[static_cast<size_t>(pivot)] / s[static_cast<size_t>(pivot)];
        for (int i = 0; i < r; ++i)
            if (!(image[static_cast<size_t>(i)] == lambda * s[static_cast<size_t>(i)]))
                throw TheoremViolation("solver produced a non-proportional action on sigma");
        result.scalars.push_back(lambda);
    }

    if (result.algebra_not_field) return result;

    // multiplicative closure of the matrix basis (exact witness of the field
    // structure), and the scalar span as a subfield of the ambient field
    QMat basis_flat(result.degree, unknowns);
    for (int k = 0; k < result.degree; ++k) basis_flat.set_row(k, flatten(basis[static_cast<size_t>(k)]));
    const QMat basis_rref = row_space(basis_flat);
    for (int a = 0; a < result.degree; ++a)
        for (int b = a; b < result.degree; ++b)
            if (!row_space_contains(basis_rref,
                                    flatten(basis[static_cast<size_t>(a)] * basis[static_cast<size_t>(b)])))
                throw TheoremViolation("endomorphism basis not closed under products");
    result.scalar_span = Subfield::from_closed_span(ambient, result.scalars);
    if (result.scalar_span.degree() != result.degree)
        throw TheoremViolation("scalar embedding of the endomorphism field is not injective");

    // primitive element among scalars (deterministic combinations)
    std::optional<std::pair<FieldElement, QMat>> primitive;
    std::vector<std::pair<FieldElement, QMat>> candidates;
    for (int k = 0; k < result.degree; ++k)
        candidates.emplace_back(result.scalars[static_cast<size_t>(k)], basis[static_cast<size_t>(k)]);
    for (long w = 2; w <= 6; ++w) {
        FieldElement sc = ambient->zero();
        QMat mat(r, r);
        Rational weight(1);
        for (int k = 0; k < result.degree; ++k) {
            sc = sc + result.scalars[static_cast<size_t>(k)] * weight;
            mat = mat + basis[static_cast<size_t>(k)] * weight;
            weight *= Rational(w);
        }
        candidates.emplace_back(sc, mat);
    }
    for (const auto& cand : candidates) {
        if (minimal_polynomial(cand.first).degree() == result.degree) {
            primitive = cand;
            break;
        }
    }
    if (!primitive) throw BudgetExhausted("no primitive endomorphism found within budget");
    result.primitive_matrix = primitive->second;
    result.primitive_minpoly = minimal_polynomial(primitive->first);

    const int real_roots = count_real_roots(result.primitive_minpoly).count;
    if (real_roots == 0) result.classification = FieldClassification::CM;
    else if (real_roots == result.degree) result.classification = FieldClassification::TotallyReal;
    else throw TheoremViolation("endomorphism field neither totally real nor totally imaginary");

    // self-adjoint part
    std::vector<QVec> sym_rows;
    for (int k = 0; k < result.degree; ++k) {
        const QMat adj = *gram_inv * basis[static_cast<size_t>(k)].transpose() * space.gram();
        QVec diff = flatten(adj - basis[static_cast<size_t>(k)]);
        sym_rows.push_back(std::move(diff));
    }
    QMat sym_system(static_cast<int>(sym_rows.size()), unknowns);
    for (int k = 0; k < result.degree; ++k) sym_system.set_row(k, sym_rows[static_cast<size_t>(k)]);
    const QMat sym_kernel = kernel_basis(sym_system.transpose());
    result.real_subfield_degree = sym_kernel.rows();
    std::vector<FieldElement> real_scalars;
    for (int k = 0; k < sym_kernel.rows(); ++k) {
        FieldElement sc = ambient->zero();
        for (int i = 0; i < result.degree; ++i)
            sc = sc + result.scalars[static_cast<size_t>(i)] * sym_kernel.at(k, i);
        real_scalars.push_back(sc);
    }
    result.real_scalar_span = Subfield::from_closed_span(ambient, real_scalars);

    const bool consistent =
        (result.classification == FieldClassification::CM &&
         2 * result.real_subfield_degree == result.degree) ||
        (result.classification == FieldClassification::TotallyReal &&
         result.real_subfield_degree == result.degree);
    if (!consistent)
        throw TheoremViolation("self-adjoint dimension inconsistent with root classification");

    // a totally real endomorphism field acting on a small structure cannot
    // happen (dim over the field would be < 3)
    if (result.classification == FieldClassification::TotallyReal && r < 3 * result.degree)
        throw TheoremViolation("totally real endomorphism field with dim_K T < 3");

    return result;
}

namespace {

// CM certification of a subfield of an ambient field with known conjugation.
bool subfield_is_cm(const Subfield& sf, const Conjugation& conj) {
    if (sf.degree() % 2 != 0) return false;
    if (!sf.is_stable_under(conj)) return false;
    const QMat fixed = intersect_row_spaces(sf.coord_rows(), conj.fixed_subspace());
    if (2 * fixed.rows() != sf.degree()) return false;
    const auto abs = sf.make_abstract();
    if (!abs.field->is_totally_imaginary()) return false;
    std::vector<FieldElement> fixed_elems;
    for (int k = 0; k < fixed.rows(); ++k)
        fixed_elems.push_back(sf.ambient()->from_coords(fixed.row(k)));
    const Subfield fixed_sf = Subfield::from_closed_span(sf.ambient(), fixed_elems);
    return fixed_sf.make_abstract().field->is_totally_real();
}

} // namespace

CMEvidence is_cm(const QuadraticSpace& space, const std::vector<FieldElement>& coords,
                 const Conjugation& ambient_conj) {
    return is_cm(space, coords, ambient_conj, endomorphism_field(space, coords));
}

CMEvidence is_cm(const QuadraticSpace& space, const std::vector<FieldElement>& coords,
                 const Conjugation& ambient_conj, const EndomorphismFieldResult& endo) {
    if (endo.algebra_not_field)
        throw InvalidInput("is_cm requires an irreducible structure");
    const int r = space.dim();
    CMEvidence ev;
    ev.endomorphism_cm =
        endo.classification == FieldClassification::CM && endo.degree == r;

    const Subfield k_period = period_field(coords);
    ev.period_cm = k_period.degree() == r && subfield_is_cm(k_period, ambient_conj);

    ev.fields_equal = k_period.same_subspace(endo.scalar_span);

    if (ev.endomorphism_cm != ev.period_cm || ev.period_cm != ev.fields_equal)
        throw TheoremViolation("the three CM criteria disagree");
    ev.verdict = ev.endomorphism_cm;
    return ev;
}

int positive_plane_rational_dimension(const QuadraticSpace& space,
                                      const std::vector<FieldElement>& coords,
                                      const Conjugation& ambient_conj) {
    const int r = space.dim();
    const auto ambient = coords[0].parent();
    const int n = ambient->degree();
    // unknowns: c in Q^r and u in Q^n with  G c = u * x + conj(u) * xbar
    // componentwise in the ambient field
    QMat conj_mat(n, n);
    for (int j = 0; j < n; ++j) {
        const QVec img = ambient_conj.apply(ambient->element(Poly::monomial(j, Rational(1)))).coords();
        for (int i = 0; i < n; ++i) conj_mat.at(i, j) = img[static_cast<size_t>(i)];
    }
    QMat system(r * n, r + n);
    for (int i = 0; i < r; ++i) {
        // (G c)_i embeds as a rational constant: only basis coordinate 0
        for (int j = 0; j < r; ++j) system.at(i * n + 0, j) = space.gram().at(i, j);
        const QMat mult_x = coords[static_cast<size_t>(i)].multiplication_matrix();
        const QMat mult_xbar = ambient_conj.apply(coords[static_cast<size_t>(i)]).multiplication_matrix();
        const QMat total = mult_x + mult_xbar * conj_mat;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) system.at(i * n + a, r + b) = -total.at(a, b);
    }
    const QMat sol = kernel_basis(system);
    // solutions project injectively to the c-part
    for (int k = 0; k < sol.rows(); ++k) {
        bool c_zero = true;
        for (int j = 0; j < r; ++j)
            if (sol.at(k, j) != 0) { c_zero = false; break; }
        if (c_zero) throw TheoremViolation("positive-plane system has a c = 0 solution");
    }
    return sol.rows();
}

} // namespace twistorcm::hodge
