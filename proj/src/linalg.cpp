#include "twistorcm/linalg.hpp"

#include "twistorcm/errors.hpp"

namespace twistorcm::exactalg {

QMat QMat::identity(int n) {
    QMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

QMat QMat::from_rows(const std::vector<QVec>& rows) {
    if (rows.empty()) return QMat(0, 0);
    QMat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int r = 0; r < m.rows(); ++r) {
        if (static_cast<int>(rows[static_cast<size_t>(r)].size()) != m.cols())
            throw InvalidInput("ragged rows in matrix construction");
        m.set_row(r, rows[static_cast<size_t>(r)]);
    }
    return m;
}

QMat QMat::transpose() const {
    QMat t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

QMat QMat::operator*(const QMat& o) const {
    if (cols_ != o.rows_) throw InvalidInput("matrix product shape mismatch");
    QMat p(rows_, o.cols_);
    for (int r = 0; r < rows_; ++r)
        for (int k = 0; k < cols_; ++k) {
            const Rational& a = at(r, k);
            if (a == 0) continue;
            for (int c = 0; c < o.cols_; ++c) p.at(r, c) += a * o.at(k, c);
        }
    return p;
}

QVec QMat::operator*(const QVec& v) const {
    if (static_cast<int>(v.size()) != cols_) throw InvalidInput("matrix-vector shape mismatch");
    QVec out(static_cast<size_t>(rows_), Rational(0));
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            if (at(r, c) != 0) out[static_cast<size_t>(r)] += at(r, c) * v[static_cast<size_t>(c)];
    return out;
}

QMat QMat::operator+(const QMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("matrix sum shape mismatch");
    QMat s = *this;
    for (size_t i = 0; i < data_.size(); ++i) s.data_[i] += o.data_[i];
    return s;
}

QMat QMat::operator-(const QMat& o) const { return *this + (o * Rational(-1)); }

QMat QMat::operator*(const Rational& c) const {
    QMat s = *this;
    for (auto& x : s.data_) x *= c;
    return s;
}

bool QMat::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (int r = 0; r < rows_; ++r)
        for (int c = r + 1; c < cols_; ++c)
            if (at(r, c) != at(c, r)) return false;
    return true;
}

QVec QMat::row(int r) const {
    QVec v(static_cast<size_t>(cols_));
    for (int c = 0; c < cols_; ++c) v[static_cast<size_t>(c)] = at(r, c);
    return v;
}

void QMat::set_row(int r, const QVec& v) {
    for (int c = 0; c < cols_; ++c) at(r, c) = v[static_cast<size_t>(c)];
}

QVec QMat::col(int c) const {
    QVec v(static_cast<size_t>(rows_));
    for (int r = 0; r < rows_; ++r) v[static_cast<size_t>(r)] = at(r, c);
    return v;
}

std::vector<int> rref(QMat& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int pivot = -1;
        for (int r = row; r < m.rows(); ++r)
            if (m.at(r, col) != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        if (pivot != row)
            for (int c = 0; c < m.cols(); ++c) std::swap(m.at(pivot, c), m.at(row, c));
        const Rational inv = Rational(1) / m.at(row, col);
        for (int c = 0; c < m.cols(); ++c) m.at(row, c) *= inv;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col) == 0) continue;
            const Rational f = m.at(r, col);
            for (int c = 0; c < m.cols(); ++c) m.at(r, c) -= f * m.at(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int rank(QMat m) { return static_cast<int>(rref(m).size()); }

QMat kernel_basis(const QMat& m) {
    QMat r = m;
    const std::vector<int> pivots = rref(r);
    std::vector<bool> is_pivot(static_cast<size_t>(m.cols()), false);
    for (int p : pivots) is_pivot[static_cast<size_t>(p)] = true;

    std::vector<QVec> basis;
    for (int free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[static_cast<size_t>(free_col)]) continue;
        QVec v(static_cast<size_t>(m.cols()), Rational(0));
        v[static_cast<size_t>(free_col)] = 1;
        for (size_t pi = 0; pi < pivots.size(); ++pi)
            v[static_cast<size_t>(pivots[pi])] = -r.at(static_cast<int>(pi), free_col);
        basis.push_back(std::move(v));
    }
    if (basis.empty()) return QMat(0, m.cols());
    return QMat::from_rows(basis);
}

std::optional<QMat> inverse(const QMat& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    const int n = m.rows();
    QMat aug(n, 2 * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, n + r) = 1;
    }
    const auto pivots = rref(aug);
    if (static_cast<int>(pivots.size()) != n || pivots.back() >= n) {
        if (static_cast<int>(pivots.size()) != n) return std::nullopt;
    }
    for (int i = 0; i < n; ++i)
        if (pivots[static_cast<size_t>(i)] != i) return std::nullopt;
    QMat inv(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) inv.at(r, c) = aug.at(r, n + c);
    return inv;
}

Rational determinant(QMat m) {
    if (m.rows() != m.cols()) throw InvalidInput("determinant of non-square matrix");
    const int n = m.rows();
    Rational det(1);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (m.at(r, col) != 0) { pivot = r; break; }
        if (pivot < 0) return Rational(0);
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
            det = -det;
        }
        det *= m.at(col, col);
        const Rational inv = Rational(1) / m.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            if (m.at(r, col) == 0) continue;
            const Rational f = m.at(r, col) * inv;
            for (int c = col; c < n; ++c) m.at(r, c) -= f * m.at(col, c);
        }
    }
    return det;
}

std::optional<QVec> solve(const QMat& m, const QVec& b) {
    if (static_cast<int>(b.size()) != m.rows()) throw InvalidInput("solve shape mismatch");
    QMat aug(m.rows(), m.cols() + 1);
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols()) = b[static_cast<size_t>(r)];
    }
    const auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    QVec x(static_cast<size_t>(m.cols()), Rational(0));
    for (size_t i = 0; i < pivots.size(); ++i)
        x[static_cast<size_t>(pivots[i])] = aug.at(static_cast<int>(i), m.cols());
    return x;
}

std::optional<std::vector<QVec>> solve_many(const QMat& m, const std::vector<QVec>& bs,
                                            int* rank_out) {
    const int k = static_cast<int>(bs.size());
    QMat aug(m.rows(), m.cols() + k);
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
        for (int j = 0; j < k; ++j) aug.at(r, m.cols() + j) = bs[static_cast<size_t>(j)][static_cast<size_t>(r)];
    }
    const auto pivots = rref(aug);
    int main_rank = 0;
    for (int p : pivots)
        if (p < m.cols()) ++main_rank;
    if (rank_out) *rank_out = main_rank;
    for (int p : pivots)
        if (p >= m.cols()) return std::nullopt;
    std::vector<QVec> out(static_cast<size_t>(k), QVec(static_cast<size_t>(m.cols()), Rational(0)));
    for (size_t i = 0; i < pivots.size(); ++i)
        for (int j = 0; j < k; ++j)
            out[static_cast<size_t>(j)][static_cast<size_t>(pivots[i])] =
                aug.at(static_cast<int>(i), m.cols() + j);
    // consistency: rows below the pivot rows must have zero rhs
    for (int r = static_cast<int>(pivots.size()); r < m.rows(); ++r)
        for (int j = 0; j < k; ++j)
            if (aug.at(r, m.cols() + j) != 0) return std::nullopt;
    return out;
}

QMat row_space(const QMat& m) {
    QMat r = m;
    const auto pivots = rref(r);
    QMat out(static_cast<int>(pivots.size()), m.cols());
    for (int i = 0; i < out.rows(); ++i) out.set_row(i, r.row(i));
    return out;
}

bool row_space_contains(const QMat& space_rref, const QVec& v) {
    // reduce v against the canonical rows
    QVec w = v;
    int row = 0;
    for (int col = 0; col < space_rref.cols() && row < space_rref.rows(); ++col) {
        if (space_rref.at(row, col) == 0) continue;  // rows are RREF: pivot is 1
        if (space_rref.at(row, col) != 1) continue;
        bool is_pivot_row = true;
        for (int c = 0; c < col; ++c)
            if (space_rref.at(row, c) != 0) { is_pivot_row = false; break; }
        if (!is_pivot_row) continue;
        const Rational f = w[static_cast<size_t>(col)];
        if (f != 0)
            for (int c = 0; c < space_rref.cols(); ++c)
                w[static_cast<size_t>(c)] -= f * space_rref.at(row, c);
        ++row;
    }
    for (const auto& x : w)
        if (x != 0) return false;
    return true;
}

bool same_row_space(const QMat& a, const QMat& b) {
    return row_space(a) == row_space(b);
}

Signature signature(const QMat& g) {
    if (!g.is_symmetric()) throw InvalidInput("signature of non-symmetric matrix");
    QMat m = g;
    const int n = m.rows();
    Signature sig;
    std::vector<bool> done(static_cast<size_t>(n), false);
    // Congruence reduction: repeatedly find a usable pivot among the live
    // rows; an off-diagonal-only block is handled by adding row+col j into i,
    // which makes the (i,i) entry 2*g_ij != 0.
    int remaining = n;
    while (remaining > 0) {
        int p = -1;
        for (int i = 0; i < n; ++i)
            if (!done[static_cast<size_t>(i)] && m.at(i, i) != 0) { p = i; break; }
        if (p < 0) {
            int bi = -1, bj = -1;
            for (int i = 0; i < n && bi < 0; ++i) {
                if (done[static_cast<size_t>(i)]) continue;
                for (int j = 0; j < n; ++j) {
                    if (done[static_cast<size_t>(j)] || j == i) continue;
                    if (m.at(i, j) != 0) { bi = i; bj = j; break; }
                }
            }
            if (bi < 0) {
                // everything left is zero
                sig.null += remaining;
                break;
            }
            for (int c = 0; c < n; ++c) m.at(bi, c) += m.at(bj, c);
            for (int r = 0; r < n; ++r) m.at(r, bi) += m.at(r, bj);
            p = bi;
        }
        const Rational d = m.at(p, p);
        if (d > 0) ++sig.positive; else ++sig.negative;
        for (int r = 0; r < n; ++r) {
            if (r == p || done[static_cast<size_t>(r)] || m.at(r, p) == 0) continue;
            const Rational f = m.at(r, p) / d;
            for (int c = 0; c < n; ++c) m.at(r, c) -= f * m.at(p, c);
            for (int c = 0; c < n; ++c) m.at(c, r) -= f * m.at(c, p);
        }
        done[static_cast<size_t>(p)] = true;
        --remaining;
    }
    return sig;
}

} // namespace twistorcm::exactalg
