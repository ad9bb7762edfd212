#ifndef TWISTORCM_LINALG_HPP
#define TWISTORCM_LINALG_HPP

#include "twistorcm/rational.hpp"

#include <optional>
#include <vector>

namespace twistorcm::exactalg {

using QVec = std::vector<Rational>;

/// Dense rational matrix, row major.
class QMat {
public:
    QMat() = default;
    QMat(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, Rational(0)) {}
    static QMat identity(int n);
    static QMat from_rows(const std::vector<QVec>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rational& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const Rational& at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    QMat transpose() const;
    QMat operator*(const QMat& o) const;
    QVec operator*(const QVec& v) const;
    QMat operator+(const QMat& o) const;
    QMat operator-(const QMat& o) const;
    QMat operator*(const Rational& c) const;
    bool operator==(const QMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

    bool is_symmetric() const;
    QVec row(int r) const;
    void set_row(int r, const QVec& v);
    QVec col(int c) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

/// Reduced row echelon form in place; returns pivot column indices.
std::vector<int> rref(QMat& m);
int rank(QMat m);
/// Basis of the right kernel {x : Mx = 0}, as rows of the returned matrix.
QMat kernel_basis(const QMat& m);
std::optional<QMat> inverse(const QMat& m);
Rational determinant(QMat m);
/// Solve Mx = b; nullopt when inconsistent.  When the solution space is
/// positive dimensional an arbitrary representative is returned.
std::optional<QVec> solve(const QMat& m, const QVec& b);
/// Solve M x_j = b_j for the columns of B in one elimination pass; the rank
/// of M is reported through rank_out when given.
std::optional<std::vector<QVec>> solve_many(const QMat& m, const std::vector<QVec>& bs,
                                            int* rank_out = nullptr);

/// Canonical basis of the row space (RREF with zero rows dropped).
QMat row_space(const QMat& m);
bool row_space_contains(const QMat& space_rref, const QVec& v);
bool same_row_space(const QMat& a, const QMat& b);

struct Signature {
    int positive = 0, negative = 0, null = 0;
    bool operator==(const Signature& o) const {
        return positive == o.positive && negative == o.negative && null == o.null;
    }
};

/// Inertia of a symmetric rational matrix by exact congruence reduction:
/// pivot on nonzero diagonal entries and clear, handling all-zero diagonals
/// with the standard hyperbolic row/column move.  Throws on asymmetric input.
Signature signature(const QMat& g);

} // namespace twistorcm::exactalg

#endif
