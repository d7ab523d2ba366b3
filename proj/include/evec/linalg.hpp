#ifndef EVEC_LINALG_HPP
#define EVEC_LINALG_HPP

#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "evec/core.hpp"

namespace evec {

/// Row-major dense matrix. The solvers require it square; the bordered
/// determinant uses a (k+1) x k block.
template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    DenseMatrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static DenseMatrix identity(std::size_t k) {
        DenseMatrix m(k, k);
        for (std::size_t i = 0; i < k; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    DenseMatrix without_row(std::size_t r) const {
        DenseMatrix m(rows_ - 1, cols_);
        for (std::size_t i = 0, d = 0; i < rows_; ++i) {
            if (i == r) continue;
            for (std::size_t j = 0; j < cols_; ++j) m(d, j) = (*this)(i, j);
            ++d;
        }
        return m;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    real_t<T> max_abs() const {
        real_t<T> m(0);
        for (const auto& x : data_) {
            auto a = abs_value(x);
            if (a > m) m = a;
        }
        return m;
    }

    real_t<T> norm1() const {
        real_t<T> best(0);
        for (std::size_t j = 0; j < cols_; ++j) {
            real_t<T> s(0);
            for (std::size_t i = 0; i < rows_; ++i) s += abs_value((*this)(i, j));
            if (s > best) best = s;
        }
        return best;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        if (x.size() != cols_) throw DimensionError("matrix-vector product: length mismatch");
        std::vector<T> y(rows_, T(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

inline constexpr double kDefaultSingularTol = 1e-13;
inline constexpr std::size_t kDefaultOracleMaxK = 7;

/// LU factorization with partial pivoting, PA = LU stored in place.
template <class T>
class LuFactorization {
public:
    using real_type = real_t<T>;

    /// Factorizes `a`. Throws SingularSystem when a pivot magnitude drops below
    /// singular_tol * max|a_ij| (or is exactly zero) and `throw_on_singular` is set.
    explicit LuFactorization(DenseMatrix<T> a, double singular_tol = kDefaultSingularTol,
                             bool throw_on_singular = true)
        : lu_(std::move(a)), perm_(lu_.rows()) {
        if (!lu_.square()) throw DimensionError("LU factorization needs a square matrix");
        const std::size_t k = lu_.rows();
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        const real_type threshold = real_type(singular_tol) * lu_.max_abs();
        for (std::size_t c = 0; c < k; ++c) {
            std::size_t p = c;
            real_type best = abs_value(lu_(c, c));
            for (std::size_t r = c + 1; r < k; ++r) {
                auto v = abs_value(lu_(r, c));
                if (v > best) {
                    best = v;
                    p = r;
                }
            }
            if (best == real_type(0) || best < threshold) {
                singular_ = true;
                if (throw_on_singular)
                    throw SingularSystem("pivot " + std::to_string(c) + " below singular tolerance");
                if (best == real_type(0)) continue;
            }
            if (p != c) {
                lu_.swap_rows(p, c);
                std::swap(perm_[p], perm_[c]);
                sign_ = -sign_;
            }
            const T pivot = lu_(c, c);
            for (std::size_t r = c + 1; r < k; ++r) {
                const T f = lu_(r, c) / pivot;
                lu_(r, c) = f;
                for (std::size_t j = c + 1; j < k; ++j) lu_(r, j) -= f * lu_(c, j);
            }
        }
    }

    bool singular() const noexcept { return singular_; }
    std::size_t size() const noexcept { return lu_.rows(); }

    T determinant() const {
        T d(sign_);
        for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
        return d;
    }

    std::vector<T> solve(const std::vector<T>& rhs) const {
        const std::size_t k = lu_.rows();
        if (rhs.size() != k) throw DimensionError("right-hand side length does not match system size");
        std::vector<T> x(k);
        for (std::size_t i = 0; i < k; ++i) x[i] = rhs[perm_[i]];
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
        for (std::size_t i = k; i-- > 0;) {
            for (std::size_t j = i + 1; j < k; ++j) x[i] -= lu_(i, j) * x[j];
            x[i] /= lu_(i, i);
        }
        return x;
    }

    /// ||A^-1||_1 from k unit-vector solves; exact for the small systems used here.
    real_type inverse_norm1() const {
        const std::size_t k = lu_.rows();
        real_type best(0);
        std::vector<T> e(k, T(0));
        for (std::size_t j = 0; j < k; ++j) {
            e[j] = T(1);
            auto col = solve(e);
            e[j] = T(0);
            real_type s(0);
            for (const auto& v : col) s += abs_value(v);
            if (s > best) best = s;
        }
        return best;
    }

private:
    DenseMatrix<T> lu_;
    std::vector<std::size_t> perm_;
    int sign_ = 1;
    bool singular_ = false;
};

template <class T>
struct SolveResult {
    std::vector<T> solution;
    real_t<T> condition_estimate;
};

template <class T>
SolveResult<T> solve(const DenseMatrix<T>& a, const std::vector<T>& rhs,
                     double singular_tol = kDefaultSingularTol) {
    if (!a.square()) throw DimensionError("solve needs a square matrix");
    if (rhs.size() != a.rows()) throw DimensionError("right-hand side length does not match system size");
    LuFactorization<T> lu(a, singular_tol);
    return {lu.solve(rhs), a.norm1() * lu.inverse_norm1()};
}

enum class DetMethod { Elimination, Cofactor };

namespace detail {

template <class T>
T cofactor_det(const DenseMatrix<T>& a, std::size_t row, std::vector<std::size_t>& cols) {
    const std::size_t n = cols.size();
    if (n == 0) return T(1);
    if (n == 1) return a(row, cols[0]);
    T sum(0);
    for (std::size_t c = 0; c < n; ++c) {
        const T entry = a(row, cols[c]);
        const std::size_t col = cols[c];
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(c));
        T minor = entry == T(0) ? T(0) : cofactor_det(a, row + 1, cols);
        cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(c), col);
        if (c % 2 == 0)
            sum += entry * minor;
        else
            sum -= entry * minor;
    }
    return sum;
}

} // namespace detail

/// Determinant by pivoted elimination or by Laplace expansion along the first row.
/// The expansion path is the oracle and is limited to k <= oracle_max_k.
template <class T>
T scalar_det(const DenseMatrix<T>& a, DetMethod method = DetMethod::Elimination,
             std::size_t oracle_max_k = kDefaultOracleMaxK) {
    if (!a.square()) throw DimensionError("determinant needs a square matrix");
    if (a.rows() == 0) return T(1);
    if (method == DetMethod::Cofactor) {
        if (a.rows() > oracle_max_k)
            throw Error("cofactor determinant limited to k <= " + std::to_string(oracle_max_k));
        std::vector<std::size_t> cols(a.cols());
        std::iota(cols.begin(), cols.end(), std::size_t{0});
        return detail::cofactor_det(a, 0, cols);
    }
    LuFactorization<T> lu(a, 0.0, false);
    return lu.determinant();
}

/// Determinant whose first column holds vectors and whose remaining columns
/// hold scalars; evaluated by expansion along the first column.
template <class T>
struct BorderedVectorDeterminant {
    std::vector<CoordinateVector<T>> first_column; // k+1 entries
    DenseMatrix<T> block;                          // (k+1) x k
};

template <class T>
CoordinateVector<T> bordered_det(const BorderedVectorDeterminant<T>& d,
                                 DetMethod method = DetMethod::Elimination,
                                 std::size_t oracle_max_k = kDefaultOracleMaxK) {
    const std::size_t rows = d.first_column.size();
    if (rows == 0) throw DimensionError("bordered determinant needs at least one row");
    if (d.block.rows() != rows || d.block.cols() + 1 != rows)
        throw DimensionError("bordered determinant block must be (k+1) x k");
    const std::size_t dim = d.first_column.front().size();
    CoordinateVector<T> out(dim);
    for (std::size_t r = 0; r < rows; ++r) {
        if (d.first_column[r].size() != dim) throw DimensionError("bordered determinant: ragged first column");
        T minor = scalar_det(d.block.without_row(r), method, oracle_max_k);
        if (r % 2 == 1) minor = -minor;
        out.add_scaled(minor, d.first_column[r]);
    }
    return out;
}

/// Rows (1, c_i, c_i^2, ..., c_i^{k-1}).
template <class T>
DenseMatrix<T> power_matrix(const std::vector<T>& c) {
    const std::size_t k = c.size();
    DenseMatrix<T> m(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        T p(1);
        for (std::size_t j = 0; j < k; ++j) {
            m(i, j) = p;
            p *= c[i];
        }
    }
    return m;
}

/// prod_{i<j} (c_j - c_i)
template <class T>
T vandermonde(const std::vector<T>& c) {
    T v(1);
    for (std::size_t j = 0; j < c.size(); ++j)
        for (std::size_t i = 0; i < j; ++i) v *= (c[j] - c[i]);
    return v;
}

} // namespace evec

#endif // EVEC_LINALG_HPP
