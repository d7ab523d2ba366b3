#ifndef EVEC_ENGINE_HPP
#define EVEC_ENGINE_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "evec/core.hpp"
#include "evec/linalg.hpp"
#include "evec/sequences.hpp"

namespace evec {

struct EngineOptions {
    double singular_tol = kDefaultSingularTol;
    std::size_t oracle_max_k = kDefaultOracleMaxK;
    /// Cells whose condition estimate exceeds this are flagged untrusted.
    double untrusted_condition = 1e12;
};

/// Defaults rescaled by the working precision's epsilon relative to double.
template <class T>
EngineOptions precision_options() {
    const double ratio = to_double(std::numeric_limits<real_t<T>>::epsilon()) / std::numeric_limits<double>::epsilon();
    EngineOptions o;
    o.singular_tol *= ratio;
    o.untrusted_condition /= ratio;
    return o;
}

template <class T>
struct LinearSystem {
    DenseMatrix<T> matrix; // matrix(j, i-1) = <y, dg_i(n+j)>
    std::vector<T> rhs;    // rhs[j] = <y, dx_{n+j}>
};

namespace detail {

template <class T>
void require_window(const VectorSequence<T>& x, const ScaleFamily<T>& g, const Weighting<T>& w, std::size_t n,
                    std::size_t k) {
    if (k > g.count())
        throw RangeError("k=" + std::to_string(k) + " exceeds the " + std::to_string(g.count()) +
                         " available scale functions");
    if (!x.contains(n + k))
        throw RangeError("sequence data ends before index n+k=" + std::to_string(n + k));
    if (k > 0 && !g.contains(n + k))
        throw RangeError("scale data ends before index n+k=" + std::to_string(n + k));
    if (x.dimension() != w.dimension() || g.dimension() != w.dimension())
        throw DimensionError("sequence, scale and weighting dimensions differ");
}

// <y, dv_{n+j}> for j = 0..k-1
template <class T>
std::vector<T> weighted_differences(const VectorSequence<T>& v, const Weighting<T>& w, std::size_t n, std::size_t k) {
    std::vector<T> out(k);
    if (k == 0) return out;
    auto prev = w(v.at(n));
    for (std::size_t j = 0; j < k; ++j) {
        auto next = w(v.at(n + j + 1));
        out[j] = next - prev;
        prev = next;
    }
    return out;
}

template <class T>
DenseMatrix<T> scale_matrix(const ScaleFamily<T>& g, const Weighting<T>& w, std::size_t n, std::size_t k) {
    DenseMatrix<T> a(k, k);
    for (std::size_t i = 1; i <= k; ++i) {
        auto prev = w(g.at(i, n));
        for (std::size_t j = 0; j < k; ++j) {
            auto next = w(g.at(i, n + j + 1));
            a(j, i - 1) = next - prev;
            prev = next;
        }
    }
    return a;
}

template <class T>
real_t<T> residual_norm(const DenseMatrix<T>& a, const std::vector<T>& x, const std::vector<T>& rhs) {
    auto ax = a.apply(x);
    real_t<T> s(0);
    for (std::size_t j = 0; j < rhs.size(); ++j) {
        auto r = abs_value(ax[j] - rhs[j]);
        s += r * r;
    }
    return real_sqrt(s);
}

} // namespace detail

/// Rows m = n..n+k-1 of the defining system sum_i <y,dg_i(m)> a_i = <y,dx_m>.
template <class T>
LinearSystem<T> build_system(const VectorSequence<T>& x, const ScaleFamily<T>& g, const Weighting<T>& w,
                             std::size_t n, std::size_t k) {
    if (k == 0) throw RangeError("the defining system needs k >= 1");
    detail::require_window(x, g, w, n, k);
    return {detail::scale_matrix(g, w, n, k), detail::weighted_differences(x, w, n, k)};
}

template <class T>
struct CoefficientSolution {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<T> alpha_tilde;
    real_t<T> condition_estimate{0};
    real_t<T> residual_norm{0};
};

template <class T>
CoefficientSolution<T> solve_coefficients(const VectorSequence<T>& x, const ScaleFamily<T>& g,
                                          const Weighting<T>& w, std::size_t n, std::size_t k,
                                          const EngineOptions& opts = {}) {
    auto sys = build_system(x, g, w, n, k);
    auto sol = solve(sys.matrix, sys.rhs, opts.singular_tol);
    CoefficientSolution<T> out;
    out.n = n;
    out.k = k;
    out.residual_norm = detail::residual_norm(sys.matrix, sol.solution, sys.rhs);
    out.alpha_tilde = std::move(sol.solution);
    out.condition_estimate = sol.condition_estimate;
    return out;
}

/// v_n - sum_i c_i g_i(n)
template <class T>
CoordinateVector<T> subtract_scales(CoordinateVector<T> v, const ScaleFamily<T>& g, std::size_t n,
                                    const std::vector<T>& c) {
    for (std::size_t i = 1; i <= c.size(); ++i) v.add_scaled(-c[i - 1], g.at(i, n));
    return v;
}

/// s_{n,k} = x_n - sum_{i<=k} alpha~_i g_i(n); s_{n,0} = x_n.
template <class T>
CoordinateVector<T> extrapolate(const VectorSequence<T>& x, const ScaleFamily<T>& g, const Weighting<T>& w,
                                std::size_t n, std::size_t k, const EngineOptions& opts = {}) {
    if (k == 0) return x.at(n);
    auto sol = solve_coefficients(x, g, w, n, k, opts);
    return subtract_scales(x.at(n), g, n, sol.alpha_tilde);
}

enum class FunctionalPath { Solve, Determinant };

/// f_{n,k}(v) = N_{n,k}(v) / D_{n,k}.
///
/// The solve path forms v_n - sum beta_i g_i(n) with beta solving the defining
/// matrix against <y, dv_{n+j}>. The determinant path expands the bordered
/// numerator along its first column and divides by the scale determinant; it
/// uses Laplace expansion for k <= oracle_max_k.
template <class T>
CoordinateVector<T> functional(const VectorSequence<T>& v, const ScaleFamily<T>& g, const Weighting<T>& w,
                               std::size_t n, std::size_t k, FunctionalPath path = FunctionalPath::Solve,
                               const EngineOptions& opts = {}) {
    if (k == 0) return v.at(n);
    detail::require_window(v, g, w, n, k);
    auto a = detail::scale_matrix(g, w, n, k);
    auto rhs = detail::weighted_differences(v, w, n, k);
    if (path == FunctionalPath::Solve) {
        auto sol = solve(a, rhs, opts.singular_tol);
        return subtract_scales(v.at(n), g, n, sol.solution);
    }

    const DetMethod method = k <= opts.oracle_max_k ? DetMethod::Cofactor : DetMethod::Elimination;
    // Rows of the denominator are indexed by scale function, columns by m.
    auto d_rows = a.transposed();
    const T den = scalar_det(d_rows, method, opts.oracle_max_k);
    real_t<T> hadamard(1);
    for (std::size_t i = 0; i < k; ++i) {
        real_t<T> s(0);
        for (std::size_t j = 0; j < k; ++j) {
            auto e = abs_value(d_rows(i, j));
            s += e * e;
        }
        hadamard *= real_sqrt(s);
    }
    if (den == T(0) || abs_value(den) <= real_t<T>(opts.singular_tol) * hadamard)
        throw SingularSystem("denominator determinant is numerically zero at n=" + std::to_string(n) +
                             ", k=" + std::to_string(k));

    BorderedVectorDeterminant<T> bd;
    bd.first_column.reserve(k + 1);
    bd.first_column.push_back(v.at(n));
    for (std::size_t i = 1; i <= k; ++i) bd.first_column.push_back(g.at(i, n));
    bd.block = DenseMatrix<T>(k + 1, k);
    for (std::size_t j = 0; j < k; ++j) bd.block(0, j) = rhs[j];
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) bd.block(i + 1, j) = d_rows(i, j);
    return bordered_det(bd, method, opts.oracle_max_k) / den;
}

/// psi_{n,k} = D_{n,k} / prod_j <y, dg_j(n)>, formed directly as the determinant
/// with rows (1, eta_{j,1}(n), ..., eta_{j,k-1}(n)).
template <class T>
T psi(const ScaleFamily<T>& g, const Weighting<T>& w, std::size_t n, std::size_t k) {
    if (k == 0) return T(1);
    if (k > g.count()) throw RangeError("psi: k exceeds the number of scale functions");
    if (!g.contains(n + k)) throw RangeError("psi: scale data ends before index n+k");
    auto a = detail::scale_matrix(g, w, n, k);
    DenseMatrix<T> normalized(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        const T lead = a(0, j);
        if (lead == T(0))
            throw DegenerateNormalization("<y, dg_" + std::to_string(j + 1) + "(" + std::to_string(n) + ")> is zero");
        for (std::size_t t = 0; t < k; ++t) normalized(j, t) = a(t, j) / lead;
    }
    return scalar_det(normalized);
}

enum class CellStatus { Ok, Singular, OutOfData };

inline const char* to_string(CellStatus s) {
    switch (s) {
    case CellStatus::Ok: return "ok";
    case CellStatus::Singular: return "singular";
    case CellStatus::OutOfData: return "out-of-data";
    }
    return "unknown";
}

template <class T>
struct TableCell {
    CoordinateVector<T> value;
    CellStatus status = CellStatus::OutOfData;
    real_t<T> condition{0};
    real_t<T> residual{0};
    bool untrusted = false;
};

/// The grid s_{n,k}, n in [n0, n1], k in [0, kmax]; row k = 0 is the input.
template <class T>
class ExtrapolationTable {
public:
    ExtrapolationTable(std::size_t n0, std::size_t n1, std::size_t kmax, std::size_t dimension)
        : n0_(n0), n1_(n1), kmax_(kmax), dimension_(dimension), cells_((n1 - n0 + 1) * (kmax + 1)) {}

    std::size_t n0() const noexcept { return n0_; }
    std::size_t n1() const noexcept { return n1_; }
    std::size_t kmax() const noexcept { return kmax_; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t cell_count() const noexcept { return cells_.size(); }

    bool contains(std::size_t n, std::size_t k) const noexcept { return n >= n0_ && n <= n1_ && k <= kmax_; }

    const TableCell<T>& cell(std::size_t n, std::size_t k) const { return cells_.at(index(n, k)); }
    TableCell<T>& cell(std::size_t n, std::size_t k) { return cells_.at(index(n, k)); }

    std::size_t count(CellStatus s) const {
        return static_cast<std::size_t>(
            std::count_if(cells_.begin(), cells_.end(), [s](const auto& c) { return c.status == s; }));
    }

private:
    std::size_t index(std::size_t n, std::size_t k) const {
        if (!contains(n, k))
            throw RangeError("table cell (" + std::to_string(n) + ", " + std::to_string(k) + ") outside table");
        return (n - n0_) * (kmax_ + 1) + k;
    }

    std::size_t n0_, n1_, kmax_, dimension_;
    std::vector<TableCell<T>> cells_;
};

template <class T>
TableCell<T> compute_cell(const VectorSequence<T>& x, const ScaleFamily<T>& g, const Weighting<T>& w,
                          std::size_t n, std::size_t k, const EngineOptions& opts) {
    TableCell<T> cell;
    const bool have_data = k == 0 ? x.contains(n) : (k <= g.count() && x.contains(n + k) && g.contains(n + k));
    if (!have_data) return cell;
    if (k == 0) {
        cell.value = x.at(n);
        cell.status = CellStatus::Ok;
        cell.condition = real_t<T>(1);
        return cell;
    }
    try {
        auto sol = solve_coefficients(x, g, w, n, k, opts);
        cell.value = subtract_scales(x.at(n), g, n, sol.alpha_tilde);
        cell.status = CellStatus::Ok;
        cell.condition = sol.condition_estimate;
        cell.residual = sol.residual_norm;
        cell.untrusted = !(sol.condition_estimate <= real_t<T>(opts.untrusted_condition));
    } catch (const SingularSystem&) {
        cell.status = CellStatus::Singular;
    }
    return cell;
}

/// Fills every cell independently. With threads > 1 cells are distributed over
/// workers; results are identical to the sequential fill.
template <class T>
ExtrapolationTable<T> fill_table(const VectorSequence<T>& x, const ScaleFamily<T>& g, const Weighting<T>& w,
                                 std::size_t n0, std::size_t n1, std::size_t kmax, const EngineOptions& opts = {},
                                 unsigned threads = 1) {
    if (n1 < n0) throw RangeError("empty n range");
    if (!x.contains(n0))
        throw RangeError("no data for the k=0 column: sequence has " + std::to_string(x.size()) +
                         " entries, n0=" + std::to_string(n0));
    if (x.dimension() != w.dimension() || (kmax > 0 && g.dimension() != w.dimension()))
        throw DimensionError("sequence, scale and weighting dimensions differ");

    ExtrapolationTable<T> table(n0, n1, kmax, x.dimension());
    const std::size_t total = table.cell_count();
    auto work = [&](std::size_t idx) {
        const std::size_t n = n0 + idx / (kmax + 1);
        const std::size_t k = idx % (kmax + 1);
        table.cell(n, k) = compute_cell(x, g, w, n, k, opts);
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
    if (threads == 1) {
        for (std::size_t idx = 0; idx < total; ++idx) work(idx);
        return table;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t idx = next++; idx < total; idx = next++) work(idx);
        });
    pool.clear();
    return table;
}

} // namespace evec

#endif // EVEC_ENGINE_HPP
