#ifndef EVEC_TESTS_SUPPORT_HPP
#define EVEC_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "evec/evec.hpp"

namespace evt {

using cplx = std::complex<double>;

/// Seeded generator for hand-rolled property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(eng_() % (hi - lo + 1)); }

    template <class T>
    T scalar() {
        if constexpr (evec::is_complex_v<T>) {
            double re = uniform(-1, 1);
            double im = uniform(-1, 1);
            return T(re, im);
        } else {
            return T(uniform(-1, 1));
        }
    }

    template <class T>
    evec::CoordinateVector<T> vec(std::size_t dim) {
        evec::CoordinateVector<T> v(dim);
        for (std::size_t j = 0; j < dim; ++j) v[j] = scalar<T>();
        return v;
    }

    template <class T>
    evec::DenseMatrix<T> matrix(std::size_t k) {
        evec::DenseMatrix<T> a(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) a(i, j) = scalar<T>();
        return a;
    }

    /// Diagonally dominant, hence well conditioned.
    template <class T>
    evec::DenseMatrix<T> well_conditioned(std::size_t k) {
        auto a = matrix<T>(k);
        for (std::size_t i = 0; i < k; ++i) a(i, i) += T(static_cast<double>(k) + 1.0);
        return a;
    }

    /// Nodes with strictly decreasing magnitude in (0.05, 0.95), well separated.
    std::vector<double> nodes(std::size_t count) {
        std::vector<double> b;
        double top = uniform(0.7, 0.95);
        for (std::size_t i = 0; i < count; ++i) {
            double sign = uniform() < 0.3 ? -1.0 : 1.0;
            b.push_back(sign * top);
            top *= uniform(0.45, 0.7);
        }
        return b;
    }

private:
    std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
// Independent oracles. Written without the library's linear algebra.

template <class T>
T det_oracle(const std::vector<std::vector<T>>& a) {
    const std::size_t n = a.size();
    if (n == 0) return T(1);
    if (n == 1) return a[0][0];
    T sum(0);
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<T>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<T> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(a[r][j]);
            minor.push_back(row);
        }
        T term = a[0][c] * det_oracle(minor);
        sum += (c % 2 == 0) ? term : -term;
    }
    return sum;
}

template <class T>
std::vector<std::vector<T>> to_rows(const evec::DenseMatrix<T>& a) {
    std::vector<std::vector<T>> rows(a.rows(), std::vector<T>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) rows[i][j] = a(i, j);
    return rows;
}

/// Cramer's rule on row-major data.
template <class T>
std::vector<T> cramer_oracle(const std::vector<std::vector<T>>& a, const std::vector<T>& rhs) {
    const T d = det_oracle(a);
    std::vector<T> x(a.size());
    for (std::size_t c = 0; c < a.size(); ++c) {
        auto m = a;
        for (std::size_t r = 0; r < a.size(); ++r) m[r][c] = rhs[r];
        x[c] = det_oracle(m) / d;
    }
    return x;
}

inline double vandermonde_oracle(const std::vector<double>& c) {
    double v = 1;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) v *= c[j] - c[i];
    return v;
}

template <class T>
double rel_diff(const evec::CoordinateVector<T>& a, const evec::CoordinateVector<T>& b) {
    const double scale = std::max(static_cast<double>(evec::norm(a)), static_cast<double>(evec::norm(b)));
    const double d = static_cast<double>(evec::norm(a - b));
    return scale == 0 ? d : d / scale;
}

template <class T>
double rel_diff(const T& a, const T& b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0 ? std::abs(a - b) : std::abs(a - b) / scale;
}

/// Seeded geometric model with random directions and limit.
template <class T>
evec::ModelSequence<T> random_model(Gen& gen, std::size_t dim, std::size_t p, std::size_t size = 200) {
    std::vector<evec::CoordinateVector<T>> w;
    std::vector<T> b;
    std::vector<T> alpha;
    for (double v : gen.nodes(p)) b.push_back(T(v));
    for (std::size_t i = 0; i < p; ++i) {
        w.push_back(gen.vec<T>(dim));
        alpha.push_back(T(gen.uniform(0.5, 2.0)));
    }
    return evec::ModelSequence<T>(gen.vec<T>(dim), alpha, evec::make_geometric_scale(w, b, size));
}

/// Random y with |cos(y, w_i)| >= min_cos for every direction.
template <class T>
evec::Weighting<T> well_posed_weighting(Gen& gen, const evec::ScaleFamily<T>& g, double min_cos = 0.1) {
    while (true) {
        auto y = gen.vec<T>(g.dimension());
        bool ok = !y.is_zero();
        for (const auto& w : g.directions())
            ok = ok && std::abs(evec::inner(y, w)) >= min_cos * evec::norm(y) * evec::norm(w);
        if (ok) return evec::Weighting<T>(y);
    }
}

} // namespace evt

#endif
