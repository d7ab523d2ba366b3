#ifndef EVEC_CORE_HPP
#define EVEC_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evec/errors.hpp"

namespace evec {

// Scalar field support. Real scalars are any floating type reachable through
// ADL abs/sqrt (double, long double, boost multiprecision); complex scalars are
// std::complex over such a type.
template <class T>
struct scalar_traits {
    using real_type = T;
    static constexpr bool is_complex = false;
    static T conj(const T& x) { return x; }
    static real_type real(const T& x) { return x; }
    static real_type abs(const T& x) {
        using std::abs;
        return real_type(abs(x));
    }
};

template <class R>
struct scalar_traits<std::complex<R>> {
    using real_type = R;
    static constexpr bool is_complex = true;
    static std::complex<R> conj(const std::complex<R>& x) { return std::conj(x); }
    static real_type real(const std::complex<R>& x) { return x.real(); }
    static real_type abs(const std::complex<R>& x) { return std::abs(x); }
};

template <class T>
using real_t = typename scalar_traits<T>::real_type;

template <class T>
inline constexpr bool is_complex_v = scalar_traits<T>::is_complex;

template <class T>
T conj(const T& x) {
    return scalar_traits<T>::conj(x);
}

template <class T>
real_t<T> abs_value(const T& x) {
    return scalar_traits<T>::abs(x);
}

template <class R>
double to_double(const R& x) {
    return static_cast<double>(x);
}

template <class R>
R real_sqrt(const R& x) {
    using std::sqrt;
    return R(sqrt(x));
}

/// Element of the finite-dimensional space: an ordered list of scalars.
template <class T>
class CoordinateVector {
public:
    using value_type = T;

    CoordinateVector() = default;
    explicit CoordinateVector(std::size_t dimension) : data_(dimension, T(0)) {}
    explicit CoordinateVector(std::vector<T> components) : data_(std::move(components)) {}
    CoordinateVector(std::initializer_list<T> components) : data_(components) {}

    static CoordinateVector zero(std::size_t dimension) { return CoordinateVector(dimension); }

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator[](std::size_t j) { return data_[j]; }
    const T& operator[](std::size_t j) const { return data_[j]; }

    std::span<const T> components() const noexcept { return data_; }
    const std::vector<T>& raw() const noexcept { return data_; }

    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    bool is_zero() const {
        for (const auto& c : data_)
            if (c != T(0)) return false;
        return true;
    }

    CoordinateVector& operator+=(const CoordinateVector& o) {
        require_same(o);
        for (std::size_t j = 0; j < data_.size(); ++j) data_[j] += o.data_[j];
        return *this;
    }
    CoordinateVector& operator-=(const CoordinateVector& o) {
        require_same(o);
        for (std::size_t j = 0; j < data_.size(); ++j) data_[j] -= o.data_[j];
        return *this;
    }
    CoordinateVector& operator*=(const T& c) {
        for (auto& x : data_) x *= c;
        return *this;
    }
    CoordinateVector& operator/=(const T& c) {
        for (auto& x : data_) x /= c;
        return *this;
    }

    /// this += c * o
    CoordinateVector& add_scaled(const T& c, const CoordinateVector& o) {
        require_same(o);
        for (std::size_t j = 0; j < data_.size(); ++j) data_[j] += c * o.data_[j];
        return *this;
    }

    friend CoordinateVector operator+(CoordinateVector a, const CoordinateVector& b) { return a += b; }
    friend CoordinateVector operator-(CoordinateVector a, const CoordinateVector& b) { return a -= b; }
    friend CoordinateVector operator-(CoordinateVector a) {
        for (auto& x : a.data_) x = -x;
        return a;
    }
    friend CoordinateVector operator*(const T& c, CoordinateVector a) { return a *= c; }
    friend CoordinateVector operator*(CoordinateVector a, const T& c) { return a *= c; }
    friend CoordinateVector operator/(CoordinateVector a, const T& c) { return a /= c; }
    friend bool operator==(const CoordinateVector& a, const CoordinateVector& b) { return a.data_ == b.data_; }

private:
    void require_same(const CoordinateVector& o) const {
        if (o.size() != size())
            throw DimensionError("vector dimensions differ: " + std::to_string(size()) + " vs " +
                                 std::to_string(o.size()));
    }

    std::vector<T> data_;
};

/// The fixed vector y together with optional positive coordinate weights of the
/// inner product. The inner product conjugates its first argument.
template <class T>
class Weighting {
public:
    using real_type = real_t<T>;

    explicit Weighting(CoordinateVector<T> y, std::vector<real_type> weights = {})
        : y_(std::move(y)), weights_(std::move(weights)) {
        if (y_.empty()) throw DimensionError("weighting vector must have dimension >= 1");
        if (!weights_.empty() && weights_.size() != y_.size())
            throw DimensionError("weights length does not match weighting dimension");
        for (const auto& w : weights_)
            if (!(w > real_type(0))) throw Error("inner-product weights must be positive");
        if (y_.is_zero()) throw Error("weighting vector y must be nonzero");
    }

    static Weighting ones(std::size_t dimension) {
        std::vector<T> c(dimension, T(1));
        return Weighting(CoordinateVector<T>(std::move(c)));
    }

    const CoordinateVector<T>& y() const noexcept { return y_; }
    const std::vector<real_type>& weights() const noexcept { return weights_; }
    std::size_t dimension() const noexcept { return y_.size(); }

    /// The scalar functional u -> <y, u>.
    T operator()(const CoordinateVector<T>& u) const;

    Weighting scaled(const T& c) const { return Weighting(c * y_, weights_); }

private:
    CoordinateVector<T> y_;
    std::vector<real_type> weights_;
};

template <class T>
T inner(const CoordinateVector<T>& a, const CoordinateVector<T>& b) {
    if (a.size() != b.size())
        throw DimensionError("inner: dimensions differ (" + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()) + ")");
    T sum(0);
    for (std::size_t j = 0; j < a.size(); ++j) sum += conj(a[j]) * b[j];
    return sum;
}

template <class T>
T inner(const Weighting<T>& w, const CoordinateVector<T>& a, const CoordinateVector<T>& b) {
    if (a.size() != w.dimension() || b.size() != w.dimension())
        throw DimensionError("inner: operand dimension does not match weighting dimension " +
                             std::to_string(w.dimension()));
    if (w.weights().empty()) return inner(a, b);
    T sum(0);
    for (std::size_t j = 0; j < a.size(); ++j) sum += T(w.weights()[j]) * conj(a[j]) * b[j];
    return sum;
}

template <class T>
T Weighting<T>::operator()(const CoordinateVector<T>& u) const {
    return inner(*this, y_, u);
}

template <class T>
real_t<T> norm(const CoordinateVector<T>& a) {
    real_t<T> sum(0);
    for (const auto& c : a) {
        auto m = abs_value(c);
        sum += m * m;
    }
    return real_sqrt(sum);
}

/// Windowed accessor m -> x_m over the indices [0, size()).
template <class T>
class VectorSequence {
public:
    using Accessor = std::function<CoordinateVector<T>(std::size_t)>;

    VectorSequence() = default;
    VectorSequence(Accessor accessor, std::size_t size, std::size_t dimension)
        : accessor_(std::move(accessor)), size_(size), dimension_(dimension) {}

    static VectorSequence from_vectors(std::vector<CoordinateVector<T>> vectors) {
        std::size_t dim = vectors.empty() ? 0 : vectors.front().size();
        for (std::size_t m = 0; m < vectors.size(); ++m)
            if (vectors[m].size() != dim)
                throw DimensionError("sequence row " + std::to_string(m) + " has dimension " +
                                     std::to_string(vectors[m].size()) + ", expected " +
                                     std::to_string(dim));
        auto data = std::make_shared<const std::vector<CoordinateVector<T>>>(std::move(vectors));
        auto n = data->size();
        return VectorSequence([data](std::size_t m) { return (*data)[m]; }, n, dim);
    }

    static VectorSequence constant(CoordinateVector<T> value, std::size_t size) {
        auto dim = value.size();
        return VectorSequence([value = std::move(value)](std::size_t) { return value; }, size, dim);
    }

    /// Number of available indices; valid indices are 0..size()-1.
    std::size_t size() const noexcept { return size_; }
    std::size_t dimension() const noexcept { return dimension_; }
    bool contains(std::size_t m) const noexcept { return m < size_; }

    CoordinateVector<T> at(std::size_t m) const {
        if (m >= size_)
            throw RangeError("sequence index " + std::to_string(m) + " outside available range [0, " +
                             std::to_string(size_) + ")");
        return accessor_(m);
    }
    CoordinateVector<T> operator[](std::size_t m) const { return at(m); }

    /// Pointwise combination a*this + b*other over the common index range.
    VectorSequence combined(const T& a, const VectorSequence& other, const T& b) const {
        if (other.dimension_ != dimension_) throw DimensionError("sequence dimensions differ");
        auto lhs = *this;
        auto rhs = other;
        return VectorSequence([lhs, rhs, a, b](std::size_t m) { return a * lhs.at(m) + b * rhs.at(m); },
                              std::min(size_, other.size_), dimension_);
    }

    VectorSequence shifted(const CoordinateVector<T>& t) const {
        if (t.size() != dimension_) throw DimensionError("translation dimension differs");
        auto self = *this;
        return VectorSequence([self, t](std::size_t m) { return self.at(m) + t; }, size_, dimension_);
    }

private:
    Accessor accessor_;
    std::size_t size_ = 0;
    std::size_t dimension_ = 0;
};

template <class T>
CoordinateVector<T> delta(const VectorSequence<T>& seq, std::size_t m) {
    if (!seq.contains(m + 1))
        throw RangeError("delta at m=" + std::to_string(m) + " needs index " + std::to_string(m + 1) +
                         ", sequence has " + std::to_string(seq.size()) + " entries");
    return seq.at(m + 1) - seq.at(m);
}

} // namespace evec

#endif // EVEC_CORE_HPP
