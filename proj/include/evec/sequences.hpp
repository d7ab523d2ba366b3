#ifndef EVEC_SEQUENCES_HPP
#define EVEC_SEQUENCES_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evec/core.hpp"

namespace evec {

enum class FamilyKind { Geometric, PerturbedGeometric, Tabulated };

inline const char* to_string(FamilyKind k) {
    switch (k) {
    case FamilyKind::Geometric: return "geometric";
    case FamilyKind::PerturbedGeometric: return "perturbed";
    case FamilyKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

/// Index range used for analytic families, whose accessor is total.
inline constexpr std::size_t kAnalyticIndexCount = std::size_t{1} << 20;

template <class T>
T int_power(T base, std::size_t e) {
    T result(1);
    while (e) {
        if (e & 1u) result *= base;
        base *= base;
        e >>= 1u;
    }
    return result;
}

namespace detail {
struct ScaleBuilder;
} // namespace detail

/// The known functions g_1(m), ..., g_I(m). Function indices are 1-based.
template <class T>
class ScaleFamily {
public:
    ScaleFamily() = default;

    FamilyKind kind() const noexcept { return kind_; }
    std::size_t count() const noexcept { return count_; }
    /// Number of available m indices.
    std::size_t size() const noexcept { return size_; }
    std::size_t dimension() const noexcept { return dimension_; }
    bool contains(std::size_t m) const noexcept { return m < size_; }

    CoordinateVector<T> at(std::size_t i, std::size_t m) const {
        if (i == 0 || i > count_)
            throw RangeError("scale function index " + std::to_string(i) + " outside [1, " +
                             std::to_string(count_) + "]");
        if (m >= size_)
            throw RangeError("scale index m=" + std::to_string(m) + " outside available range [0, " +
                             std::to_string(size_) + ")");
        switch (kind_) {
        case FamilyKind::Geometric: return int_power(b_[i - 1], m) * w_[i - 1];
        case FamilyKind::PerturbedGeometric: {
            T factor = int_power(b_[i - 1], m) * (T(1) + c_[i - 1] / T(static_cast<double>(m + 1)));
            return factor * w_[i - 1];
        }
        case FamilyKind::Tabulated: return (*table_)[i - 1][m];
        }
        throw Error("unknown scale family kind");
    }

    VectorSequence<T> sequence(std::size_t i) const {
        if (i == 0 || i > count_) throw RangeError("scale function index out of range");
        auto self = *this;
        return VectorSequence<T>([self, i](std::size_t m) { return self.at(i, m); }, size_, dimension_);
    }

    /// Analytic families only: the nodes b_i, directions w_i and perturbations c_i.
    const std::vector<T>& nodes() const noexcept { return b_; }
    const std::vector<CoordinateVector<T>>& directions() const noexcept { return w_; }
    const std::vector<T>& perturbations() const noexcept { return c_; }
    bool analytic() const noexcept { return kind_ != FamilyKind::Tabulated; }

    /// Same family with functions reordered: new function j is old function order[j-1].
    ScaleFamily permuted(const std::vector<std::size_t>& order) const {
        if (order.size() != count_) throw DimensionError("permutation length must equal function count");
        ScaleFamily out = *this;
        if (analytic()) {
            for (std::size_t j = 0; j < count_; ++j) {
                out.b_[j] = b_.at(order[j] - 1);
                out.w_[j] = w_.at(order[j] - 1);
                if (!c_.empty()) out.c_[j] = c_.at(order[j] - 1);
            }
        } else {
            auto t = std::make_shared<std::vector<std::vector<CoordinateVector<T>>>>();
            for (auto idx : order) t->push_back(table_->at(idx - 1));
            out.table_ = std::move(t);
        }
        return out;
    }

    friend struct detail::ScaleBuilder;

private:
    FamilyKind kind_ = FamilyKind::Geometric;
    std::size_t count_ = 0;
    std::size_t size_ = 0;
    std::size_t dimension_ = 0;
    std::vector<T> b_;
    std::vector<CoordinateVector<T>> w_;
    std::vector<T> c_;
    std::shared_ptr<const std::vector<std::vector<CoordinateVector<T>>>> table_;
};

namespace detail {

struct ScaleBuilder {
    template <class T>
    static ScaleFamily<T> make(FamilyKind kind, std::size_t count, std::size_t size, std::size_t dimension,
                               std::vector<T> b, std::vector<CoordinateVector<T>> w, std::vector<T> c,
                               std::shared_ptr<const std::vector<std::vector<CoordinateVector<T>>>> table) {
        ScaleFamily<T> f;
        f.kind_ = kind;
        f.count_ = count;
        f.size_ = size;
        f.dimension_ = dimension;
        f.b_ = std::move(b);
        f.w_ = std::move(w);
        f.c_ = std::move(c);
        f.table_ = std::move(table);
        return f;
    }
};

// Nodes must be distinct, != 1, nonzero, with strictly decreasing modulus;
// directions nonzero with a common dimension. Indices reported 1-based.
template <class T>
void validate_geometric(const std::vector<CoordinateVector<T>>& w, const std::vector<T>& b) {
    if (w.size() != b.size())
        throw InvalidScale(std::min(w.size(), b.size()) + 1, "w and b have different lengths");
    if (b.empty()) throw InvalidScale(1, "at least one scale function is required");
    const std::size_t dim = w.front().size();
    for (std::size_t i = 0; i < b.size(); ++i) {
        const std::size_t idx = i + 1;
        if (w[i].size() != dim || dim == 0) throw InvalidScale(idx, "direction has inconsistent dimension");
        if (w[i].is_zero()) throw InvalidScale(idx, "direction w is the zero vector");
        if (b[i] == T(1)) throw InvalidScale(idx, "node b equals 1");
        if (b[i] == T(0)) throw InvalidScale(idx, "node b is zero");
        for (std::size_t j = 0; j < i; ++j)
            if (b[j] == b[i])
                throw InvalidScale(idx, "node b duplicates node " + std::to_string(j + 1));
        if (i > 0 && !(abs_value(b[i]) < abs_value(b[i - 1])))
            throw InvalidScale(idx, "|b| must be strictly smaller than |b| of node " + std::to_string(i));
    }
}

} // namespace detail

/// g_i(m) = w_i * b_i^m.
template <class T>
ScaleFamily<T> make_geometric_scale(std::vector<CoordinateVector<T>> w, std::vector<T> b,
                                    std::size_t size = kAnalyticIndexCount) {
    detail::validate_geometric(w, b);
    const std::size_t count = b.size();
    const std::size_t dim = w.front().size();
    return detail::ScaleBuilder::make<T>(FamilyKind::Geometric, count, size, dim, std::move(b), std::move(w), {},
                                         nullptr);
}

/// g_i(m) = w_i * b_i^m * (1 + c_i/(m+1)); same limiting ratios as the geometric family.
template <class T>
ScaleFamily<T> make_perturbed_geometric_scale(std::vector<CoordinateVector<T>> w, std::vector<T> b,
                                              std::vector<T> c, std::size_t size = kAnalyticIndexCount) {
    detail::validate_geometric(w, b);
    if (c.size() != b.size()) throw InvalidScale(std::min(c.size(), b.size()) + 1, "c has wrong length");
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!(abs_value(c[i]) < real_t<T>(1))) throw InvalidScale(i + 1, "perturbation |c| must be < 1");
    const std::size_t count = b.size();
    const std::size_t dim = w.front().size();
    return detail::ScaleBuilder::make<T>(FamilyKind::PerturbedGeometric, count, size, dim, std::move(b),
                                         std::move(w), std::move(c), nullptr);
}

/// values[i-1][m] = g_i(m). Scale conditions are not assumed for tabulated data.
template <class T>
ScaleFamily<T> make_tabulated_scale(std::vector<std::vector<CoordinateVector<T>>> values) {
    if (values.empty()) throw InvalidScale(1, "tabulated family has no functions");
    const std::size_t size = values.front().size();
    const std::size_t dim = size ? values.front().front().size() : 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != size)
            throw DimensionError("tabulated function " + std::to_string(i + 1) + " has " +
                                 std::to_string(values[i].size()) + " entries, expected " + std::to_string(size));
        for (const auto& v : values[i])
            if (v.size() != dim)
                throw DimensionError("tabulated function " + std::to_string(i + 1) + " has ragged vectors");
    }
    const std::size_t count = values.size();
    return detail::ScaleBuilder::make<T>(
        FamilyKind::Tabulated, count, size, dim, {}, {}, {},
        std::make_shared<const std::vector<std::vector<CoordinateVector<T>>>>(std::move(values)));
}

/// Measured ||g_{i+1}(m)|| / ||g_i(m)|| at m, for i = 1..count-1. Advisory only.
template <class T>
std::vector<real_t<T>> scale_ratios(const ScaleFamily<T>& g, std::size_t m) {
    std::vector<real_t<T>> out;
    for (std::size_t i = 1; i < g.count(); ++i) {
        auto lo = norm(g.at(i, m));
        out.push_back(lo == real_t<T>(0) ? real_t<T>(0) : norm(g.at(i + 1, m)) / lo);
    }
    return out;
}

/// x_m = s + sum_{i<=p} alpha_i g_i(m), exact by construction.
template <class T>
class ModelSequence {
public:
    ModelSequence(CoordinateVector<T> limit, std::vector<T> alpha, ScaleFamily<T> scale)
        : s_(std::move(limit)), alpha_(std::move(alpha)), g_(std::move(scale)) {
        if (alpha_.size() > g_.count())
            throw DimensionError("model has " + std::to_string(alpha_.size()) + " coefficients but the scale family has " +
                                 std::to_string(g_.count()) + " functions");
        if (s_.size() != g_.dimension()) throw DimensionError("limit dimension differs from scale dimension");
    }

    const CoordinateVector<T>& limit() const noexcept { return s_; }
    const std::vector<T>& alpha() const noexcept { return alpha_; }
    const ScaleFamily<T>& scale() const noexcept { return g_; }
    std::size_t order() const noexcept { return alpha_.size(); }
    std::size_t size() const noexcept { return g_.size(); }

    /// alpha_i with 1-based i; zero beyond the truncation order.
    T coefficient(std::size_t i) const { return (i >= 1 && i <= alpha_.size()) ? alpha_[i - 1] : T(0); }

    CoordinateVector<T> eval(std::size_t m) const {
        CoordinateVector<T> x = s_;
        for (std::size_t i = 1; i <= alpha_.size(); ++i)
            if (alpha_[i - 1] != T(0)) x.add_scaled(alpha_[i - 1], g_.at(i, m));
        return x;
    }

    /// x_m - s - sum_{i<=r} alpha_i g_i(m), formed as the tail sum.
    CoordinateVector<T> remainder(std::size_t r, std::size_t m) const {
        if (r > alpha_.size())
            throw RangeError("remainder order " + std::to_string(r) + " exceeds truncation order " +
                             std::to_string(alpha_.size()));
        if (!g_.contains(m)) throw RangeError("remainder index outside scale range");
        CoordinateVector<T> e(s_.size());
        for (std::size_t i = r + 1; i <= alpha_.size(); ++i)
            if (alpha_[i - 1] != T(0)) e.add_scaled(alpha_[i - 1], g_.at(i, m));
        return e;
    }

    VectorSequence<T> as_sequence(std::optional<std::size_t> size = std::nullopt) const {
        auto self = *this;
        return VectorSequence<T>([self](std::size_t m) { return self.eval(m); }, size.value_or(g_.size()),
                                 s_.size());
    }

private:
    CoordinateVector<T> s_;
    std::vector<T> alpha_;
    ScaleFamily<T> g_;
};

template <class T>
CoordinateVector<T> eval_model(const ModelSequence<T>& seq, std::size_t m) {
    if (!seq.scale().contains(m)) throw RangeError("model index outside scale range");
    return seq.eval(m);
}

template <class T>
CoordinateVector<T> remainder(const ModelSequence<T>& seq, std::size_t r, std::size_t m) {
    return seq.remainder(r, m);
}

/// Stored vectors x_0..x_M with field metadata.
template <class T>
struct TabulatedSequence {
    std::vector<CoordinateVector<T>> vectors;
    bool complex_field = is_complex_v<T>;

    std::size_t size() const noexcept { return vectors.size(); }
    std::size_t dimension() const noexcept { return vectors.empty() ? 0 : vectors.front().size(); }
    VectorSequence<T> as_sequence() const { return VectorSequence<T>::from_vectors(vectors); }
};

} // namespace evec

#endif // EVEC_SEQUENCES_HPP
