#ifndef EVEC_THEORY_HPP
#define EVEC_THEORY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evec/core.hpp"
#include "evec/engine.hpp"
#include "evec/linalg.hpp"
#include "evec/sequences.hpp"

namespace evec {

struct Window {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

template <class T>
struct ScalarEstimate {
    T value{};
    real_t<T> spread{0}; // max |ratio(m) - ratio(m_hi)| over the window
};

template <class T>
struct VectorEstimate {
    CoordinateVector<T> value;
    real_t<T> spread{0};
};

namespace detail {

inline void require_valid_window(const Window& win) {
    if (win.hi < win.lo) throw RangeError("estimation window is empty");
}

template <class T>
T weighted_delta(const ScaleFamily<T>& g, const Weighting<T>& w, std::size_t i, std::size_t m) {
    return w(g.at(i, m + 1)) - w(g.at(i, m));
}

} // namespace detail

/// <y, g_i(m+1)> / <y, g_i(m)> at m = window.hi, with its spread over the window.
template <class T>
ScalarEstimate<T> estimate_b(const ScaleFamily<T>& g, const Weighting<T>& w, std::size_t i, Window win) {
    detail::require_valid_window(win);
    std::vector<T> ratios;
    for (std::size_t m = win.lo; m <= win.hi; ++m) {
        const T den = w(g.at(i, m));
        if (den == T(0)) throw ZeroDenominator(m, "estimate_b: <y, g_" + std::to_string(i) + "(m)> vanishes");
        ratios.push_back(w(g.at(i, m + 1)) / den);
    }
    ScalarEstimate<T> out{ratios.back(), real_t<T>(0)};
    for (const auto& r : ratios) out.spread = std::max(out.spread, abs_value(r - out.value));
    return out;
}

/// g_i(m) / <y, dg_i(m)> at m = window.hi, with its spread over the window.
template <class T>
VectorEstimate<T> estimate_ghat(const ScaleFamily<T>& g, const Weighting<T>& w, std::size_t i, Window win) {
    detail::require_valid_window(win);
    std::vector<CoordinateVector<T>> q;
    for (std::size_t m = win.lo; m <= win.hi; ++m) {
        const T den = detail::weighted_delta(g, w, i, m);
        if (den == T(0)) throw ZeroDenominator(m, "estimate_ghat: <y, dg_" + std::to_string(i) + "(m)> vanishes");
        q.push_back(g.at(i, m) / den);
    }
    VectorEstimate<T> out{q.back(), real_t<T>(0)};
    for (const auto& v : q) out.spread = std::max(out.spread, norm(v - out.value));
    return out;
}

/// eta_{i,j}(m) = <y, dg_i(m+j)> / <y, dg_i(m)>
template <class T>
T eta(const ScaleFamily<T>& g, const Weighting<T>& w, std::size_t i, std::size_t j, std::size_t m) {
    const T den = detail::weighted_delta(g, w, i, m);
    if (den == T(0)) throw ZeroDenominator(m, "eta: <y, dg_" + std::to_string(i) + "(m)> vanishes");
    return detail::weighted_delta(g, w, i, m + j) / den;
}

enum class ProfileSource { ExactFromFamily, EstimatedFromData };

inline const char* to_string(ProfileSource s) {
    return s == ProfileSource::ExactFromFamily ? "exact-from-family" : "estimated-from-data";
}

/// Limiting ratios b_i and directions ghat_i, index i stored at position i-1.
template <class T>
struct AsymptoticProfile {
    std::vector<T> b;
    std::vector<CoordinateVector<T>> ghat;
    ProfileSource source = ProfileSource::ExactFromFamily;
    Window window{};
    std::vector<real_t<T>> b_spread;
    std::vector<real_t<T>> ghat_spread;

    std::size_t size() const noexcept { return b.size(); }
};

/// Closed forms for analytic families: b_i and ghat_i = w_i / (<y, w_i> (b_i - 1)).
/// The perturbed family has the same limits.
template <class T>
AsymptoticProfile<T> exact_profile(const ScaleFamily<T>& g, const Weighting<T>& w) {
    if (!g.analytic()) throw DegenerateProfile("exact profile needs an analytic scale family");
    AsymptoticProfile<T> p;
    p.source = ProfileSource::ExactFromFamily;
    for (std::size_t i = 0; i < g.count(); ++i) {
        const T b = g.nodes()[i];
        const T yw = w(g.directions()[i]);
        if (yw == T(0))
            throw DegenerateProfile("<y, w_" + std::to_string(i + 1) + "> = 0; ghat is undefined");
        p.b.push_back(b);
        p.ghat.push_back(g.directions()[i] / (yw * (b - T(1))));
        p.b_spread.push_back(real_t<T>(0));
        p.ghat_spread.push_back(real_t<T>(0));
    }
    return p;
}

template <class T>
AsymptoticProfile<T> estimated_profile(const ScaleFamily<T>& g, const Weighting<T>& w, std::size_t count,
                                       Window win) {
    AsymptoticProfile<T> p;
    p.source = ProfileSource::EstimatedFromData;
    p.window = win;
    for (std::size_t i = 1; i <= count; ++i) {
        auto be = estimate_b(g, w, i, win);
        auto ge = estimate_ghat(g, w, i, win);
        p.b.push_back(be.value);
        p.b_spread.push_back(be.spread);
        p.ghat.push_back(ge.value);
        p.ghat_spread.push_back(ge.spread);
    }
    return p;
}

/// Advisory check of the ordering and nondegeneracy conditions on a profile.
template <class T>
std::vector<std::string> profile_warnings(const AsymptoticProfile<T>& p) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto idx = std::to_string(i + 1);
        if (p.b[i] == T(1)) out.push_back("b_" + idx + " equals 1");
        if (i > 0 && !(abs_value(p.b[i]) < abs_value(p.b[i - 1])))
            out.push_back("|b_" + idx + "| is not smaller than |b_" + std::to_string(i) + "|");
        if (p.ghat[i].is_zero()) out.push_back("ghat_" + idx + " is zero");
    }
    return out;
}

namespace detail {

template <class T>
BorderedVectorDeterminant<T> hhat_determinant(const AsymptoticProfile<T>& p, std::size_t k, std::size_t i) {
    if (i <= k) throw IndexError("hhat_{k,i} is defined only for i >= k+1 (k=" + std::to_string(k) +
                                 ", i=" + std::to_string(i) + ")");
    if (i > p.size()) throw IndexError("profile has no entry for index " + std::to_string(i));
    BorderedVectorDeterminant<T> d;
    d.block = DenseMatrix<T>(k + 1, k);
    auto fill_row = [&](std::size_t row, std::size_t idx) {
        d.first_column.push_back(p.ghat[idx - 1]);
        T pw(1);
        for (std::size_t c = 0; c < k; ++c) {
            d.block(row, c) = pw;
            pw *= p.b[idx - 1];
        }
    };
    fill_row(0, i);
    for (std::size_t j = 1; j <= k; ++j) fill_row(j, j);
    return d;
}

} // namespace detail

/// Bordered determinant with rows (ghat, 1, b, ..., b^{k-1}) for indices i, 1, ..., k.
template <class T>
CoordinateVector<T> hhat(const AsymptoticProfile<T>& p, std::size_t k, std::size_t i) {
    return bordered_det(detail::hhat_determinant(p, k, i), DetMethod::Cofactor);
}

/// True when ||hhat_{k,i}|| is at rounding level relative to its expansion terms.
template <class T>
bool hhat_vanishes(const AsymptoticProfile<T>& p, std::size_t k, std::size_t i, double rel_tol = 1e-12) {
    auto d = detail::hhat_determinant(p, k, i);
    real_t<T> scale(0);
    for (std::size_t r = 0; r <= k; ++r)
        scale += norm(d.first_column[r]) * abs_value(scalar_det(d.block.without_row(r), DetMethod::Cofactor));
    return norm(bordered_det(d, DetMethod::Cofactor)) <= real_t<T>(rel_tol) * scale;
}

/// C_{k,i} = ||hhat_{k,i}|| / (|V(b_1..b_k)| ||ghat_i||)
template <class T>
real_t<T> acceleration_constant(const AsymptoticProfile<T>& p, std::size_t k, std::size_t i) {
    auto h = hhat(p, k, i);
    std::vector<T> nodes(p.b.begin(), p.b.begin() + static_cast<std::ptrdiff_t>(k));
    const T v = vandermonde(nodes);
    if (v == T(0)) throw DegenerateProfile("Vandermonde determinant of b_1..b_k vanishes");
    const auto gn = norm(p.ghat[i - 1]);
    if (gn == real_t<T>(0)) throw DegenerateProfile("ghat_" + std::to_string(i) + " is zero");
    return norm(h) / (abs_value(v) * gn);
}

/// Numerical rank of ghat_1..ghat_count by modified Gram-Schmidt; full rank is
/// a sufficient hint (not a proof) that no hhat_{k,i} vanishes.
template <class T>
std::size_t ghat_rank(const AsymptoticProfile<T>& p, std::size_t count, double rel_tol = 1e-10) {
    std::vector<CoordinateVector<T>> basis;
    for (std::size_t i = 0; i < std::min(count, p.size()); ++i) {
        auto v = p.ghat[i];
        const auto original = norm(v);
        for (const auto& q : basis) v.add_scaled(-inner(q, v), q);
        const auto r = norm(v);
        if (original > real_t<T>(0) && r > real_t<T>(rel_tol) * original) basis.push_back(v / T(r));
    }
    return basis.size();
}

template <class R>
struct RateFit {
    R rate{0};
    R fit_quality{0}; // max relative deviation of the per-step ratios from rate
};

/// Geometric decay rate of positive error norms indexed by increasing n.
template <class R>
RateFit<R> measure_rate(const std::vector<std::pair<std::size_t, R>>& errors) {
    if (errors.size() < 4) throw InsufficientData("measure_rate needs at least 4 error values");
    for (std::size_t t = 0; t < errors.size(); ++t) {
        if (!(errors[t].second > R(0)))
            throw NonpositiveError("error value at n=" + std::to_string(errors[t].first) + " is not positive");
        if (t > 0 && errors[t].first <= errors[t - 1].first)
            throw InsufficientData("error indices must be strictly increasing");
    }
    using std::pow;
    auto step_ratio = [](const auto& a, const auto& b) {
        return R(pow(R(b.second / a.second), R(1) / R(static_cast<double>(b.first - a.first))));
    };
    RateFit<R> fit;
    fit.rate = step_ratio(errors.front(), errors.back());
    for (std::size_t t = 1; t < errors.size(); ++t) {
        R r = step_ratio(errors[t - 1], errors[t]);
        R dev = r > fit.rate ? R(r - fit.rate) : R(fit.rate - r);
        fit.fit_quality = std::max(fit.fit_quality, R(dev / fit.rate));
    }
    return fit;
}

// ---------------------------------------------------------------------------
// Verification harness

inline const std::vector<std::string>& claim_registry() {
    static const std::vector<std::string> ids{"1", "2", "3a", "3b", "4", "5a", "5b", "5c"};
    return ids;
}

struct ClaimRecord {
    std::string claim;
    std::string detail;
    double predicted = 0;
    double measured = 0;
    double error = 0; // compared against tolerance
    double tolerance = 0;
    bool applicable = true;
    bool pass = false;
    Window window{};
};

struct VerificationReport {
    std::size_t k = 0;
    std::optional<std::size_t> mu;
    bool mu_inferred = false;
    std::string profile_source;
    std::vector<ClaimRecord> records;
    std::vector<std::string> notes;

    bool passed() const {
        return std::all_of(records.begin(), records.end(), [](const auto& r) { return !r.applicable || r.pass; });
    }
    std::vector<const ClaimRecord*> for_claim(const std::string& id) const {
        std::vector<const ClaimRecord*> out;
        for (const auto& r : records)
            if (r.claim == id) out.push_back(&r);
        return out;
    }
};

struct VerifyConfig {
    std::size_t k = 1;
    Window window{10, 20};
    double tol_exact = 1e-10;
    double tol_asym = 0.05;
    /// Quantities that must vanish: value at window.hi <= vanish_factor * value at window.lo.
    double vanish_factor = 0.5;
    /// O(.) claims: max over window of the normalized error <= band * its value at window.lo.
    double bounded_band = 10.0;
    EngineOptions engine{};
};

/// Data for verification: the sequence, its (anti)limit and, when known, the coefficients.
template <class T>
struct VerificationInput {
    VectorSequence<T> x;
    CoordinateVector<T> s;
    std::optional<std::vector<T>> alpha;
    ScaleFamily<T> g;
};

namespace detail {

template <class T>
class Verifier {
public:
    using R = real_t<T>;

    Verifier(const VerificationInput<T>& in, const Weighting<T>& w, const VerifyConfig& cfg)
        : in_(in), w_(w), cfg_(cfg) {}

    VerificationReport run() {
        report_.k = cfg_.k;
        if (cfg_.k == 0) throw RangeError("verification needs k >= 1");
        if (cfg_.window.hi <= cfg_.window.lo + 2) throw RangeError("verification window needs at least 4 indices");
        const std::size_t needed = std::min(in_.g.count(), cfg_.k + 3);
        try {
            profile_ = in_.g.analytic()
                           ? exact_profile(in_.g, w_)
                           : estimated_profile(in_.g, w_, needed, cfg_.window);
        } catch (const Error& e) {
            report_.notes.push_back(std::string("profile unavailable: ") + e.what());
            fail("1", "asymptotic profile", e.what());
            return std::move(report_);
        }
        report_.profile_source = to_string(profile_.source);
        for (const auto& msg : profile_warnings(profile_)) report_.notes.push_back("profile: " + msg);
        exact_family_ = in_.g.kind() == FamilyKind::Geometric;

        guarded("1", [&] { part1(); });
        guarded("2", [&] { part2(); });
        guarded("3a", [&] { part3a(); });
        guarded("3b", [&] { part3b(); });
        guarded("4", [&] { part4(); });
        guarded("5a", [&] { part5(); });
        return std::move(report_);
    }

private:
    R limit_tol() const { return R(exact_family_ ? cfg_.tol_exact : cfg_.tol_asym); }
    std::size_t lo() const { return cfg_.window.lo; }
    std::size_t hi() const { return cfg_.window.hi; }

    template <class F>
    void guarded(const std::string& id, F&& f) {
        try {
            f();
        } catch (const Error& e) {
            fail(id, "evaluation error", e.what());
        }
    }

    void fail(const std::string& id, const std::string& detail, const std::string& why) {
        ClaimRecord r;
        r.claim = id;
        r.detail = detail + ": " + why;
        r.pass = false;
        r.window = cfg_.window;
        report_.records.push_back(std::move(r));
    }

    void add(const std::string& id, std::string detail, R predicted, R measured, R error, R tol) {
        ClaimRecord r;
        r.claim = id;
        r.detail = std::move(detail);
        r.predicted = to_double(predicted);
        r.measured = to_double(measured);
        r.error = to_double(error);
        r.tolerance = to_double(tol);
        r.pass = error <= tol;
        r.window = cfg_.window;
        report_.records.push_back(std::move(r));
    }

    void skip(const std::string& id, std::string detail) {
        ClaimRecord r;
        r.claim = id;
        r.detail = std::move(detail);
        r.applicable = false;
        r.pass = true;
        r.window = cfg_.window;
        report_.records.push_back(std::move(r));
    }

    static R rel_err(R measured, R predicted) {
        R d = measured > predicted ? R(measured - predicted) : R(predicted - measured);
        return predicted == R(0) ? d : R(d / predicted);
    }

    // Records a vanishing claim: value(hi) <= vanish_factor * value(lo), or both at rounding level.
    void add_vanishing(const std::string& id, std::string detail, R at_lo, R at_hi, R predicted_hi) {
        if (at_hi <= R(cfg_.tol_exact) && at_lo <= R(cfg_.tol_exact)) {
            add(id, std::move(detail) + " (identically zero)", predicted_hi, at_hi, at_hi, R(cfg_.tol_exact));
            return;
        }
        R ratio = at_lo == R(0) ? R(1) : R(at_hi / at_lo);
        add(id, std::move(detail) + " [error = value(hi)/value(lo)]", predicted_hi, at_hi, ratio,
            R(cfg_.vanish_factor));
    }

    R gnorm(std::size_t i, std::size_t n) const { return norm(in_.g.at(i, n)); }

    CoordinateVector<T> f(std::size_t k, std::size_t i, std::size_t n) const {
        return functional(in_.g.sequence(i), in_.g, w_, n, k, FunctionalPath::Solve, cfg_.engine);
    }

    CoordinateVector<T> s_error(std::size_t n, std::size_t k) const {
        return extrapolate(in_.x, in_.g, w_, n, k, cfg_.engine) - in_.s;
    }

    T alpha(std::size_t i) const {
        const auto& a = *in_.alpha;
        return (i >= 1 && i <= a.size()) ? a[i - 1] : T(0);
    }

    bool hhat_nonzero(std::size_t k, std::size_t i) const { return !hhat_vanishes(profile_, k, i); }

    // <y, dg_i> ratios tend to b_i and the family <y, dg_i> is an asymptotic scale.
    void part1() {
        const std::size_t imax = std::min(in_.g.count(), cfg_.k + 2);
        for (std::size_t i = 1; i <= imax; ++i) {
            const T measured = eta(in_.g, w_, i, 1, hi());
            const T b = profile_.b[i - 1];
            add("1", "<y,dg_" + std::to_string(i) + "(m+1)>/<y,dg_" + std::to_string(i) + "(m)> -> b_" +
                         std::to_string(i) + " [|.| shown]",
                abs_value(b), abs_value(measured), abs_value(measured - b) / abs_value(b), limit_tol());
        }
        for (std::size_t i = 1; i < imax; ++i) {
            auto q = [&](std::size_t n) {
                return abs_value(detail::weighted_delta(in_.g, w_, i + 1, n) / detail::weighted_delta(in_.g, w_, i, n));
            };
            add_vanishing("1", "|<y,dg_" + std::to_string(i + 1) + "(n)>/<y,dg_" + std::to_string(i) + "(n)>| -> 0",
                          q(lo()), q(hi()), R(0));
        }
    }

    // D_{n,k} != 0 on the window and psi_{n,k} -> V(b_1..b_k).
    void part2() {
        const std::size_t k = cfg_.k;
        std::size_t singular = 0;
        for (std::size_t n = lo(); n <= hi(); ++n) {
            try {
                solve_coefficients(in_.x, in_.g, w_, n, k, cfg_.engine);
            } catch (const SingularSystem&) {
                ++singular;
            }
        }
        add("2", "D_{n,k} nonsingular for every n in window [error = singular count]", R(0), R(singular),
            R(singular), R(0));
        std::vector<T> nodes(profile_.b.begin(), profile_.b.begin() + static_cast<std::ptrdiff_t>(k));
        const T v = vandermonde(nodes);
        const T p = psi(in_.g, w_, hi(), k);
        add("2", "psi_{n,k} -> V(b_1..b_k) at n=hi [|.| shown]", abs_value(v), abs_value(p),
            abs_value(p - v) / abs_value(v), limit_tol());
    }

    // Annihilation for i <= k; ||f_{n,k}(g_i)|| ~ C_{k,i} ||g_i(n)|| for i > k.
    void part3a() {
        const std::size_t k = cfg_.k;
        for (std::size_t i = 1; i <= k; ++i) {
            R worst(0);
            for (std::size_t n = lo(); n <= hi(); ++n) worst = std::max(worst, R(norm(f(k, i, n)) / gnorm(i, n)));
            add("3a", "annihilation ||f_{n,k}(g_" + std::to_string(i) + ")||/||g_" + std::to_string(i) + "(n)||",
                R(0), worst, worst, R(cfg_.tol_exact));
        }
        const std::size_t imax = std::min(in_.g.count(), std::min(profile_.size(), k + 2));
        for (std::size_t i = k + 1; i <= imax; ++i) {
            auto q = [&](std::size_t n) { return R(norm(f(k, i, n)) / gnorm(i, n)); };
            const auto label = "||f_{n,k}(g_" + std::to_string(i) + ")||/||g_" + std::to_string(i) + "(n)||";
            if (hhat_nonzero(k, i)) {
                const R c = acceleration_constant(profile_, k, i);
                const R measured = q(hi());
                add("3a", label + " -> C_{k," + std::to_string(i) + "}", c, measured, rel_err(measured, c), limit_tol());
            } else {
                add_vanishing("3a", label + " -> 0 (hhat_{k,i} = 0)", q(lo()), q(hi()), R(0));
            }
        }
    }

    // ||f_{n,k}(g_{i+1})|| / ||g_i(n)|| -> 0 for i >= k+1.
    void part3b() {
        const std::size_t k = cfg_.k;
        const std::size_t imax = std::min(in_.g.count(), k + 3);
        if (imax < k + 2) {
            skip("3b", "needs at least k+2 scale functions");
            return;
        }
        for (std::size_t i = k + 1; i + 1 <= imax; ++i) {
            auto q = [&](std::size_t n) { return R(norm(f(k, i + 1, n)) / gnorm(i, n)); };
            add_vanishing("3b",
                          "||f_{n,k}(g_" + std::to_string(i + 1) + ")||/||g_" + std::to_string(i) + "(n)|| -> 0",
                          q(lo()), q(hi()), R(0));
        }
    }

    // s_{n,k} - s - sum_{i=k+1}^r alpha_i f_{n,k}(g_i) = o(g_r(n)) for r = k+1, k+2.
    void part4() {
        if (!in_.alpha) {
            skip("4", "coefficients alpha unknown");
            return;
        }
        const std::size_t k = cfg_.k;
        const R scale = R(1) + norm(in_.s);
        for (std::size_t r = k + 1; r <= k + 2; ++r) {
            if (r > in_.g.count()) {
                skip("4", "r=" + std::to_string(r) + " exceeds available scale functions");
                continue;
            }
            auto residual = [&](std::size_t n) {
                auto e = s_error(n, k);
                for (std::size_t i = k + 1; i <= r; ++i)
                    if (alpha(i) != T(0)) e.add_scaled(-alpha(i), f(k, i, n));
                return e;
            };
            bool tail_zero = true;
            for (std::size_t i = r + 1; i <= in_.alpha->size(); ++i)
                if (alpha(i) != T(0)) tail_zero = false;
            const auto label = "||s_{n,k} - s - sum_{i=k+1}^{" + std::to_string(r) + "} alpha_i f_{n,k}(g_i)||";
            if (tail_zero) {
                R worst(0);
                for (std::size_t n = lo(); n <= hi(); ++n) worst = std::max(worst, R(norm(residual(n)) / scale));
                add("4", label + "/(1+||s||) (finite model: exactly zero)", R(0), worst, worst, R(cfg_.tol_exact));
            } else {
                auto q = [&](std::size_t n) { return R(norm(residual(n)) / gnorm(r, n)); };
                add_vanishing("4", label + "/||g_" + std::to_string(r) + "(n)|| -> 0", q(lo()), q(hi()), R(0));
            }
        }
    }

    std::vector<std::pair<std::size_t, R>> error_series(std::size_t col) const {
        std::vector<std::pair<std::size_t, R>> out;
        for (std::size_t n = lo(); n <= hi(); ++n) out.emplace_back(n, norm(s_error(n, col)));
        return out;
    }

    // Infers mu from the measured rate of column k when coefficients are unknown.
    std::optional<std::size_t> infer_mu() {
        auto fit = measure_rate(error_series(cfg_.k));
        std::optional<std::size_t> best;
        R best_gap(0);
        for (std::size_t i = 1; cfg_.k + i <= profile_.size(); ++i) {
            R gap = rel_err(fit.rate, abs_value(profile_.b[cfg_.k + i - 1]));
            if (!best || gap < best_gap) {
                best = i;
                best_gap = gap;
            }
        }
        return best;
    }

    void part5() {
        const std::size_t k = cfg_.k;
        const R scale = R(1) + norm(in_.s);
        std::optional<std::size_t> mu;
        if (in_.alpha) {
            for (std::size_t i = 1; k + i <= in_.alpha->size(); ++i)
                if (alpha(k + i) != T(0)) {
                    mu = i;
                    break;
                }
        } else {
            mu = infer_mu();
            report_.mu_inferred = true;
            report_.notes.push_back("mu inferred from measured rates (advisory)");
        }
        report_.mu = mu;

        if (!mu) {
            R worst(0);
            for (std::size_t n = lo(); n <= hi(); ++n) worst = std::max(worst, R(norm(s_error(n, k)) / scale));
            add("5a", "all alpha_{k+i} = 0: ||s_{n,k} - s||/(1+||s||) exactly zero", R(0), worst, worst,
                R(cfg_.tol_exact));
            skip("5b", "no nonzero alpha_{k+i}");
        } else {
            const std::size_t kmu = k + *mu;
            if (kmu > profile_.size()) throw RangeError("profile lacks index k+mu");
            const R bmu = abs_value(profile_.b[kmu - 1]);
            for (std::size_t j = 0; j < *mu && k + j <= in_.g.count(); ++j) {
                const std::size_t col = k + j;
                const auto series = error_series(col);
                const auto cj = "s_{n," + std::to_string(col) + "}";
                // O(g_{k+mu}(n)) boundedness
                R first(0), worst(0);
                for (const auto& [n, e] : series) {
                    R rho = e / gnorm(kmu, n);
                    if (n == lo()) first = rho;
                    worst = std::max(worst, rho);
                }
                add("5a", "||" + cj + " - s||/||g_" + std::to_string(kmu) + "(n)|| bounded [error = max/first]",
                    R(1), worst, first == R(0) ? R(0) : R(worst / first), R(cfg_.bounded_band));
                if (hhat_nonzero(col, kmu)) {
                    auto fit = measure_rate(series);
                    add("5a", "decay rate of ||" + cj + " - s|| -> |b_" + std::to_string(kmu) + "|", bmu, fit.rate,
                        rel_err(fit.rate, bmu), R(cfg_.tol_asym));
                } else {
                    skip("5a", "rate of " + cj + ": hhat_{" + std::to_string(col) + "," + std::to_string(kmu) +
                                   "} = 0, only the O(.) bound applies");
                }
                if (!in_.alpha) {
                    skip("5b", cj + ": needs known alpha_{k+mu}");
                } else if (hhat_nonzero(col, kmu)) {
                    const R c = acceleration_constant(profile_, col, kmu);
                    const R amu = abs_value(alpha(kmu));
                    const R measured = series.back().second / (amu * gnorm(kmu, hi()));
                    add("5b", "||" + cj + " - s||/(|alpha_" + std::to_string(kmu) + "| ||g_" + std::to_string(kmu) +
                                  "(n)||) -> C_{" + std::to_string(col) + "," + std::to_string(kmu) + "}",
                        c, measured, rel_err(measured, c), R(cfg_.tol_asym));
                } else {
                    skip("5b", cj + ": hhat = 0");
                }
            }
        }

        // 5c: s_{n,k+j} converges faster than s_{n,k-1}.
        if (!in_.alpha) {
            skip("5c", "needs known alpha_k");
            return;
        }
        if (alpha(k) == T(0)) {
            skip("5c", "hypothesis alpha_k != 0 fails");
            return;
        }
        if (!hhat_nonzero(k - 1, k)) {
            skip("5c", "hypothesis hhat_{k-1,k} != 0 fails");
            return;
        }
        const std::size_t span = mu ? *mu : 1;
        for (std::size_t j = 0; j < span && k + j <= in_.g.count(); ++j) {
            const std::size_t col = k + j;
            auto q = [&](std::size_t n) { return R(norm(s_error(n, col)) / norm(s_error(n, k - 1))); };
            const R predicted = mu ? R(gnorm(k + *mu, hi()) / gnorm(k, hi())) : R(0);
            add_vanishing("5c",
                          "||s_{n," + std::to_string(col) + "} - s||/||s_{n," + std::to_string(k - 1) + "} - s|| -> 0",
                          q(lo()), q(hi()), predicted);
        }
    }

    const VerificationInput<T>& in_;
    const Weighting<T>& w_;
    VerifyConfig cfg_;
    AsymptoticProfile<T> profile_;
    bool exact_family_ = false;
    VerificationReport report_;
};

} // namespace detail

/// Measures every claim of the convergence theory on the given data and
/// compares it with the predicted value. Engine failures become failed records.
template <class T>
VerificationReport verify(const VerificationInput<T>& in, const Weighting<T>& w, const VerifyConfig& cfg = {}) {
    return detail::Verifier<T>(in, w, cfg).run();
}

template <class T>
VerificationReport verify_theorem(const ModelSequence<T>& model, const Weighting<T>& w, const VerifyConfig& cfg = {}) {
    VerificationInput<T> in{model.as_sequence(), model.limit(), model.alpha(), model.scale()};
    return verify(in, w, cfg);
}

// ---------------------------------------------------------------------------
// Diagnostics

template <class T>
struct PsiGap {
    std::size_t n = 0;
    std::size_t k = 0;
    bool degenerate = false;
    T psi{};
    T vandermonde{};
    real_t<T> relative_gap{0};
};

template <class T>
struct DiagnosticsReport {
    AsymptoticProfile<T> profile;
    std::vector<PsiGap<T>> psi_gaps;
    /// eta_{i,j}(m) at m = window.hi for j = 1..k-1, row i-1.
    std::vector<std::vector<T>> eta_at_hi;
    std::vector<real_t<T>> scale_ratios_at_hi;
    std::size_t ghat_rank = 0;
    std::vector<std::string> warnings;
};

/// Takes the closed-form profile for analytic families (estimated over `win`
/// otherwise) and reports psi_{n,k} - V(b_1..b_k)
/// for n in [n0, n1], k in [1, kmax].
template <class T>
DiagnosticsReport<T> diagnose(const ScaleFamily<T>& g, const Weighting<T>& w, std::size_t n0, std::size_t n1,
                              std::size_t kmax, Window win) {
    DiagnosticsReport<T> d;
    const std::size_t count = std::min(kmax + 1, g.count());
    try {
        d.profile = g.analytic() ? exact_profile(g, w) : estimated_profile(g, w, count, win);
    } catch (const DegenerateProfile&) {
        d.profile = estimated_profile(g, w, count, win);
    }
    d.warnings = profile_warnings(d.profile);
    d.ghat_rank = ghat_rank(d.profile, count);
    d.scale_ratios_at_hi = scale_ratios(g, win.hi);
    for (std::size_t i = 1; i <= count; ++i) {
        std::vector<T> row;
        for (std::size_t j = 1; j < kmax; ++j) row.push_back(eta(g, w, i, j, win.hi));
        d.eta_at_hi.push_back(std::move(row));
    }
    for (std::size_t k = 1; k <= std::min(kmax, g.count()); ++k) {
        std::vector<T> nodes(d.profile.b.begin(), d.profile.b.begin() + static_cast<std::ptrdiff_t>(k));
        const T v = vandermonde(nodes);
        for (std::size_t n = n0; n <= n1; ++n) {
            if (!g.contains(n + k)) break;
            PsiGap<T> gap;
            gap.n = n;
            gap.k = k;
            gap.vandermonde = v;
            try {
                gap.psi = psi(g, w, n, k);
                gap.relative_gap = v == T(0) ? abs_value(gap.psi) : abs_value(gap.psi - v) / abs_value(v);
            } catch (const DegenerateNormalization&) {
                gap.degenerate = true;
            }
            d.psi_gaps.push_back(gap);
        }
    }
    return d;
}

} // namespace evec

#endif // EVEC_THEORY_HPP
