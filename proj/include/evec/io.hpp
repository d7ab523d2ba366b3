#ifndef EVEC_IO_HPP
#define EVEC_IO_HPP

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "evec/core.hpp"
#include "evec/engine.hpp"
#include "evec/sequences.hpp"
#include "evec/theory.hpp"

namespace evec {

using json = nlohmann::json;

enum class SequenceFormat { Csv, Json };

inline SequenceFormat format_from_path(const std::filesystem::path& p) {
    return p.extension() == ".csv" ? SequenceFormat::Csv : SequenceFormat::Json;
}

/// 17 significant digits.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes through a sibling temporary file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// Scalars and vectors in JSON. Complex entries are [re, im] pairs.

template <class T>
json scalar_to_json(const T& v) {
    if constexpr (is_complex_v<T>)
        return json::array({to_double(v.real()), to_double(v.imag())});
    else
        return to_double(v);
}

template <class T>
T scalar_from_json(const json& j) {
    using R = real_t<T>;
    if (j.is_number()) return T(R(j.get<double>()));
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        if constexpr (is_complex_v<T>)
            return T(R(j[0].get<double>()), R(j[1].get<double>()));
        else
            throw ParseError(0, 0, "complex entry in a real-field run; use --field complex");
    }
    throw ParseError(0, 0, "expected a number or an [re, im] pair, got " + j.dump());
}

template <class T>
json vector_to_json(const CoordinateVector<T>& v) {
    json a = json::array();
    for (const auto& c : v) a.push_back(scalar_to_json(c));
    return a;
}

template <class T>
CoordinateVector<T> vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError(0, 0, "expected a vector (JSON list)");
    std::vector<T> c;
    c.reserve(j.size());
    for (const auto& e : j) c.push_back(scalar_from_json<T>(e));
    return CoordinateVector<T>(std::move(c));
}

template <class T>
json scalars_to_json(const std::vector<T>& v) {
    json a = json::array();
    for (const auto& c : v) a.push_back(scalar_to_json(c));
    return a;
}

template <class T>
std::vector<T> scalars_from_json(const json& j) {
    if (!j.is_array()) throw ParseError(0, 0, "expected a list of scalars");
    std::vector<T> out;
    for (const auto& e : j) out.push_back(scalar_from_json<T>(e));
    return out;
}

namespace detail {

inline json parse_json_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t p = 0; p + 1 < e.byte && p < text.size(); ++p) {
            if (text[p] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(line, col, e.what());
    }
}

inline const json& require_key(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(0, 0, std::string("missing key \"") + key + "\"");
    return j.at(key);
}

inline std::string field_name(bool complex_field) { return complex_field ? "complex" : "real"; }

} // namespace detail

// ---------------------------------------------------------------------------
// Sequences

/// One vector per line, comma-separated components, no header. Blank lines are skipped.
template <class T>
TabulatedSequence<T> parse_sequence_csv(std::string_view text) {
    using R = real_t<T>;
    TabulatedSequence<T> seq;
    seq.complex_field = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") != std::string_view::npos) {
            std::vector<T> comps;
            std::size_t pos = 0;
            while (true) {
                std::size_t comma = line.find(',', pos);
                std::size_t stop = comma == std::string_view::npos ? line.size() : comma;
                std::size_t b = pos, e = stop;
                while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
                while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t')) --e;
                double value = 0;
                auto [ptr, ec] = std::from_chars(line.data() + b, line.data() + e, value);
                if (b == e || ec != std::errc() || ptr != line.data() + e)
                    throw ParseError(line_no, b + 1, "malformed number '" + std::string(line.substr(b, e - b)) + "'");
                comps.push_back(T(R(value)));
                if (comma == std::string_view::npos) break;
                pos = comma + 1;
            }
            if (!seq.vectors.empty() && comps.size() != seq.vectors.front().size())
                throw DimensionError("ragged CSV row at line " + std::to_string(line_no) + ": " +
                                     std::to_string(comps.size()) + " components, expected " +
                                     std::to_string(seq.vectors.front().size()));
            seq.vectors.emplace_back(std::move(comps));
        }
        if (end == text.size()) break;
        start = end + 1;
    }
    return seq;
}

template <class T>
std::string format_sequence_csv(const TabulatedSequence<T>& seq) {
    if constexpr (is_complex_v<T>) {
        for (const auto& v : seq.vectors)
            for (const auto& c : v)
                if (c.imag() != real_t<T>(0)) throw Error("CSV holds real data only; use JSON for complex sequences");
    }
    std::string out;
    for (const auto& v : seq.vectors) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (j) out += ',';
            if constexpr (is_complex_v<T>)
                out += format_number(to_double(v[j].real()));
            else
                out += format_number(to_double(v[j]));
        }
        out += '\n';
    }
    return out;
}

/// {"dimension": N, "field": "real"|"complex", "vectors": [[...], ...]}
template <class T>
TabulatedSequence<T> parse_sequence_json(std::string_view text) {
    auto j = detail::parse_json_text(text);
    const auto& vectors = detail::require_key(j, "vectors");
    if (!vectors.is_array()) throw ParseError(0, 0, "\"vectors\" must be a list");
    TabulatedSequence<T> seq;
    const std::string field = j.value("field", std::string("real"));
    if (field != "real" && field != "complex") throw ParseError(0, 0, "\"field\" must be \"real\" or \"complex\"");
    if (field == "complex" && !is_complex_v<T>)
        throw ParseError(0, 0, "sequence has complex field; rerun with --field complex");
    seq.complex_field = field == "complex";
    std::optional<std::size_t> dim;
    if (j.contains("dimension")) dim = j.at("dimension").get<std::size_t>();
    for (std::size_t m = 0; m < vectors.size(); ++m) {
        auto v = vector_from_json<T>(vectors[m]);
        if (!dim) dim = v.size();
        if (v.size() != *dim)
            throw DimensionError("vector " + std::to_string(m) + " has dimension " + std::to_string(v.size()) +
                                 ", expected " + std::to_string(*dim));
        seq.vectors.push_back(std::move(v));
    }
    return seq;
}

template <class T>
json sequence_to_json(const TabulatedSequence<T>& seq) {
    json vectors = json::array();
    for (const auto& v : seq.vectors) vectors.push_back(vector_to_json(v));
    return json{{"dimension", seq.dimension()}, {"field", detail::field_name(is_complex_v<T>)}, {"vectors", vectors}};
}

template <class T>
TabulatedSequence<T> load_sequence(const std::filesystem::path& path, std::optional<SequenceFormat> format = {}) {
    auto text = read_file(path);
    return format.value_or(format_from_path(path)) == SequenceFormat::Csv ? parse_sequence_csv<T>(text)
                                                                          : parse_sequence_json<T>(text);
}

template <class T>
std::string format_sequence(const TabulatedSequence<T>& seq, SequenceFormat format) {
    return format == SequenceFormat::Csv ? format_sequence_csv(seq) : sequence_to_json(seq).dump(2) + "\n";
}

template <class T>
void save_sequence(const std::filesystem::path& path, const TabulatedSequence<T>& seq,
                   std::optional<SequenceFormat> format = {}) {
    write_file_atomic(path, format_sequence(seq, format.value_or(format_from_path(path))));
}

// ---------------------------------------------------------------------------
// Scale families, weighting, ground truth

/// {"kind": "geometric"|"perturbed"|"tabulated", "b": [...], "w": [[...]], "c": [...]}
/// Tabulated families carry "g": [[vector per m] per function].
template <class T>
json scale_to_json(const ScaleFamily<T>& g) {
    json j{{"kind", to_string(g.kind())}, {"field", detail::field_name(is_complex_v<T>)}};
    if (g.analytic()) {
        j["b"] = scalars_to_json(g.nodes());
        json w = json::array();
        for (const auto& v : g.directions()) w.push_back(vector_to_json(v));
        j["w"] = w;
        if (g.kind() == FamilyKind::PerturbedGeometric) j["c"] = scalars_to_json(g.perturbations());
    } else {
        json fns = json::array();
        for (std::size_t i = 1; i <= g.count(); ++i) {
            json rows = json::array();
            for (std::size_t m = 0; m < g.size(); ++m) rows.push_back(vector_to_json(g.at(i, m)));
            fns.push_back(rows);
        }
        j["g"] = fns;
    }
    return j;
}

template <class T>
ScaleFamily<T> scale_from_json(const json& j) {
    const auto kind = detail::require_key(j, "kind").get<std::string>();
    if (kind == "tabulated") {
        std::vector<std::vector<CoordinateVector<T>>> values;
        for (const auto& fn : detail::require_key(j, "g")) {
            std::vector<CoordinateVector<T>> rows;
            for (const auto& v : fn) rows.push_back(vector_from_json<T>(v));
            values.push_back(std::move(rows));
        }
        return make_tabulated_scale(std::move(values));
    }
    auto b = scalars_from_json<T>(detail::require_key(j, "b"));
    std::vector<CoordinateVector<T>> w;
    for (const auto& v : detail::require_key(j, "w")) w.push_back(vector_from_json<T>(v));
    if (kind == "geometric" && !j.contains("c")) return make_geometric_scale(std::move(w), std::move(b));
    if (kind == "geometric" || kind == "perturbed") {
        std::vector<T> c = j.contains("c") ? scalars_from_json<T>(j.at("c")) : std::vector<T>(b.size(), T(0));
        return make_perturbed_geometric_scale(std::move(w), std::move(b), std::move(c));
    }
    throw ParseError(0, 0, "unknown scale family kind \"" + kind + "\"");
}

template <class T>
ScaleFamily<T> parse_scale_json(std::string_view text) {
    return scale_from_json<T>(detail::parse_json_text(text));
}

/// {"y": [...], "weights": [...] (optional)}
template <class T>
Weighting<T> parse_weighting_json(std::string_view text) {
    auto j = detail::parse_json_text(text);
    auto y = vector_from_json<T>(detail::require_key(j, "y"));
    std::vector<real_t<T>> weights;
    if (j.contains("weights"))
        for (const auto& e : j.at("weights")) weights.push_back(real_t<T>(e.get<double>()));
    return Weighting<T>(std::move(y), std::move(weights));
}

template <class T>
json weighting_to_json(const Weighting<T>& w) {
    json j{{"y", vector_to_json(w.y())}};
    if (!w.weights().empty()) {
        json a = json::array();
        for (const auto& x : w.weights()) a.push_back(to_double(x));
        j["weights"] = a;
    }
    return j;
}

/// Sidecar with the known limit s and, for synthetic data, the coefficients alpha.
template <class T>
struct GroundTruth {
    CoordinateVector<T> s;
    std::optional<std::vector<T>> alpha;
    std::string preset;
};

template <class T>
json truth_to_json(const GroundTruth<T>& t) {
    json j{{"s", vector_to_json(t.s)}, {"field", detail::field_name(is_complex_v<T>)}};
    if (t.alpha) {
        j["alpha"] = scalars_to_json(*t.alpha);
        json zeros = json::array();
        for (std::size_t i = 0; i < t.alpha->size(); ++i)
            if ((*t.alpha)[i] == T(0)) zeros.push_back(i + 1);
        j["zero_coefficients"] = zeros;
    }
    if (!t.preset.empty()) j["preset"] = t.preset;
    return j;
}

template <class T>
GroundTruth<T> parse_truth_json(std::string_view text) {
    auto j = detail::parse_json_text(text);
    GroundTruth<T> t;
    t.s = vector_from_json<T>(detail::require_key(j, "s"));
    if (j.contains("alpha")) t.alpha = scalars_from_json<T>(j.at("alpha"));
    t.preset = j.value("preset", std::string());
    return t;
}

// ---------------------------------------------------------------------------
// Extrapolation table export

namespace detail {

template <class T>
std::vector<std::string> component_headers(std::size_t dim) {
    std::vector<std::string> h;
    for (std::size_t j = 0; j < dim; ++j) {
        if constexpr (is_complex_v<T>) {
            h.push_back("x" + std::to_string(j) + "_re");
            h.push_back("x" + std::to_string(j) + "_im");
        } else {
            h.push_back("x" + std::to_string(j));
        }
    }
    return h;
}

} // namespace detail

/// Header row, then one row per cell: n,k,status,condition,residual,components.
/// Non-ok cells leave the numeric fields empty. Complex components take two columns.
template <class T>
std::string table_to_csv(const ExtrapolationTable<T>& table) {
    std::string out = "n,k,status,condition,residual";
    for (const auto& h : detail::component_headers<T>(table.dimension())) out += "," + h;
    out += '\n';
    const std::size_t width = table.dimension() * (is_complex_v<T> ? 2 : 1);
    for (std::size_t n = table.n0(); n <= table.n1(); ++n) {
        for (std::size_t k = 0; k <= table.kmax(); ++k) {
            const auto& c = table.cell(n, k);
            out += std::to_string(n) + "," + std::to_string(k) + "," + to_string(c.status);
            if (c.status != CellStatus::Ok) {
                out += ",,";
                for (std::size_t j = 0; j < width; ++j) out += ',';
            } else {
                out += "," + format_number(to_double(c.condition)) + "," + format_number(to_double(c.residual));
                for (const auto& v : c.value) {
                    if constexpr (is_complex_v<T>)
                        out += "," + format_number(to_double(v.real())) + "," + format_number(to_double(v.imag()));
                    else
                        out += "," + format_number(to_double(v));
                }
            }
            out += '\n';
        }
    }
    return out;
}

template <class T>
json table_to_json(const ExtrapolationTable<T>& table) {
    json cells = json::array();
    for (std::size_t n = table.n0(); n <= table.n1(); ++n)
        for (std::size_t k = 0; k <= table.kmax(); ++k) {
            const auto& c = table.cell(n, k);
            json cell{{"n", n}, {"k", k}, {"status", to_string(c.status)}};
            if (c.status == CellStatus::Ok) {
                cell["condition"] = to_double(c.condition);
                cell["residual"] = to_double(c.residual);
                cell["untrusted"] = c.untrusted;
                cell["value"] = vector_to_json(c.value);
            } else {
                cell["condition"] = nullptr;
                cell["residual"] = nullptr;
                cell["value"] = nullptr;
            }
            cells.push_back(std::move(cell));
        }
    return json{{"n0", table.n0()},
                {"n1", table.n1()},
                {"kmax", table.kmax()},
                {"dimension", table.dimension()},
                {"field", detail::field_name(is_complex_v<T>)},
                {"cells", cells}};
}

template <class T>
std::string format_table(const ExtrapolationTable<T>& table, SequenceFormat format) {
    return format == SequenceFormat::Csv ? table_to_csv(table) : table_to_json(table).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Reports

inline json report_to_json(const VerificationReport& r) {
    json records = json::array();
    for (const auto& c : r.records)
        records.push_back(json{{"claim", c.claim},
                               {"detail", c.detail},
                               {"predicted", c.predicted},
                               {"measured", c.measured},
                               {"error", c.error},
                               {"tolerance", c.tolerance},
                               {"applicable", c.applicable},
                               {"pass", c.pass},
                               {"window", json::array({c.window.lo, c.window.hi})}});
    json j{{"k", r.k},
           {"profile_source", r.profile_source},
           {"pass", r.passed()},
           {"records", records},
           {"notes", r.notes}};
    j["mu"] = r.mu ? json(*r.mu) : json(nullptr);
    j["mu_inferred"] = r.mu_inferred;
    return j;
}

template <class T>
json diagnostics_to_json(const DiagnosticsReport<T>& d) {
    json profile{{"source", to_string(d.profile.source)},
                 {"window", json::array({d.profile.window.lo, d.profile.window.hi})},
                 {"b", scalars_to_json(d.profile.b)}};
    json ghat = json::array();
    for (const auto& v : d.profile.ghat) ghat.push_back(vector_to_json(v));
    profile["ghat"] = ghat;
    json bs = json::array(), gs = json::array();
    for (const auto& x : d.profile.b_spread) bs.push_back(to_double(x));
    for (const auto& x : d.profile.ghat_spread) gs.push_back(to_double(x));
    profile["b_spread"] = bs;
    profile["ghat_spread"] = gs;

    json gaps = json::array();
    for (const auto& g : d.psi_gaps) {
        json e{{"n", g.n}, {"k", g.k}, {"degenerate", g.degenerate}, {"vandermonde", scalar_to_json(g.vandermonde)}};
        if (g.degenerate) {
            e["psi"] = nullptr;
            e["relative_gap"] = nullptr;
        } else {
            e["psi"] = scalar_to_json(g.psi);
            e["relative_gap"] = to_double(g.relative_gap);
        }
        gaps.push_back(std::move(e));
    }
    json eta = json::array();
    for (const auto& row : d.eta_at_hi) eta.push_back(scalars_to_json(row));
    json ratios = json::array();
    for (const auto& r : d.scale_ratios_at_hi) ratios.push_back(to_double(r));
    return json{{"profile", profile},  {"psi_gaps", gaps},         {"eta_at_window_hi", eta},
                {"scale_ratios", ratios}, {"ghat_rank", d.ghat_rank}, {"warnings", d.warnings}};
}

} // namespace evec

#endif // EVEC_IO_HPP
