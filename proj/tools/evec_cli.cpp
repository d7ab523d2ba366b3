// evec: command-line front end for the vector E-algorithm library.
//
//   evec generate    --preset g3 --out DIR
//   evec extrapolate --input seq.json --scales scales.json --kmax 3 --out table.csv
//   evec diagnose    --scales scales.json --n0 0 --n1 40 --kmax 3 --out diag.json
//   evec verify      --input seq.json --scales scales.json --truth truth.json --out report.json
//
// Exit codes: 0 success, 1 input/validation error, 2 verification failure.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "evec/evec.hpp"
#include "evec/io.hpp"
#include "evec/quad.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitVerify = 2;

struct RunConfig {
    std::string input;
    std::string scales;
    std::string weighting;
    std::string truth;
    std::optional<std::size_t> n0;
    std::optional<std::size_t> n1;
    std::optional<std::size_t> kmax;
    std::size_t k = 1;
    std::string field = "real";
    std::string precision = "double";
    std::string out;
    std::string format;
    std::string preset;
    std::optional<double> tol_singular;
    std::optional<double> tol_claim;
    std::optional<double> tol_exact;
    unsigned threads = 1;

    // generate
    std::vector<double> b;
    std::vector<double> alpha;
    std::vector<double> c;
    std::size_t dim = 4;
    std::size_t count = 60;
    std::uint64_t seed = 20160501;
};

struct Preset {
    std::vector<double> b;
    std::vector<double> alpha;
    std::vector<double> c; // empty: exact geometric
    std::size_t dim = 4;
};

const std::map<std::string, Preset>& presets() {
    static const std::map<std::string, Preset> p{
        {"g3", {{0.8, 0.4, 0.2}, {1, 1, 1}, {}, 4}},
        {"g4", {{0.8, 0.4, 0.2, 0.1}, {1, 1, 1, 1}, {}, 4}},
        {"mu2", {{0.8, 0.4, 0.2, 0.1}, {1, 1, 0, 1}, {}, 4}},
        {"perturbed", {{0.8, 0.4, 0.2}, {1, 1, 1}, {0.3, 0.3, 0.3}, 4}},
        {"divergent", {{1.25, 0.4}, {1, 1}, {}, 4}},
        {"scalar", {{0.5, 0.25}, {1, 1}, {}, 1}},
    };
    return p;
}

// splitmix64; portable across standard libraries.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : state_(seed) {}
    double next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0; // [-1, 1)
    }

private:
    std::uint64_t state_;
};

template <class T>
T random_scalar(SeededUniform& rng) {
    if constexpr (evec::is_complex_v<T>) {
        double re = rng.next();
        double im = rng.next();
        return T(re, im);
    } else {
        return T(rng.next());
    }
}

template <class T>
evec::CoordinateVector<T> random_vector(SeededUniform& rng, std::size_t dim) {
    evec::CoordinateVector<T> v(dim);
    for (std::size_t j = 0; j < dim; ++j) v[j] = random_scalar<T>(rng);
    if (v.is_zero()) v[0] = T(1);
    return v;
}

template <class T>
std::vector<T> to_scalars(const std::vector<double>& v) {
    std::vector<T> out;
    for (double x : v) out.push_back(T(evec::real_t<T>(x)));
    return out;
}

template <class T>
struct Model {
    evec::ModelSequence<T> model;
    std::string preset;
};

template <class T>
Model<T> build_model(const RunConfig& cfg) {
    Preset p;
    std::string name = cfg.preset;
    if (!cfg.preset.empty()) {
        auto it = presets().find(cfg.preset);
        if (it == presets().end()) throw evec::Error("unknown preset \"" + cfg.preset + "\"");
        p = it->second;
    } else {
        if (cfg.b.empty()) throw evec::Error("generate needs --preset or --b");
        p.b = cfg.b;
        p.alpha = cfg.alpha.empty() ? std::vector<double>(cfg.b.size(), 1.0) : cfg.alpha;
        p.c = cfg.c;
        p.dim = cfg.dim;
        name = "custom";
    }
    SeededUniform rng(cfg.seed);
    std::vector<evec::CoordinateVector<T>> w;
    evec::CoordinateVector<T> s;
    if (p.dim == 1) {
        for (std::size_t i = 0; i < p.b.size(); ++i) w.push_back(evec::CoordinateVector<T>{T(1)});
        s = evec::CoordinateVector<T>{T(1)};
    } else {
        for (std::size_t i = 0; i < p.b.size(); ++i) w.push_back(random_vector<T>(rng, p.dim));
        s = random_vector<T>(rng, p.dim);
    }
    auto b = to_scalars<T>(p.b);
    auto g = p.c.empty() ? evec::make_geometric_scale(std::move(w), std::move(b))
                         : evec::make_perturbed_geometric_scale(std::move(w), std::move(b), to_scalars<T>(p.c));
    return {evec::ModelSequence<T>(std::move(s), to_scalars<T>(p.alpha), std::move(g)), name};
}

evec::SequenceFormat output_format(const RunConfig& cfg, evec::SequenceFormat fallback) {
    if (cfg.format == "csv") return evec::SequenceFormat::Csv;
    if (cfg.format == "json") return evec::SequenceFormat::Json;
    if (!cfg.out.empty() && fs::path(cfg.out).has_extension()) return evec::format_from_path(cfg.out);
    return fallback;
}

void emit(const RunConfig& cfg, const std::string& content) {
    if (cfg.out.empty())
        std::cout << content;
    else
        evec::write_file_atomic(cfg.out, content);
}

template <class T>
evec::Weighting<T> load_weighting(const RunConfig& cfg, std::size_t dim) {
    if (cfg.weighting.empty()) return evec::Weighting<T>::ones(dim);
    auto w = evec::parse_weighting_json<T>(evec::read_file(cfg.weighting));
    if (w.dimension() != dim) throw evec::DimensionError("weighting dimension differs from data dimension");
    return w;
}

template <class T>
evec::ScaleFamily<T> load_scales(const RunConfig& cfg) {
    if (cfg.scales.empty()) throw evec::Error("--scales is required");
    return evec::parse_scale_json<T>(evec::read_file(cfg.scales));
}

template <class T>
evec::EngineOptions engine_options(const RunConfig& cfg) {
    auto o = evec::precision_options<T>();
    if (cfg.tol_singular) o.singular_tol = *cfg.tol_singular;
    return o;
}

// ---------------------------------------------------------------------------

template <class T>
int cmd_generate(const RunConfig& cfg) {
    auto [model, name] = build_model<T>(cfg);
    const fs::path dir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
    fs::create_directories(dir);
    const auto fmt = cfg.format == "csv" ? evec::SequenceFormat::Csv : evec::SequenceFormat::Json;

    evec::TabulatedSequence<T> seq;
    for (std::size_t m = 0; m < cfg.count; ++m) seq.vectors.push_back(model.eval(m));
    const auto seq_path = dir / (fmt == evec::SequenceFormat::Csv ? "sequence.csv" : "sequence.json");
    evec::save_sequence(seq_path, seq, fmt);
    evec::write_file_atomic(dir / "scales.json", evec::scale_to_json(model.scale()).dump(2) + "\n");
    evec::GroundTruth<T> truth{model.limit(), model.alpha(), name};
    evec::write_file_atomic(dir / "truth.json", evec::truth_to_json(truth).dump(2) + "\n");
    std::cout << "wrote " << seq_path.string() << ", " << (dir / "scales.json").string() << ", "
              << (dir / "truth.json").string() << "\n";
    return kExitOk;
}

template <class T>
int cmd_extrapolate(const RunConfig& cfg) {
    if (cfg.input.empty()) throw evec::Error("--input is required");
    auto seq = evec::load_sequence<T>(cfg.input);
    if (seq.size() == 0) throw evec::RangeError("input sequence is empty");
    auto x = seq.as_sequence();
    const std::size_t kmax = cfg.kmax.value_or(0);
    evec::ScaleFamily<T> g;
    if (kmax > 0 || !cfg.scales.empty()) g = load_scales<T>(cfg);
    auto w = load_weighting<T>(cfg, x.dimension());
    const std::size_t n0 = cfg.n0.value_or(0);
    const std::size_t n1 = cfg.n1.value_or(x.size() - 1);
    auto table = evec::fill_table(x, g, w, n0, n1, kmax, engine_options<T>(cfg), cfg.threads);
    const auto ok = table.count(evec::CellStatus::Ok);
    std::cerr << "cells: ok=" << ok << " singular=" << table.count(evec::CellStatus::Singular)
              << " out-of-data=" << table.count(evec::CellStatus::OutOfData) << "\n";
    if (ok == 0) {
        std::cerr << "error: no computable cells\n";
        return kExitInput;
    }
    emit(cfg, evec::format_table(table, output_format(cfg, evec::SequenceFormat::Csv)));
    return kExitOk;
}

template <class T>
int cmd_diagnose(const RunConfig& cfg) {
    auto g = load_scales<T>(cfg);
    auto w = load_weighting<T>(cfg, g.dimension());
    const std::size_t kmax = cfg.kmax.value_or(std::min<std::size_t>(3, g.count()));
    const std::size_t n0 = cfg.n0.value_or(0);
    std::size_t n1 = cfg.n1.value_or(40);
    if (g.size() < n1 + kmax + 2) {
        if (g.size() < kmax + 3) throw evec::RangeError("scale data too short for diagnostics");
        n1 = g.size() - kmax - 2;
    }
    auto report = evec::diagnose(g, w, n0, n1, kmax, evec::Window{n0, n1});
    emit(cfg, evec::diagnostics_to_json(report).dump(2) + "\n");
    return kExitOk;
}

template <class T>
int cmd_verify(const RunConfig& cfg) {
    evec::VerifyConfig vc;
    vc.k = cfg.k;
    const bool quad = !std::is_same_v<evec::real_t<T>, double>;
    vc.window = quad ? evec::Window{15, 25} : evec::Window{4, 12};
    if (cfg.n0) vc.window.lo = *cfg.n0;
    if (cfg.n1) vc.window.hi = *cfg.n1;
    if (cfg.tol_claim) vc.tol_asym = *cfg.tol_claim;
    if (cfg.tol_exact) vc.tol_exact = *cfg.tol_exact;
    vc.engine = engine_options<T>(cfg);

    std::optional<evec::VerificationInput<T>> input;
    std::optional<evec::Weighting<T>> w;
    if (!cfg.preset.empty() && cfg.input.empty()) {
        auto [model, name] = build_model<T>(cfg);
        w = load_weighting<T>(cfg, model.limit().size());
        input = evec::VerificationInput<T>{model.as_sequence(), model.limit(), model.alpha(), model.scale()};
    } else {
        if (cfg.input.empty()) throw evec::Error("--input (or --preset) is required");
        if (cfg.truth.empty()) throw evec::Error("verify needs ground truth: pass --truth with the limit s");
        auto seq = evec::load_sequence<T>(cfg.input);
        auto g = load_scales<T>(cfg);
        auto truth = evec::parse_truth_json<T>(evec::read_file(cfg.truth));
        if (truth.s.size() != seq.dimension()) throw evec::DimensionError("truth dimension differs from data");
        w = load_weighting<T>(cfg, seq.dimension());
        auto x = seq.as_sequence();
        if (truth.alpha && g.analytic() && truth.alpha->size() <= g.count()) {
            // Regenerate the model in the working precision and check it against the file.
            evec::ModelSequence<T> model(truth.s, *truth.alpha, g);
            using R = evec::real_t<T>;
            for (std::size_t m = 0; m < seq.size(); ++m) {
                auto d = evec::norm(model.eval(m) - seq.vectors[m]);
                if (d > R(1e-12) * (R(1) + evec::norm(seq.vectors[m])))
                    throw evec::Error("input row " + std::to_string(m) + " is inconsistent with --truth and --scales");
            }
            x = model.as_sequence(seq.size());
        }
        input = evec::VerificationInput<T>{x, truth.s, truth.alpha, g};
    }

    auto report = evec::verify(*input, *w, vc);
    for (const auto& r : report.records)
        std::cerr << (r.applicable ? (r.pass ? "PASS " : "FAIL ") : "SKIP ") << "claim " << r.claim << ": " << r.detail
                  << "\n";
    std::cerr << "verification " << (report.passed() ? "passed" : "FAILED") << "\n";
    emit(cfg, evec::report_to_json(report).dump(2) + "\n");
    return report.passed() ? kExitOk : kExitVerify;
}

template <class T>
int run(const std::string& name, const RunConfig& cfg) {
    if (name == "generate") return cmd_generate<T>(cfg);
    if (name == "extrapolate") return cmd_extrapolate<T>(cfg);
    if (name == "diagnose") return cmd_diagnose<T>(cfg);
    return cmd_verify<T>(cfg);
}

int dispatch(const std::string& name, const RunConfig& cfg) {
    const bool complex = cfg.field == "complex";
    if (cfg.precision == "quad") {
        if (complex) throw evec::Error("--precision quad supports the real field only");
        return run<evec::quad>(name, cfg);
    }
    return complex ? run<std::complex<double>>(name, cfg) : run<double>(name, cfg);
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--field", cfg.field, "Scalar field")->check(CLI::IsMember({"real", "complex"}));
    sub->add_option("--precision", cfg.precision, "Working precision")->check(CLI::IsMember({"double", "quad"}));
    sub->add_option("--out", cfg.out, "Output path (directory for generate; stdout when omitted)");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--weighting", cfg.weighting, "Weighting JSON {\"y\": [...]} (default: all ones)");
    sub->add_option("--tol-singular", cfg.tol_singular, "Relative pivot tolerance for singular systems (default 1e-13 in double)")
        ->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vector E-algorithm: extrapolation tables, diagnostics and convergence verification"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* gen = app.add_subcommand("generate", "Write a synthetic model sequence, its scale family and ground truth");
    add_common(gen, cfg);
    gen->add_option("--preset", cfg.preset, "g3 | g4 | mu2 | perturbed | divergent | scalar");
    gen->add_option("--b", cfg.b, "Nodes b_i (custom model)")->delimiter(',');
    gen->add_option("--alpha", cfg.alpha, "Coefficients alpha_i (custom model)")->delimiter(',');
    gen->add_option("--c", cfg.c, "Perturbation amplitudes c_i (custom model)")->delimiter(',');
    gen->add_option("--dim", cfg.dim, "Dimension (custom model)")->check(CLI::PositiveNumber);
    gen->add_option("--count", cfg.count, "Number of sequence vectors to write");
    gen->add_option("--seed", cfg.seed, "Seed for the directions w_i and the limit s");

    auto* ext = app.add_subcommand("extrapolate", "Fill the extrapolation table s_{n,k}");
    add_common(ext, cfg);
    ext->add_option("--input", cfg.input, "Sequence file (.csv or .json)")->required();
    ext->add_option("--scales", cfg.scales, "Scale family JSON");
    ext->add_option("--n0", cfg.n0, "First n");
    ext->add_option("--n1", cfg.n1, "Last n");
    ext->add_option("--kmax", cfg.kmax, "Largest k");
    ext->add_option("--threads", cfg.threads, "Worker threads for the cell fill")->check(CLI::PositiveNumber);

    auto* diag = app.add_subcommand("diagnose", "Report b/ghat estimates, eta ratios and psi-vs-Vandermonde gaps");
    add_common(diag, cfg);
    diag->add_option("--scales", cfg.scales, "Scale family JSON")->required();
    diag->add_option("--input", cfg.input, "Sequence file (unused; accepted for symmetry)");
    diag->add_option("--n0", cfg.n0, "First n");
    diag->add_option("--n1", cfg.n1, "Last n");
    diag->add_option("--kmax", cfg.kmax, "Largest k");

    auto* ver = app.add_subcommand("verify", "Check the convergence theory claims against ground truth");
    add_common(ver, cfg);
    ver->add_option("--input", cfg.input, "Sequence file");
    ver->add_option("--scales", cfg.scales, "Scale family JSON");
    ver->add_option("--truth", cfg.truth, "Ground-truth JSON with s (and alpha)");
    ver->add_option("--preset", cfg.preset, "Verify a built-in model without files");
    ver->add_option("--seed", cfg.seed, "Seed used with --preset");
    ver->add_option("--k", cfg.k, "Column k under test")->check(CLI::PositiveNumber);
    ver->add_option("--n0", cfg.n0, "Window start");
    ver->add_option("--n1", cfg.n1, "Window end");
    ver->add_option("--tol-claim", cfg.tol_claim, "Relative tolerance for asymptotic claims")
        ->check(CLI::NonNegativeNumber);
    ver->add_option("--tol-exact", cfg.tol_exact, "Tolerance for claims exact in theory")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return dispatch(name, cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
