// Command-line front end. Every subcommand is a pure function of its merged
// config (flags > --config file > defaults), which is what lets `report
// --replay` rerun a saved record and compare payloads.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "ncmatsaev/dilation_lab.hpp"
#include "ncmatsaev/io_json.hpp"
#include "ncmatsaev/poly_shift.hpp"

#ifndef NCMATSAEV_VERSION
#define NCMATSAEV_VERSION "0.0.0"
#endif

namespace {

using namespace ncm;
using io::json;

constexpr const char* out_dir_env = "NCMATSAEV_OUT";

enum Exit { ok = 0, usage = 2, certification = 3, resource = 4, accuracy = 5 };

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::certification:
    case ErrorKind::axiom:
        return certification;
    case ErrorKind::resource:
        return resource;
    case ErrorKind::accuracy:
        return accuracy;
    default:
        return usage;
    }
}

struct Outcome {
    json results = json::object();
    std::vector<std::string> lines;
    std::string csv;
    int code = ok;
};

using Runner = std::function<Outcome(const json&)>;

enum class Kind { integer, real, text, flag };

struct Param {
    std::string key;
    Kind kind;
    json fallback;
    std::string raw;
    bool on = false;
    CLI::Option* opt = nullptr;
};

class Command {
public:
    Command(CLI::App& parent, const std::string& name, const std::string& help, Runner run)
        : app_(parent.add_subcommand(name, help)), run_(std::move(run)) {
        app_->add_option("--config", config_path_, "JSON file with option values (flags take precedence)");
        app_->add_option("--out", out_dir_, std::string("output directory (default: $") + out_dir_env + ")");
        app_->add_flag("--json", print_json_, "print the run record as JSON instead of a summary");
        integer("seed", 0, "random seed");
    }

    Command& integer(const std::string& key, long long fallback, const std::string& help) {
        return add(key, Kind::integer, fallback, help);
    }
    Command& real(const std::string& key, double fallback, const std::string& help) {
        return add(key, Kind::real, fallback, help);
    }
    Command& text(const std::string& key, json fallback, const std::string& help) {
        return add(key, Kind::text, std::move(fallback), help);
    }
    Command& flag(const std::string& key, const std::string& help) { return add(key, Kind::flag, false, help); }
    Command& positional(const std::string& key, const std::string& help) {
        auto p = std::make_unique<Param>(Param{key, Kind::text, nullptr, {}, false, nullptr});
        p->opt = app_->add_option(key, p->raw, help);
        params_.push_back(std::move(p));
        return *this;
    }

    [[nodiscard]] CLI::App* app() const { return app_; }
    [[nodiscard]] const Runner& runner() const { return run_; }
    [[nodiscard]] bool print_json() const { return print_json_; }
    [[nodiscard]] std::string out_dir() const {
        if (!out_dir_.empty()) {
            return out_dir_;
        }
        const char* env = std::getenv(out_dir_env);
        return env != nullptr ? env : "";
    }

    /// defaults, then the config file, then explicit flags
    [[nodiscard]] json merged() const {
        json cfg = json::object();
        for (const auto& p : params_) {
            cfg[p->key] = p->fallback;
        }
        if (!config_path_.empty()) {
            const json file = io::read_json_file(config_path_);
            require(file.is_object(), ErrorKind::input, "config file must hold a JSON object");
            for (const auto& [key, value] : file.items()) {
                const Param* p = find(key);
                require(p != nullptr, ErrorKind::input, "config file: unknown key \"" + key + "\" for " + app_->get_name());
                cfg[key] = typed(*p, value);
            }
        }
        for (const auto& p : params_) {
            if (p->opt->count() == 0) {
                continue;
            }
            cfg[p->key] = p->kind == Kind::flag ? json(p->on) : parse_raw(*p);
        }
        return cfg;
    }

private:
    Command& add(const std::string& key, Kind kind, json fallback, const std::string& help) {
        auto p = std::make_unique<Param>(Param{key, kind, std::move(fallback), {}, false, nullptr});
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        p->opt = kind == Kind::flag ? app_->add_flag(flag, p->on, help) : app_->add_option(flag, p->raw, help);
        params_.push_back(std::move(p));
        return *this;
    }

    [[nodiscard]] const Param* find(const std::string& key) const {
        for (const auto& p : params_) {
            if (p->key == key) {
                return p.get();
            }
        }
        return nullptr;
    }

    static json parse_raw(const Param& p) {
        try {
            std::size_t used = 0;
            switch (p.kind) {
            case Kind::integer: {
                const long long v = std::stoll(p.raw, &used);
                require(used == p.raw.size(), ErrorKind::input, "");
                return v;
            }
            case Kind::real: {
                const double v = std::stod(p.raw, &used);
                require(used == p.raw.size(), ErrorKind::input, "");
                return v;
            }
            default:
                return p.raw;
            }
        } catch (const std::exception&) {
            fail(ErrorKind::input, "--" + p.key + ": cannot parse \"" + p.raw + "\"");
        }
    }

    static json typed(const Param& p, const json& v) {
        switch (p.kind) {
        case Kind::integer:
            require(v.is_number_integer(), ErrorKind::input, "config: \"" + p.key + "\" must be an integer");
            return v;
        case Kind::real:
            require(v.is_number(), ErrorKind::input, "config: \"" + p.key + "\" must be a number");
            return v.get<double>();
        case Kind::flag:
            require(v.is_boolean(), ErrorKind::input, "config: \"" + p.key + "\" must be true or false");
            return v;
        case Kind::text:
            if (v.is_string()) {
                return v;
            }
            // numbers and inline JSON objects are kept in their text form
            return v.dump();
        }
        return v;
    }

    CLI::App* app_;
    Runner run_;
    std::vector<std::unique_ptr<Param>> params_;
    std::string config_path_;
    std::string out_dir_;
    bool print_json_ = false;
};

// ---- config accessors

std::string text_of(const json& cfg, const char* key) {
    require(cfg.contains(key) && cfg[key].is_string() && !cfg[key].get<std::string>().empty(), ErrorKind::input,
            std::string("missing required option --") + key);
    return cfg[key].get<std::string>();
}

bool has(const json& cfg, const char* key) {
    return cfg.contains(key) && cfg[key].is_string() && !cfg[key].get<std::string>().empty();
}

long long int_of(const json& cfg, const char* key) { return cfg.at(key).get<long long>(); }
double real_of(const json& cfg, const char* key) { return cfg.at(key).get<double>(); }
std::uint64_t seed_of(const json& cfg) { return static_cast<std::uint64_t>(int_of(cfg, "seed")); }

double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    try {
        std::size_t used = 0;
        const double p = std::stod(s, &used);
        require(used == s.size(), ErrorKind::input, "");
        return p;
    } catch (const std::exception&) {
        fail(ErrorKind::input, "cannot parse exponent \"" + s + "\"");
    }
}

std::vector<double> number_list(const std::string& s, char sep = ',') {
    std::vector<double> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            require(used == item.size(), ErrorKind::input, "");
        } catch (const std::exception&) {
            fail(ErrorKind::input, "cannot parse number \"" + item + "\" in \"" + s + "\"");
        }
    }
    require(!out.empty(), ErrorKind::input, "empty number list");
    return out;
}

/// "1,0;0.5,2" -> columns (1,0) and (0.5,2)
RealMatrix vector_list(const std::string& s) {
    std::vector<std::vector<double>> rows;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ';')) {
        rows.push_back(number_list(item));
    }
    require(!rows.empty(), ErrorKind::input, "empty vector list");
    RealMatrix m(static_cast<Eigen::Index>(rows[0].size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t c = 0; c < rows.size(); ++c) {
        require(rows[c].size() == rows[0].size(), ErrorKind::input, "all vectors need the same length");
        for (std::size_t r = 0; r < rows[c].size(); ++r) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[c][r];
        }
    }
    return m;
}

/// inline JSON when it starts with '{', a file path otherwise
json json_arg(const std::string& s) {
    if (!s.empty() && (s.front() == '{' || s.front() == '[')) {
        try {
            return json::parse(s);
        } catch (const json::exception& e) {
            fail(ErrorKind::input, std::string("inline JSON: ") + e.what());
        }
    }
    return io::read_json_file(s);
}

std::string fmt(double v, int digits = 12) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

PolyNormConfig poly_config(const json& cfg) {
    PolyNormConfig c;
    c.engine.restarts = static_cast<int>(int_of(cfg, "restarts"));
    c.engine.max_iters = static_cast<int>(int_of(cfg, "max_iters"));
    c.engine.tol = real_of(cfg, "tol");
    c.engine.seed = seed_of(cfg);
    c.truncation = truncation_from_string(text_of(cfg, "truncation"));
    return c;
}

void add_engine_options(Command& c) {
    c.integer("restarts", 32, "random restarts of the power iteration")
        .integer("max_iters", 500, "iterations per restart")
        .real("tol", 1e-10, "relative stopping tolerance")
        .text("truncation", "periodic", "periodic or finite_section");
}

// ---- subcommands

Outcome run_norm(const json& cfg) {
    const Polynomial poly = Polynomial::parse(text_of(cfg, "poly"));
    const PExponent p(parse_p(text_of(cfg, "p")));
    std::vector<Eigen::Index> ladder;
    for (double n : number_list(text_of(cfg, "n"))) {
        require(n >= 1 && n == std::floor(n), ErrorKind::input, "--n takes positive integers");
        ladder.push_back(static_cast<Eigen::Index>(n));
    }
    const auto block = static_cast<Eigen::Index>(int_of(cfg, "block"));
    require(block >= 0, ErrorKind::input, "--block must be >= 0 (0 means m = n)");
    const auto pc = poly_config(cfg);
    NormProfile profile;
    if (block > 0) {
        profile = norm_profile(poly, p, ladder, block, pc);
    } else {
        profile.poly = poly;
        profile.p = p.value();
        profile.truncation = pc.truncation;
        for (Eigen::Index n : ladder) {
            const auto single = norm_profile(poly, p, {n}, n, pc);
            profile.entries.push_back(single.entries.front());
        }
    }
    Outcome out;
    out.results = io::to_json(profile);
    out.results["block_mode"] = block == 0 ? "m = n" : "fixed";
    out.csv = io::profile_csv(profile);
    for (const auto& e : profile.entries) {
        out.lines.push_back("n=" + std::to_string(e.n) + " value=" + fmt(e.value) +
                            (e.converged ? "" : " (not converged)"));
    }
    return out;
}

Outcome run_sigma(const json& cfg) {
    const Polynomial poly = Polynomial::parse(text_of(cfg, "poly"));
    const PExponent p(parse_p(text_of(cfg, "p")));
    const auto n = static_cast<Eigen::Index>(int_of(cfg, "n"));
    require(n >= 1, ErrorKind::input, "--n must be positive");
    const auto pc = poly_config(cfg);
    Outcome out;
    auto record = [&](const PolyNormEstimate& e) {
        json r = io::estimate_record(e.estimate, p, pc.engine.restarts, pc.engine.seed);
        r["n"] = e.n;
        r["twist"] = e.twist;
        r["exact"] = e.exact;
        return r;
    };
    if (cfg.at("chain").get<bool>()) {
        const auto chain = norm_chain(poly, p, n, pc);
        out.results = json{{"scalar", record(chain.scalar)}, {"sigma", record(chain.sigma)},
                           {"vector", record(chain.vector)}};
        out.lines = {"scalar " + fmt(chain.scalar.value()), "sigma  " + fmt(chain.sigma.value()),
                     "vector " + fmt(chain.vector.value())};
    } else {
        const auto s = sigma_norm(poly, p, n, pc);
        out.results = json{{"sigma", record(s)}};
        out.lines = {"sigma " + fmt(s.value())};
    }
    return out;
}

Outcome run_dilate(const json& cfg) {
    const std::string kind = text_of(cfg, "kind");
    const json input = json_arg(text_of(cfg, "input"));
    const int window = static_cast<int>(int_of(cfg, "window"));
    int kmax = static_cast<int>(int_of(cfg, "kmax"));
    if (kmax < 0) {
        kmax = window;
    }
    DilationConfig dc;
    dc.max_ambient = static_cast<Eigen::Index>(int_of(cfg, "max_ambient"));
    dc.seed = seed_of(cfg);
    Outcome out;
    DilationReport report;
    DilationBundle bundle;
    if (kind == "schur") {
        const RealMatrix a = io::real_matrix_from_json(input.contains("matrix") ? input.at("matrix") : input);
        bundle = dilate_schur(a, window, dc);
        report = verify_dilation(bundle, schur_multiplier_map(a), kmax, matrix_units(a.rows()));
    } else {
        require(kind == "fourier", ErrorKind::input, "dilate takes schur or fourier");
        require(input.contains("group") && input.contains("symbol"), ErrorKind::input,
                "fourier input needs \"group\" and \"symbol\"");
        const FiniteGroup g = io::group_from_json(input.at("group"));
        const auto values = input.at("symbol").get<std::vector<double>>();
        const RealVector t = Eigen::Map<const RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));
        bundle = dilate_fourier_finite(g, t, window, dc);
        report = verify_dilation(bundle, fourier_multiplier_map(g, t), kmax, group_basis(g));
    }
    out.results = io::bundle_report(bundle, report);
    out.lines.push_back(kind + " dilation: ambient " + std::to_string(bundle.ambient_dim) + ", window " +
                        std::to_string(window) + ", rank " + std::to_string(bundle.rank));
    for (std::size_t k = 0; k < report.residual_by_k.size(); ++k) {
        out.lines.push_back("k=" + std::to_string(k) + " residual " + fmt(report.residual_by_k[k], 3));
    }
    if (!(report.max_residual < 1e-8)) {
        out.lines.push_back("max residual above 1e-8");
        out.code = accuracy;
    }
    return out;
}

RealMatrix vectors_arg(const json& cfg) {
    if (has(cfg, "vectors")) {
        return vector_list(text_of(cfg, "vectors"));
    }
    // rows of the stored matrix are the vectors
    return io::real_matrix_from_json(json_arg(text_of(cfg, "input"))).transpose();
}

Outcome run_wick(const json& cfg) {
    const RealMatrix v = vectors_arg(cfg);
    std::vector<RealVector> vectors;
    for (Eigen::Index i = 0; i < v.cols(); ++i) {
        vectors.emplace_back(v.col(i));
    }
    require(vectors.size() <= 16, ErrorKind::resource, "wick: at most 16 vectors");
    Outcome out;
    const double trace = wick_trace(vectors);
    out.results["vectors"] = static_cast<int>(vectors.size());
    out.results["dimension"] = v.rows();
    out.results["wick_trace"] = trace;
    if (vectors.size() % 2 == 0 && vectors.size() <= 12) {
        const auto partitions = enumerate_pair_partitions(static_cast<int>(vectors.size() / 2));
        out.results["pair_partitions"] = partitions.size();
        json listed = json::array();
        for (const auto& pp : partitions) {
            listed.push_back(io::to_json(pp));
        }
        out.results["partitions"] = std::move(listed);
    }
    if (v.rows() <= FockSpace::max_generators) {
        const double residual = wick_vs_matrix_check(FockSpace(static_cast<int>(v.rows())), vectors);
        out.results["matrix_residual"] = residual;
        out.lines.push_back("vacuum check residual " + fmt(residual, 3));
    }
    out.lines.insert(out.lines.begin(), "wick trace " + fmt(trace));
    return out;
}

Outcome run_qgram(const json& cfg) {
    const double q = real_of(cfg, "q");
    std::vector<std::vector<ComplexVector>> family;
    const std::string spec = text_of(cfg, "family");
    std::stringstream in(spec);
    std::string tensor;
    while (std::getline(in, tensor, '|')) {
        const RealMatrix factors = vector_list(tensor);
        std::vector<ComplexVector> t;
        for (Eigen::Index i = 0; i < factors.cols(); ++i) {
            t.emplace_back(factors.col(i).cast<cplx>());
        }
        family.push_back(std::move(t));
    }
    const ComplexMatrix gram = q_gram(family, q);
    Outcome out;
    out.results = json{{"q", q}, {"gram", io::to_json(gram)}, {"psd", is_psd(gram)}};
    std::ostringstream os;
    os << gram.real();
    out.lines = {"q-Gram matrix (real part):", os.str(), std::string("positive semidefinite: ") +
                                                              (is_psd(gram) ? "true" : "false")};
    return out;
}

Outcome run_schoenberg(const json& cfg) {
    RealMatrix a;
    if (has(cfg, "alphas")) {
        a = SemigroupSpec{vector_list(text_of(cfg, "alphas"))}.squared_distances();
    } else {
        a = io::real_matrix_from_json(json_arg(text_of(cfg, "input")));
    }
    const auto res = schoenberg_check(a, number_list(text_of(cfg, "t")));
    Outcome out;
    out.results = io::to_json(res);
    out.results["matrix"] = io::to_json(a);
    out.lines.push_back(std::string("CND: ") + (res.cnd ? "true" : "false"));
    if (res.offending_t) {
        out.lines.push_back("exp(-tA) fails to be PSD at t=" + fmt(*res.offending_t) + " (eigenvalue " +
                            fmt(*res.offending_eigenvalue) + ")");
    }
    if (!res.spot_checks_agree) {
        out.lines.push_back("warning: sampled exponentials disagree with the algebraic verdict");
    }
    return out;
}

Outcome run_semigroup(const json& cfg) {
    const SemigroupSpec spec = has(cfg, "alphas") ? SemigroupSpec{vector_list(text_of(cfg, "alphas"))}
                                                  : io::semigroup_from_json(json_arg(text_of(cfg, "input")));
    const double t = real_of(cfg, "t");
    const auto samples = int_of(cfg, "samples");
    const auto seed = seed_of(cfg);
    ComplexMatrix x;
    if (has(cfg, "x")) {
        x = io::complex_matrix_from_json(json_arg(text_of(cfg, "x")));
    } else {
        std::mt19937_64 rng(seed + 0x5eed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        x.resize(spec.size(), spec.size());
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            const double re = u(rng);
            const double im = u(rng);
            x(k) = cplx(re, im);
        }
    }
    const auto g = gaussian_semigroup_dilate(spec, t, x, static_cast<long>(samples), seed);
    Outcome out;
    out.results["gaussian"] = json{{"t", t},
                                   {"samples", samples},
                                   {"residual", g.residual},
                                   {"bound_3sigma", 3.0 * x.norm() / std::sqrt(static_cast<double>(samples))},
                                   {"mc_estimate", io::to_json(g.mc_estimate)},
                                   {"exact", io::to_json(g.exact)}};
    out.lines.push_back("gaussian dilation residual " + fmt(g.residual, 4) + " with " + std::to_string(samples) +
                        " samples");
    if (has(cfg, "kernel")) {
        const KernelFunction b = io::kernel_from_json(json_arg(text_of(cfg, "kernel")));
        QuadratureConfig qc;
        qc.tol = real_of(cfg, "tol");
        qc.p = parse_p(text_of(cfg, "p"));
        const auto conv = has(cfg, "generator")
                              ? semigroup_convolution(b, io::complex_matrix_from_json(io::read_json_file(
                                                             text_of(cfg, "generator"))),
                                                      qc)
                              : semigroup_convolution(b, spec, qc);
        out.results["convolution"] = json{{"kernel", io::to_json(b)},
                                          {"source", has(cfg, "generator") ? "generator" : "schur"},
                                          {"value", io::to_json(conv.value)},
                                          {"b_l1", conv.b_l1},
                                          {"norm_estimate", conv.norm_estimate},
                                          {"panels", conv.panels}};
        out.lines.push_back("convolution norm " + fmt(conv.norm_estimate) + " vs |b|_1 " + fmt(conv.b_l1));
    }
    return out;
}

Outcome run_discretize(const json& cfg) {
    const KernelFunction b = io::kernel_from_json(json_arg(text_of(cfg, "kernel")));
    const int n = static_cast<int>(int_of(cfg, "n"));
    const auto a = discretize_kernel(b, n, static_cast<int>(int_of(cfg, "order")));
    Outcome out;
    out.results = json{{"kernel", io::to_json(b)}, {"n", n}, {"a", a}, {"b_l1", b.l1_norm()}};
    std::ostringstream csv;
    csv.precision(17);
    csv << "k,a\n";
    for (std::size_t k = 0; k < a.size(); ++k) {
        csv << k << ',' << a[k] << '\n';
        out.lines.push_back("a[" + std::to_string(k) + "] = " + fmt(a[k]));
    }
    out.csv = csv.str();
    return out;
}

Outcome run_search(const json& cfg) {
    const PExponent p(parse_p(text_of(cfg, "p")));
    GapSearchConfig gc;
    gc.budget = static_cast<int>(int_of(cfg, "budget"));
    gc.n = static_cast<Eigen::Index>(int_of(cfg, "n"));
    gc.block_dim = static_cast<Eigen::Index>(int_of(cfg, "block"));
    gc.keep = static_cast<int>(int_of(cfg, "keep"));
    gc.perturbation = real_of(cfg, "perturbation");
    gc.seed = seed_of(cfg);
    gc.norm.engine.restarts = static_cast<int>(int_of(cfg, "restarts"));
    gc.norm.engine.seed = gc.seed;
    const auto res = gap_search(p, static_cast<int>(int_of(cfg, "degree")), gc);
    Outcome out;
    out.results = io::to_json(res);
    out.lines.push_back(std::string("NOTE: ") + GapSearchResult::caveat);
    out.lines.push_back("rank  gap           vector        scalar        certified  poly");
    int rank = 1;
    for (const auto& c : res.ranked) {
        std::ostringstream row;
        row.precision(8);
        row << std::left << std::setw(6) << rank++ << std::setw(14) << c.gap << std::setw(14) << c.vector_value
            << std::setw(14) << c.scalar_value << std::setw(11) << (c.certified ? "yes" : "no") << c.poly.to_string();
        out.lines.push_back(row.str());
    }
    return out;
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json run_record(const std::string& command, const json& cfg, const Outcome& out) {
    return json{{"command", command},      {"config", cfg},
                {"seed", cfg.at("seed")}, {"timestamp", timestamp()},
                {"version", NCMATSAEV_VERSION}, {"exit_code", out.code},
                {"results", out.results}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical workbench for noncommutative Matsaev-type inequalities"};
    app.require_subcommand(1);
    app.set_version_flag("--version", NCMATSAEV_VERSION);

    std::map<std::string, std::unique_ptr<Command>> commands;
    auto make = [&](const std::string& name, const std::string& help, Runner run) -> Command& {
        commands[name] = std::make_unique<Command>(app, name, help, std::move(run));
        return *commands[name];
    };

    for (const char* name : {"norm", "cbnorm"}) {
        const bool cb = std::string(name) == "cbnorm";
        auto& c = make(name,
                       cb ? "truncated ||P(S) (x) Id_{S^p_m}||; --block 0 takes m = n"
                          : "truncated ||P(S)|| on l^p (or its S^p_m amplification with --block)",
                       run_norm);
        c.text("poly", nullptr, "coefficients low degree first, e.g. 1,-0.5+2i")
            .text("p", "2", "exponent in [1, inf]")
            .text("n", "64", "truncation sizes, comma separated")
            .integer("block", cb ? 0 : 1, "Schatten block size m");
        add_engine_options(c);
    }
    {
        auto& c = make("sigma", "truncated ||P(sigma)|| on S^p_n; --chain adds the scalar and m = n norms", run_sigma);
        c.text("poly", nullptr, "coefficients low degree first").text("p", "2", "exponent").integer("n", 16, "size");
        c.flag("chain", "estimate poly <= sigma <= vector together");
        add_engine_options(c);
    }
    make("dilate", "build and verify a Schur (unital CP) or Fourier (finite group) dilation", run_dilate)
        .positional("kind", "schur or fourier")
        .text("input", nullptr, "matrix JSON (schur) or {\"group\", \"symbol\"} JSON (fourier)")
        .integer("window", 3, "tensor window K")
        .integer("kmax", -1, "largest power checked (default K)")
        .integer("max_ambient", 4096, "cap on the ambient dimension");
    make("wick", "vacuum trace of a product of fields by the Wick formula", run_wick)
        .text("vectors", nullptr, "vectors separated by ';', entries by ','")
        .text("input", nullptr, "matrix JSON whose rows are the vectors");
    make("qgram", "Gram matrix of simple tensors in the q-Fock space", run_qgram)
        .text("family", nullptr, "tensors separated by '|', factors by ';', entries by ','")
        .real("q", 0.0, "deformation in [-1, 1)");
    make("schoenberg", "conditionally negative definite test with exponential spot checks", run_schoenberg)
        .text("input", nullptr, "symmetric zero-diagonal matrix JSON")
        .text("alphas", nullptr, "points separated by ';' (builds the squared-distance matrix)")
        .text("t", "0.05,0.1,0.5,1,2,5", "sample times");
    make("semigroup", "Gaussian dilation of a Schur semigroup, optionally int b(t) T_t dt", run_semigroup)
        .text("alphas", nullptr, "points separated by ';'")
        .text("input", nullptr, "semigroup JSON {\"alphas\": [[...]]}")
        .real("t", 1.0, "time")
        .integer("samples", 100000, "Monte-Carlo samples")
        .text("x", nullptr, "matrix JSON to transport (default: seeded random)")
        .text("kernel", nullptr, "kernel JSON (inline or file) for the convolution")
        .text("generator", nullptr, "matrix JSON L; convolve exp(tL) instead of the Schur semigroup")
        .text("p", "2", "exponent of the reported norm")
        .real("tol", 1e-9, "quadrature tolerance");
    make("discretize", "sequence a_{n,k} of a kernel", run_discretize)
        .text("kernel", nullptr, "kernel JSON (inline or file)")
        .integer("n", 1, "scale n")
        .integer("order", 16, "Gauss-Legendre order");
    make("search", "heuristic search for a scalar vs Schatten-valued norm gap", run_search)
        .text("p", "4", "exponent (not 2)")
        .integer("degree", 4, "maximal degree")
        .integer("budget", 40, "candidate evaluations")
        .integer("n", 12, "truncation size")
        .integer("block", 2, "Schatten block size")
        .integer("keep", 8, "reported candidates")
        .real("perturbation", 0.15, "perturbation scale")
        .integer("restarts", 8, "engine restarts per evaluation");

    std::string record_path;
    bool replay = false;
    auto* report = app.add_subcommand("report", "summarize a saved run record, or replay it and compare");
    report->add_option("record", record_path, "run record JSON")->required();
    report->add_flag("--replay", replay, "rerun the recorded command and config and compare the results");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (report->parsed()) {
            const json record = io::read_json_file(record_path);
            require(record.contains("command") && record.contains("config") && record.contains("results"),
                    ErrorKind::input, "not a run record: " + record_path);
            const auto command = record["command"].get<std::string>();
            std::cout << "command   " << command << "\nversion   " << record.value("version", "?")
                      << "\ntimestamp " << record.value("timestamp", "?") << "\nseed      " << record["seed"]
                      << "\nconfig    " << record["config"].dump() << '\n';
            if (!replay) {
                std::cout << record["results"].dump(2) << '\n';
                return ok;
            }
            const auto it = commands.find(command);
            require(it != commands.end(), ErrorKind::input, "unknown command in record: " + command);
            const Outcome again = it->second->runner()(record["config"]);
            const bool same = again.results.dump() == record["results"].dump();
            std::cout << "replay    " << (same ? "identical" : "DIFFERENT") << '\n';
            return same ? ok : accuracy;
        }
        for (const auto& [name, command] : commands) {
            if (!command->app()->parsed()) {
                continue;
            }
            const json cfg = command->merged();
            const Outcome out = command->runner()(cfg);
            const json record = run_record(name, cfg, out);
            const std::string dir = command->out_dir();
            if (!dir.empty()) {
                std::filesystem::create_directories(dir);
                io::write_text_file(dir + "/" + name + ".json", record.dump(2) + "\n");
                if (!out.csv.empty()) {
                    io::write_text_file(dir + "/" + name + ".csv", out.csv);
                }
            }
            if (command->print_json()) {
                std::cout << record.dump(2) << '\n';
            } else {
                for (const auto& line : out.lines) {
                    std::cout << line << '\n';
                }
            }
            return out.code;
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error (resource): " << e.what() << '\n';
        return resource;
    } catch (const json::exception& e) {
        std::cerr << "error (input): " << e.what() << '\n';
        return usage;
    }
    return usage;
}
