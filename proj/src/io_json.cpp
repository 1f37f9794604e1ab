#include "ncmatsaev/io_json.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ncm::io {

namespace {

const json& field(const json& j, const char* key, const char* what) {
    require(j.is_object() && j.contains(key), ErrorKind::input, std::string(what) + ": missing \"" + key + "\"");
    return j.at(key);
}

double number(const json& j, const char* what) {
    require(j.is_number(), ErrorKind::input, std::string(what) + ": expected a number");
    return j.get<double>();
}

cplx entry(const json& j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(), ErrorKind::input,
            "matrix entry must be [re, im] or a number");
    return {j[0].get<double>(), j[1].get<double>()};
}


} // namespace

json to_json(const ComplexMatrix& m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            data.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json to_json(const RealMatrix& m) { return to_json(ComplexMatrix(m.cast<cplx>())); }

ComplexMatrix complex_matrix_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(number(field(j, "rows", "matrix"), "rows"));
    const auto cols = static_cast<Eigen::Index>(number(field(j, "cols", "matrix"), "cols"));
    const json& data = field(j, "data", "matrix");
    require(rows >= 0 && cols >= 0 && data.is_array() && static_cast<Eigen::Index>(data.size()) == rows * cols,
            ErrorKind::input, "matrix: data must hold rows * cols entries");
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = entry(data[static_cast<std::size_t>(r * cols + c)]);
        }
    }
    return m;
}

RealMatrix real_matrix_from_json(const json& j) {
    const ComplexMatrix m = complex_matrix_from_json(j);
    require(m.size() == 0 || m.imag().cwiseAbs().maxCoeff() <= 1e-14, ErrorKind::input,
            "matrix: a real matrix was expected");
    return m.real();
}

json to_json(const BlockVector& x) {
    json blocks = json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        blocks.push_back(to_json(x.block(i)));
    }
    return json{{"blocks", x.size()}, {"block_dim", x.block_dim()}, {"data", std::move(blocks)}};
}

BlockVector block_vector_from_json(const json& j) {
    const json& data = field(j, "data", "block vector");
    require(data.is_array() && !data.empty(), ErrorKind::input, "block vector: data must be a nonempty array");
    std::vector<ComplexMatrix> blocks;
    for (const auto& b : data) {
        blocks.push_back(complex_matrix_from_json(b));
    }
    return BlockVector::from_blocks(blocks);
}

json p_to_json(double p) {
    if (std::isinf(p)) {
        return "inf";
    }
    return p;
}

double p_from_json(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        require(s == "inf" || s == "infinity", ErrorKind::invalid_exponent, "exponent must be a number or \"inf\"");
        return std::numeric_limits<double>::infinity();
    }
    return number(j, "p");
}

json estimate_record(const PNormEstimate& e, const PExponent& p, int restarts, std::uint64_t seed) {
    return json{{"p", p_to_json(p.value())},     {"value", e.value},
                {"converged", e.converged},      {"restarts", restarts},
                {"restarts_used", e.restarts_used}, {"iterations", e.iterations},
                {"witness", to_json(e.witness)}, {"seed", seed}};
}

json to_json(const NormProfile& profile) {
    json entries = json::array();
    for (const auto& e : profile.entries) {
        entries.push_back(json{{"n", e.n},
                               {"value", e.value},
                               {"converged", e.converged},
                               {"certified", e.certified},
                               {"twist", e.twist}});
    }
    return json{{"poly", profile.poly.to_string()},
                {"p", p_to_json(profile.p)},
                {"block_dim", profile.block_dim},
                {"truncation", to_string(profile.truncation)},
                {"entries", std::move(entries)}};
}

std::string profile_csv(const NormProfile& profile) {
    std::ostringstream out;
    out.precision(17);
    out << "n,value,converged\n";
    for (const auto& e : profile.entries) {
        out << e.n << ',' << e.value << ',' << (e.converged ? "true" : "false") << '\n';
    }
    return out.str();
}

FiniteGroup group_from_json(const json& j) {
    const auto kind = field(j, "kind", "group").get<std::string>();
    if (kind == "cyclic" || kind == "dihedral") {
        const auto n = static_cast<int>(number(field(j, "n", "group"), "n"));
        require(n >= 1 && n <= 4096, ErrorKind::input, "group: n must be in 1..4096");
        return kind == "cyclic" ? cyclic_group(n) : dihedral_group(n);
    }
    require(kind == "table", ErrorKind::input, "group: kind must be cyclic, dihedral or table");
    return FiniteGroup(field(j, "table", "group").get<std::vector<std::vector<int>>>());
}

json to_json(const FiniteGroup& g) {
    std::istringstream name(g.name());
    std::string kind;
    int n = 0;
    if (name >> kind >> n && (kind == "cyclic" || kind == "dihedral")) {
        return json{{"kind", kind}, {"n", n}};
    }
    return json{{"kind", "table"}, {"table", g.table()}};
}

SemigroupSpec semigroup_from_json(const json& j) {
    const json& alphas = field(j, "alphas", "semigroup");
    require(alphas.is_array() && !alphas.empty() && alphas[0].is_array() && !alphas[0].empty(), ErrorKind::input,
            "semigroup: alphas must be a nonempty list of nonempty vectors");
    const auto n = static_cast<Eigen::Index>(alphas.size());
    const auto r = static_cast<Eigen::Index>(alphas[0].size());
    RealMatrix a(r, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& v = alphas[static_cast<std::size_t>(i)];
        require(v.is_array() && static_cast<Eigen::Index>(v.size()) == r, ErrorKind::input,
                "semigroup: all alpha vectors need the same length");
        for (Eigen::Index k = 0; k < r; ++k) {
            a(k, i) = number(v[static_cast<std::size_t>(k)], "alpha entry");
        }
    }
    return SemigroupSpec{a};
}

json to_json(const SemigroupSpec& s) {
    json alphas = json::array();
    for (Eigen::Index i = 0; i < s.alphas.cols(); ++i) {
        json v = json::array();
        for (Eigen::Index k = 0; k < s.alphas.rows(); ++k) {
            v.push_back(s.alphas(k, i));
        }
        alphas.push_back(std::move(v));
    }
    return json{{"alphas", std::move(alphas)}};
}

KernelFunction kernel_from_json(const json& j) {
    const auto kind = field(j, "kind", "kernel").get<std::string>();
    const double scale = j.contains("scale") ? number(j.at("scale"), "scale") : 1.0;
    auto end_of = [&](double fallback) {
        if (!j.contains("end")) {
            return fallback;
        }
        const json& e = j.at("end");
        if (e.is_string()) {
            require(e.get<std::string>() == "inf", ErrorKind::input, "kernel: end must be a number or \"inf\"");
            return std::numeric_limits<double>::infinity();
        }
        return number(e, "end");
    };
    if (kind == "indicator") {
        return KernelFunction::indicator(number(field(j, "left", "kernel"), "left"),
                                         number(field(j, "right", "kernel"), "right"), scale);
    }
    if (kind == "triangle") {
        return KernelFunction::triangle(number(field(j, "center", "kernel"), "center"),
                                        j.contains("half_width") ? number(j.at("half_width"), "half_width") : 1.0,
                                        scale);
    }
    if (kind == "exp") {
        return KernelFunction::exponential(j.contains("rate") ? number(j.at("rate"), "rate") : 1.0,
                                           end_of(std::numeric_limits<double>::infinity()), scale);
    }
    require(kind == "samples", ErrorKind::input, "kernel: kind must be samples, indicator, triangle or exp");
    auto k = KernelFunction::sampled(field(j, "values", "kernel").get<std::vector<double>>(),
                                     number(field(j, "end", "kernel"), "end"));
    k.scale = scale;
    return k;
}

json to_json(const KernelFunction& k) {
    json out{{"kind", to_string(k.kind)}};
    switch (k.kind) {
    case KernelKind::indicator:
        out["left"] = k.a;
        out["right"] = k.b;
        break;
    case KernelKind::triangle:
        out["center"] = k.a;
        out["half_width"] = k.b;
        break;
    case KernelKind::exp:
        out["rate"] = k.a;
        out["end"] = std::isinf(k.support_end) ? json("inf") : json(k.support_end);
        break;
    case KernelKind::samples:
        out["values"] = k.values;
        out["end"] = k.support_end;
        break;
    case KernelKind::custom:
        out["end"] = k.support_end;
        break;
    }
    out["scale"] = k.scale;
    return out;
}

json to_json(const PairPartition& v) {
    json pairs = json::array();
    for (const auto& [a, b] : v.pairs) {
        pairs.push_back(json::array({a, b}));
    }
    return json{{"pairs", std::move(pairs)}, {"crossings", v.crossings}};
}

json to_json(const BundleChecks& c) {
    return json{{"homomorphism", c.homomorphism}, {"adjoint", c.adjoint},   {"unit", c.unit},
                {"unitarity", c.unitarity},       {"section", c.section},   {"trace", c.trace},
                {"covariance", c.covariance}};
}

json bundle_report(const DilationBundle& b, const DilationReport& r) {
    json table = json::array();
    for (std::size_t k = 0; k < r.residual_by_k.size(); ++k) {
        table.push_back(json{{"k", k}, {"residual", r.residual_by_k[k]}});
    }
    return json{{"kind", b.kind},
                {"input_dim", b.input_dim},
                {"ambient_dim", b.ambient_dim},
                {"window", b.window},
                {"rank", b.rank},
                {"checks", to_json(b.checks)},
                {"k_max", r.k_max},
                {"test_elements", r.test_elements},
                {"residuals", std::move(table)},
                {"max_residual", r.max_residual}};
}

json to_json(const SchoenbergResult& r) {
    json out{{"cnd", r.cnd}, {"min_eigenvalue", r.min_eigenvalue}, {"spot_checks_agree", r.spot_checks_agree}};
    if (r.offending_t) {
        out["offending_t"] = *r.offending_t;
        out["offending_eigenvalue"] = *r.offending_eigenvalue;
    }
    if (r.alphas) {
        out["alphas"] = to_json(SemigroupSpec{*r.alphas})["alphas"];
    }
    return out;
}

json to_json(const GapSearchResult& r) {
    json ranked = json::array();
    for (const auto& c : r.ranked) {
        ranked.push_back(json{{"poly", c.poly.to_string()},
                              {"scalar_value", c.scalar_value},
                              {"vector_value", c.vector_value},
                              {"gap", c.gap},
                              {"twist", c.twist},
                              {"certified", c.certified},
                              {"witness", to_json(c.witness)}});
    }
    return json{{"banner", GapSearchResult::caveat},
                {"p", p_to_json(r.p)},
                {"degree", r.degree},
                {"evaluated", r.evaluated},
                {"ranked", std::move(ranked)}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::input, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorKind::input, path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    require(out.good(), ErrorKind::resource, "cannot write " + path);
    out << text;
}

} // namespace ncm::io
