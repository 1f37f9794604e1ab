#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ncmatsaev/dilation_lab.hpp"
#include "ncmatsaev/poly_shift.hpp"

namespace py = pybind11;
using namespace ncm;

namespace {

PolyNormConfig poly_config(int restarts, int max_iters, double tol, std::uint64_t seed, const std::string& truncation) {
    PolyNormConfig c;
    c.engine.restarts = restarts;
    c.engine.max_iters = max_iters;
    c.engine.tol = tol;
    c.engine.seed = seed;
    c.truncation = truncation_from_string(truncation);
    return c;
}

py::dict estimate_dict(const PolyNormEstimate& e) {
    py::dict d;
    d["value"] = e.value();
    d["n"] = e.n;
    d["block_dim"] = e.block_dim;
    d["twist"] = e.twist;
    d["exact"] = e.exact;
    d["converged"] = e.estimate.converged;
    d["iterations"] = e.estimate.iterations;
    d["witness"] = e.estimate.witness.stacked();
    return d;
}

std::vector<RealVector> columns(const RealMatrix& m) {
    std::vector<RealVector> out;
    for (Eigen::Index i = 0; i < m.cols(); ++i) {
        out.emplace_back(m.col(i));
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Numerical workbench for noncommutative Matsaev-type inequalities";

    static py::exception<Error> base(m, "NcmError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::object err = py::reinterpret_borrow<py::object>(base.ptr())(e.what());
            err.attr("kind") = to_string(e.kind());
            PyErr_SetObject(base.ptr(), err.ptr());
        }
    });

    m.def("schatten_norm", [](const ComplexMatrix& a, double p) { return schatten_norm(a, PExponent(p)); },
          py::arg("a"), py::arg("p"));
    m.def("singular_values", &singular_value_list, py::arg("a"));
    m.def(
        "matrix_pnorm",
        [](const ComplexMatrix& t, double p, Eigen::Index block_dim, int restarts, std::uint64_t seed) {
            PNormConfig c;
            c.restarts = restarts;
            c.seed = seed;
            const auto e = estimate_pnorm(BlockOperator(t, block_dim), PExponent(p), c);
            py::dict d;
            d["value"] = e.value;
            d["converged"] = e.converged;
            d["iterations"] = e.iterations;
            return d;
        },
        py::arg("t"), py::arg("p"), py::arg("block_dim") = 1, py::arg("restarts") = 32, py::arg("seed") = 0);

    m.def(
        "poly_norm",
        [](const std::string& poly, double p, Eigen::Index n, Eigen::Index block, int restarts, int max_iters,
           double tol, std::uint64_t seed, const std::string& truncation) {
            const auto cfg = poly_config(restarts, max_iters, tol, seed, truncation);
            const auto P = Polynomial::parse(poly);
            return estimate_dict(block <= 1 ? poly_norm(P, PExponent(p), n, cfg)
                                            : poly_vector_norm(P, PExponent(p), n, block, cfg));
        },
        py::arg("poly"), py::arg("p"), py::arg("n") = 64, py::arg("block") = 1, py::arg("restarts") = 32,
        py::arg("max_iters") = 500, py::arg("tol") = 1e-10, py::arg("seed") = 0, py::arg("truncation") = "periodic");
    m.def(
        "sigma_norm",
        [](const std::string& poly, double p, Eigen::Index n, int restarts, std::uint64_t seed) {
            return estimate_dict(
                sigma_norm(Polynomial::parse(poly), PExponent(p), n, poly_config(restarts, 500, 1e-10, seed, "periodic")));
        },
        py::arg("poly"), py::arg("p"), py::arg("n") = 16, py::arg("restarts") = 32, py::arg("seed") = 0);
    m.def(
        "norm_chain",
        [](const std::string& poly, double p, Eigen::Index n, int restarts, std::uint64_t seed) {
            const auto c = norm_chain(Polynomial::parse(poly), PExponent(p), n,
                                      poly_config(restarts, 500, 1e-10, seed, "periodic"));
            return py::make_tuple(c.scalar.value(), c.sigma.value(), c.vector.value());
        },
        py::arg("poly"), py::arg("p"), py::arg("n") = 16, py::arg("restarts") = 32, py::arg("seed") = 0);
    m.def("sup_circle", [](const std::string& poly) { return sup_circle(Polynomial::parse(poly)); }, py::arg("poly"));

    m.def("schur_apply", &schur_apply, py::arg("a"), py::arg("b"));
    m.def(
        "certify_schur",
        [](const RealMatrix& a) {
            const auto c = certify(a);
            py::dict d;
            d["unital"] = c.unital;
            d["cp"] = c.cp;
            d["selfadjoint"] = c.selfadjoint;
            if (c.witness) {
                d["witness"] = c.witness->vectors;
            }
            return d;
        },
        py::arg("a"));

    m.def(
        "dilate_and_verify",
        [](const std::string& kind, const RealMatrix& a, py::object group, const RealVector& symbol, int window,
           int k_max, std::uint64_t seed) {
            DilationConfig cfg;
            cfg.seed = seed;
            if (k_max < 0) {
                k_max = window;
            }
            DilationBundle b;
            DilationReport r;
            if (kind == "schur") {
                b = dilate_schur(a, window, cfg);
                r = verify_dilation(b, schur_multiplier_map(a), k_max, matrix_units(a.rows()));
            } else {
                require(kind == "fourier", ErrorKind::input, "kind must be schur or fourier");
                const auto spec = group.cast<std::pair<std::string, int>>();
                require(spec.first == "cyclic" || spec.first == "dihedral", ErrorKind::input,
                        "group must be (\"cyclic\" | \"dihedral\", n)");
                const FiniteGroup g = spec.first == "cyclic" ? cyclic_group(spec.second) : dihedral_group(spec.second);
                b = dilate_fourier_finite(g, symbol, window, cfg);
                r = verify_dilation(b, fourier_multiplier_map(g, symbol), k_max, group_basis(g));
            }
            py::dict d;
            d["ambient_dim"] = b.ambient_dim;
            d["rank"] = b.rank;
            d["residual_by_k"] = r.residual_by_k;
            d["max_residual"] = r.max_residual;
            return d;
        },
        py::arg("kind"), py::arg("a") = RealMatrix(), py::arg("group") = py::none(),
        py::arg("symbol") = RealVector(), py::arg("window") = 3, py::arg("k_max") = -1, py::arg("seed") = 0);

    m.def(
        "wick_trace", [](const RealMatrix& vectors) { return wick_trace(columns(vectors)); }, py::arg("vectors"),
        "vacuum trace of omega(v_1)...omega(v_k), vectors as columns");
    m.def(
        "q_gram",
        [](const std::vector<std::vector<ComplexVector>>& family, double q) { return q_gram(family, q); },
        py::arg("family"), py::arg("q"));

    m.def(
        "schoenberg_check",
        [](const RealMatrix& a, const std::vector<double>& t) {
            const auto r = schoenberg_check(a, t);
            py::dict d;
            d["cnd"] = r.cnd;
            d["min_eigenvalue"] = r.min_eigenvalue;
            d["spot_checks_agree"] = r.spot_checks_agree;
            d["offending_t"] = r.offending_t ? py::cast(*r.offending_t) : py::none();
            d["alphas"] = r.alphas ? py::cast(*r.alphas) : py::none();
            return d;
        },
        py::arg("a"), py::arg("t") = std::vector<double>{0.05, 0.1, 0.5, 1.0, 2.0, 5.0});
    m.def(
        "gaussian_semigroup_dilate",
        [](const RealMatrix& alphas, double t, const ComplexMatrix& x, long samples, std::uint64_t seed) {
            const auto g = gaussian_semigroup_dilate(SemigroupSpec{alphas}, t, x, samples, seed);
            return py::make_tuple(g.mc_estimate, g.exact, g.residual);
        },
        py::arg("alphas"), py::arg("t"), py::arg("x"), py::arg("samples") = 100000, py::arg("seed") = 0);

    m.def(
        "discretize_kernel",
        [](const std::string& kind, double a, double b, double end, int n, int order) {
            KernelFunction k;
            if (kind == "indicator") {
                k = KernelFunction::indicator(a, b);
            } else if (kind == "triangle") {
                k = KernelFunction::triangle(a, b);
            } else {
                require(kind == "exp", ErrorKind::input, "kind must be indicator, triangle or exp");
                k = KernelFunction::exponential(a, end);
            }
            return discretize_kernel(k, n, order);
        },
        py::arg("kind"), py::arg("a"), py::arg("b") = 1.0, py::arg("end") = 1.0, py::arg("n") = 1,
        py::arg("order") = 16,
        "indicator [a, b], triangle (center a, half width b) or exp (rate a on [0, end])");
}
