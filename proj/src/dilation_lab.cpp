#include "ncmatsaev/dilation_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace ncm {

namespace {

using CSparse = AmbientMatrix;
using Triplets = std::vector<Eigen::Triplet<double>>;

double sparse_max_abs(const CSparse& m) {
    double top = 0.0;
    for (int k = 0; k < m.outerSize(); ++k) {
        for (CSparse::InnerIterator it(m, k); it; ++it) {
            top = std::max(top, std::abs(it.value()));
        }
    }
    return top;
}

ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(rows, cols);
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        const double re = g(rng);
        const double im = g(rng);
        m(k) = cplx(re, im);
    }
    return m;
}

// n * base^exponent, or -1 once it passes cap
Eigen::Index capped_dim(Eigen::Index n, Eigen::Index base, Eigen::Index exponent, Eigen::Index cap) {
    Eigen::Index d = n;
    for (Eigen::Index i = 0; i < exponent; ++i) {
        if (d > cap / base) {
            return -1;
        }
        d *= base;
    }
    return d <= cap ? d : -1;
}

// Build-time checks shared by both constructions; sample() draws input algebra elements.
CSparse random_sparse(Eigen::Index dim, int per_column, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::uniform_int_distribution<Eigen::Index> row(0, dim - 1);
    std::vector<Eigen::Triplet<cplx>> entries;
    for (Eigen::Index c = 0; c < dim; ++c) {
        entries.emplace_back(c, c, cplx(g(rng), g(rng)));
        for (int k = 0; k < per_column; ++k) {
            entries.emplace_back(row(rng), c, cplx(g(rng), g(rng)));
        }
    }
    CSparse m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

// Build-time checks shared by both constructions; sample() draws input algebra elements.
BundleChecks check_bundle(const DilationBundle& b, const std::function<ComplexMatrix(std::mt19937_64&)>& sample,
                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    BundleChecks c;
    const ComplexMatrix x = sample(rng);
    const ComplexMatrix y = sample(rng);
    const ComplexVector xi = random_complex(b.ambient_dim, 1, rng);
    const CSparse jx = b.j(x);
    const CSparse jy = b.j(y);
    const double scale = x.norm() * y.norm() * xi.norm();
    c.homomorphism = (b.j(x * y) * xi - jx * ComplexVector(jy * xi)).norm() / scale;
    c.adjoint = sparse_max_abs(b.j(x.adjoint()) - CSparse(jx.adjoint())) / x.cwiseAbs().maxCoeff();
    CSparse id(b.ambient_dim, b.ambient_dim);
    id.setIdentity();
    c.unit = sparse_max_abs(b.j(ComplexMatrix::Identity(b.input_dim, b.input_dim)) - id);
    c.unitarity = sparse_max_abs(CSparse(b.v.adjoint() * b.v) - id);
    c.section = (b.e(jx) - x).norm() / x.norm();
    const CSparse big = random_sparse(b.ambient_dim, 4, rng);
    cplx big_trace{};
    for (Eigen::Index k = 0; k < b.ambient_dim; ++k) {
        big_trace += big.coeff(k, k);
    }
    const cplx lhs = b.e(big).trace() * static_cast<double>(b.ambient_dim);
    const cplx rhs = big_trace * static_cast<double>(b.input_dim);
    c.trace = std::abs(lhs - rhs) / (std::abs(rhs) + static_cast<double>(b.input_dim) * big.norm());
    return c;
}

void enforce(const BundleChecks& c, const std::string& kind) {
    const double worst = std::max({c.homomorphism, c.adjoint, c.unit, c.unitarity, c.section, c.covariance});
    require(worst <= 1e-12 && c.trace <= 1e-10, ErrorKind::certification,
            kind + " dilation failed its build-time checks (worst residual " + std::to_string(worst) + ")");
}

} // namespace

AmbientMatrix DilationBundle::automorphism(const AmbientMatrix& x) const {
    require(x.rows() == ambient_dim && x.cols() == ambient_dim, ErrorKind::input, "automorphism: shape mismatch");
    AmbientMatrix out = v * x * AmbientMatrix(v.adjoint());
    out.prune(cplx{}, 0.0);
    return out;
}

AmbientMatrix DilationBundle::automorphism_power(const AmbientMatrix& x, int k) const {
    require(k >= 0, ErrorKind::input, "automorphism_power: k must be nonnegative");
    AmbientMatrix out = x;
    for (int i = 0; i < k; ++i) {
        out = automorphism(out);
    }
    return out;
}

DilationBundle dilate_schur(const RealMatrix& a, int window, const DilationConfig& cfg) {
    require(window >= 1, ErrorKind::input, "dilate_schur: window K must be at least 1");
    const auto cert = certify(a);
    require(cert.unital && cert.cp && cert.witness.has_value(), ErrorKind::certification,
            "dilate_schur: the symbol is not a unital completely positive real Schur multiplier");
    const auto& gram = *cert.witness;
    const int r = static_cast<int>(gram.rank);
    const Eigen::Index n = a.rows();
    const Eigen::Index legs_dim = capped_dim(1, Eigen::Index{1} << std::min(r, 30), window, cfg.max_ambient);
    const Eigen::Index dim = legs_dim < 0 ? -1 : capped_dim(n, legs_dim, 1, cfg.max_ambient);
    require(r <= FockSpace::max_generators && dim > 0, ErrorKind::resource,
            "dilate_schur: ambient dimension n * 2^(rK) exceeds the cap " + std::to_string(cfg.max_ambient));

    const FockSpace fock(r);
    const Eigen::Index f = fock.dim();
    const Eigen::Index tail = legs_dim / f; // legs 1..K-1

    Triplets d_entries;
    for (Eigen::Index i = 0; i < n; ++i) {
        const RealSparse w = omega(fock, gram.vectors.col(i));
        for (int col = 0; col < w.outerSize(); ++col) {
            for (RealSparse::InnerIterator it(w, col); it; ++it) {
                for (Eigen::Index s = 0; s < tail; ++s) {
                    d_entries.emplace_back(i * legs_dim + it.row() * tail + s, i * legs_dim + it.col() * tail + s,
                                           it.value());
                }
            }
        }
    }
    // leg l moves to leg l+1, the last one wraps to leg 0
    Triplets q_entries;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index idx = 0; idx < legs_dim; ++idx) {
            const Eigen::Index moved = (idx % f) * tail + idx / f;
            q_entries.emplace_back(i * legs_dim + moved, i * legs_dim + idx, 1.0);
        }
    }
    RealSparse d(dim, dim);
    RealSparse q(dim, dim);
    d.setFromTriplets(d_entries.begin(), d_entries.end());
    q.setFromTriplets(q_entries.begin(), q_entries.end());

    DilationBundle b;
    b.kind = "schur";
    b.input_dim = n;
    b.ambient_dim = dim;
    b.window = window;
    b.rank = r;
    b.v = RealSparse(d * q).cast<cplx>();
    b.j = [n, legs_dim, dim](const ComplexMatrix& x) {
        require(x.rows() == n && x.cols() == n, ErrorKind::input, "J: input must be n x n");
        std::vector<Eigen::Triplet<cplx>> entries;
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                if (x(i, j) == cplx{}) {
                    continue;
                }
                for (Eigen::Index s = 0; s < legs_dim; ++s) {
                    entries.emplace_back(i * legs_dim + s, j * legs_dim + s, x(i, j));
                }
            }
        }
        CSparse out(dim, dim);
        out.setFromTriplets(entries.begin(), entries.end());
        return out;
    };
    b.e = [n, legs_dim, dim](const CSparse& x) {
        require(x.rows() == dim && x.cols() == dim, ErrorKind::input, "E: input must be ambient sized");
        ComplexMatrix out = ComplexMatrix::Zero(n, n);
        for (int col = 0; col < x.outerSize(); ++col) {
            for (CSparse::InnerIterator it(x, col); it; ++it) {
                if (it.row() % legs_dim == it.col() % legs_dim) {
                    out(it.row() / legs_dim, it.col() / legs_dim) += it.value();
                }
            }
        }
        return ComplexMatrix(out / static_cast<double>(legs_dim));
    };
    b.checks = check_bundle(b, [n](std::mt19937_64& rng) { return random_complex(n, n, rng); }, cfg.seed);
    enforce(b.checks, "Schur");
    return b;
}

DilationBundle dilate_fourier_finite(const FiniteGroup& g, const RealVector& t, int window, const DilationConfig& cfg) {
    require(window >= 1, ErrorKind::input, "dilate_fourier_finite: window K must be at least 1");
    require(t.size() == g.order(), ErrorKind::input, "dilate_fourier_finite: symbol length must equal |G|");
    require(std::abs(t[0] - 1.0) <= 1e-12, ErrorKind::certification,
            "dilate_fourier_finite: symbol is not unital (t_e != 1)");
    const RealMatrix gram_matrix = symbol_gram(g, t);
    require(is_psd(gram_matrix), ErrorKind::certification,
            "dilate_fourier_finite: symbol is not positive definite");
    const auto gram = gram_factorize(gram_matrix);
    const int r = static_cast<int>(gram.rank);
    const Eigen::Index order = g.order();
    const int modes = r * window;
    const Eigen::Index dim =
        modes > 30 ? -1 : capped_dim(order, Eigen::Index{1} << modes, 1, cfg.max_ambient);
    require(modes <= FockSpace::max_generators && dim > 0, ErrorKind::resource,
            "dilate_fourier_finite: ambient dimension |G| * 2^(rK) exceeds the cap " + std::to_string(cfg.max_ambient));

    const FockSpace fock(modes);
    const Eigen::Index f = fock.dim();
    // mode (a, leg) has index leg * r + a
    auto field = [&](int element, int leg) {
        RealVector w = RealVector::Zero(modes);
        w.segment(leg * r, r) = gram.vectors.col(element);
        return omega(fock, w);
    };
    // pi(omega(v_k at leg)) = sum_h omega(v_{h^-1 k} at leg) (x) e_hh
    auto pi_field = [&](int element, int leg) {
        Triplets entries;
        for (int h = 0; h < order; ++h) {
            const RealSparse w = field(g.mul(g.inv(h), element), leg);
            for (int col = 0; col < w.outerSize(); ++col) {
                for (RealSparse::InnerIterator it(w, col); it; ++it) {
                    entries.emplace_back(it.row() * order + h, it.col() * order + h, it.value());
                }
            }
        }
        RealSparse out(dim, dim);
        out.setFromTriplets(entries.begin(), entries.end());
        return out;
    };
    auto lifted_translation = [&](int element) {
        Triplets entries;
        for (Eigen::Index s = 0; s < f; ++s) {
            for (int h = 0; h < order; ++h) {
                entries.emplace_back(s * order + g.mul(element, h), s * order + h, 1.0);
            }
        }
        RealSparse out(dim, dim);
        out.setFromTriplets(entries.begin(), entries.end());
        return out;
    };

    std::vector<int> perm(static_cast<std::size_t>(modes));
    for (int leg = 0; leg < window; ++leg) {
        for (int a = 0; a < r; ++a) {
            perm[static_cast<std::size_t>(leg * r + a)] = ((leg + 1) % window) * r + a;
        }
    }
    const RealSparse shift = fock_permutation(fock, perm);
    Triplets shift_entries;
    for (int col = 0; col < shift.outerSize(); ++col) {
        for (RealSparse::InnerIterator it(shift, col); it; ++it) {
            for (int h = 0; h < order; ++h) {
                shift_entries.emplace_back(it.row() * order + h, it.col() * order + h, it.value());
            }
        }
    }
    RealSparse lifted_shift(dim, dim);
    lifted_shift.setFromTriplets(shift_entries.begin(), shift_entries.end());

    DilationBundle b;
    b.kind = "fourier";
    b.input_dim = order;
    b.ambient_dim = dim;
    b.window = window;
    b.rank = r;
    b.v = RealSparse(pi_field(0, 0) * lifted_shift).cast<cplx>();
    b.j = [order, f, dim](const ComplexMatrix& x) {
        require(x.rows() == order && x.cols() == order, ErrorKind::input, "J: input must be |G| x |G|");
        std::vector<Eigen::Triplet<cplx>> entries;
        for (Eigen::Index s = 0; s < f; ++s) {
            for (Eigen::Index j = 0; j < order; ++j) {
                for (Eigen::Index i = 0; i < order; ++i) {
                    if (x(i, j) != cplx{}) {
                        entries.emplace_back(s * order + i, s * order + j, x(i, j));
                    }
                }
            }
        }
        CSparse out(dim, dim);
        out.setFromTriplets(entries.begin(), entries.end());
        return out;
    };
    // coefficient of lambda(a) is the normalized trace of X J(lambda(a))^*
    b.e = [g, order, dim](const CSparse& x) {
        require(x.rows() == dim && x.cols() == dim, ErrorKind::input, "E: input must be ambient sized");
        ComplexVector coeffs = ComplexVector::Zero(order);
        for (int col = 0; col < x.outerSize(); ++col) {
            for (CSparse::InnerIterator it(x, col); it; ++it) {
                if (it.row() / order != it.col() / order) {
                    continue;
                }
                const auto row_el = static_cast<int>(it.row() % order);
                const auto col_el = static_cast<int>(it.col() % order);
                // X((s, a h), (s, h)) contributes to a = row_el col_el^-1
                coeffs[g.mul(row_el, g.inv(col_el))] += it.value();
            }
        }
        return group_element(g, coeffs / static_cast<double>(dim));
    };
    b.checks = check_bundle(
        b, [&g](std::mt19937_64& rng) { return group_element(g, random_complex(g.order(), 1, rng)); }, cfg.seed);
    // J(lambda(g)) omega(h (x) e_l) J(lambda(g))^* = omega(gh (x) e_l)
    for (int a = 0; a < order; ++a) {
        const RealSparse lam = lifted_translation(a);
        for (int h = 0; h < order; ++h) {
            for (int leg = 0; leg < std::min(window, 2); ++leg) {
                const RealSparse lhs = lam * pi_field(h, leg) * RealSparse(lam.transpose());
                b.checks.covariance = std::max(
                    b.checks.covariance, sparse_max_abs(CSparse((lhs - pi_field(g.mul(a, h), leg)).cast<cplx>())));
            }
        }
    }
    enforce(b.checks, "Fourier");
    return b;
}

DilationReport verify_dilation(const DilationBundle& bundle, const LinearMap& m, int k_max,
                               const std::vector<ComplexMatrix>& tests) {
    require(k_max >= 0, ErrorKind::input, "verify_dilation: k_max must be nonnegative");
    require(k_max <= bundle.window, ErrorKind::window,
            "verify_dilation: k_max = " + std::to_string(k_max) + " exceeds the window K = " +
                std::to_string(bundle.window));
    DilationReport report;
    report.k_max = k_max;
    report.test_elements = static_cast<int>(tests.size());
    report.residual_by_k.assign(static_cast<std::size_t>(k_max + 1), 0.0);
    for (const auto& x : tests) {
        ComplexMatrix mx = x;
        AmbientMatrix ux = bundle.j(x);
        for (int k = 0; k <= k_max; ++k) {
            auto& slot = report.residual_by_k[static_cast<std::size_t>(k)];
            slot = std::max(slot, (mx - bundle.e(ux)).norm());
            if (k < k_max) {
                mx = m(mx);
                ux = bundle.automorphism(ux);
            }
        }
    }
    for (double r : report.residual_by_k) {
        report.max_residual = std::max(report.max_residual, r);
    }
    return report;
}

ComplexMatrix group_element(const FiniteGroup& g, const ComplexVector& coeffs) {
    require(coeffs.size() == g.order(), ErrorKind::input, "group_element: one coefficient per group element");
    ComplexMatrix x = ComplexMatrix::Zero(g.order(), g.order());
    for (int a = 0; a < g.order(); ++a) {
        x += coeffs[a] * regular_rep(g, a).cast<cplx>();
    }
    return x;
}

LinearMap schur_multiplier_map(const RealMatrix& a) {
    return [a](const ComplexMatrix& x) { return schur_apply(a, x); };
}

LinearMap fourier_multiplier_map(const FiniteGroup& g, const RealVector& t) {
    return [g, t](const ComplexMatrix& x) { return group_element(g, fourier_apply(g, t, group_coefficients(g, x))); };
}

std::vector<ComplexMatrix> matrix_units(Eigen::Index n) {
    std::vector<ComplexMatrix> out;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            ComplexMatrix e = ComplexMatrix::Zero(n, n);
            e(i, j) = 1.0;
            out.push_back(std::move(e));
        }
    }
    return out;
}

std::vector<ComplexMatrix> group_basis(const FiniteGroup& g) {
    std::vector<ComplexMatrix> out;
    for (int a = 0; a < g.order(); ++a) {
        out.emplace_back(regular_rep(g, a).cast<cplx>());
    }
    return out;
}

RealMatrix SemigroupSpec::squared_distances() const {
    const Eigen::Index n = size();
    RealMatrix d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            d(i, j) = (alphas.col(i) - alphas.col(j)).squaredNorm();
        }
    }
    return d;
}

RealMatrix SemigroupSpec::matrix(double t) const {
    require(t >= 0.0, ErrorKind::input, "semigroup time must be nonnegative");
    return (-t * squared_distances().array()).exp().matrix();
}

namespace {

double min_eigenvalue(const RealMatrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

} // namespace

SchoenbergResult schoenberg_check(const RealMatrix& a, const std::vector<double>& t_samples) {
    require(a.rows() == a.cols() && a.rows() >= 1, ErrorKind::input, "schoenberg_check: square matrix required");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    require((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale, ErrorKind::precondition,
            "schoenberg_check: matrix is not symmetric");
    require(a.diagonal().cwiseAbs().maxCoeff() <= 1e-10, ErrorKind::precondition,
            "schoenberg_check: diagonal must vanish");
    const Eigen::Index n = a.rows();
    const RealMatrix centering =
        RealMatrix::Identity(n, n) - RealMatrix::Constant(n, n, 1.0 / static_cast<double>(n));
    const RealMatrix form = -0.5 * centering * a * centering;
    SchoenbergResult out;
    out.min_eigenvalue = min_eigenvalue(form);
    out.cnd = out.min_eigenvalue >= -1e-10 * scale * static_cast<double>(n);

    auto exp_min = [&](double t) { return min_eigenvalue((-t * a.array()).exp().matrix()); };
    for (double t : t_samples) {
        require(t > 0.0, ErrorKind::input, "schoenberg_check: sample times must be positive");
        const double lo = exp_min(t);
        const bool psd = lo >= -1e-10 * static_cast<double>(n);
        if (psd != out.cnd) {
            out.spot_checks_agree = false;
        }
        if (!psd && !out.offending_t) {
            out.offending_t = t;
            out.offending_eigenvalue = lo;
        }
    }
    if (out.cnd) {
        const auto gram = gram_factorize(form);
        out.alphas = gram.rank == 0 ? RealMatrix::Zero(1, n) : gram.vectors;
    } else if (!out.offending_t) {
        // near t = 0 exp(-tA) ~ 11^T - tA, which fails on the complement of the constants
        for (int j = -8; j <= 40 && !out.offending_t; ++j) {
            const double t = std::ldexp(1.0, -j);
            const double lo = exp_min(t);
            if (lo < -1e-12 * static_cast<double>(n)) {
                out.offending_t = t;
                out.offending_eigenvalue = lo;
            }
        }
    }
    return out;
}

GaussianDilation gaussian_semigroup_dilate(const SemigroupSpec& spec, double t, const ComplexMatrix& x,
                                           long mc_samples, std::uint64_t seed) {
    require(t >= 0.0, ErrorKind::input, "gaussian_semigroup_dilate: t must be nonnegative");
    require(mc_samples >= 1, ErrorKind::input, "gaussian_semigroup_dilate: need at least one sample");
    const Eigen::Index n = spec.size();
    require(x.rows() == n && x.cols() == n, ErrorKind::input, "gaussian_semigroup_dilate: x must be n x n");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::numbers::sqrt2); // E exp(i<h,w>) = exp(-|h|^2)
    const Eigen::Index r = spec.alphas.rows();
    RealVector w(r);
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    const double root_t = std::sqrt(t);
    for (long s = 0; s < mc_samples; ++s) {
        for (Eigen::Index k = 0; k < r; ++k) {
            w[k] = gauss(rng);
        }
        const RealVector phase = root_t * (spec.alphas.transpose() * w);
        const ComplexVector z = phase.unaryExpr([](double a) { return std::polar(1.0, a); });
        sum.noalias() += z * z.adjoint();
    }
    GaussianDilation out;
    out.mc_estimate = (sum / static_cast<double>(mc_samples)).cwiseProduct(x);
    out.exact = schur_apply(spec.matrix(t), x);
    out.residual = (out.mc_estimate - out.exact).norm();
    return out;
}

const char* to_string(KernelKind k) noexcept {
    switch (k) {
    case KernelKind::samples:
        return "samples";
    case KernelKind::indicator:
        return "indicator";
    case KernelKind::triangle:
        return "triangle";
    case KernelKind::exp:
        return "exp";
    case KernelKind::custom:
        return "custom";
    }
    return "?";
}

KernelFunction KernelFunction::indicator(double left, double right, double scale) {
    require(left >= 0.0 && right > left && std::isfinite(right), ErrorKind::input,
            "indicator kernel needs 0 <= left < right < inf");
    KernelFunction k;
    k.kind = KernelKind::indicator;
    k.a = left;
    k.b = right;
    k.scale = scale;
    k.support_end = right;
    return k;
}

KernelFunction KernelFunction::triangle(double center, double half_width, double scale) {
    require(half_width > 0.0 && center - half_width >= 0.0 && std::isfinite(center + half_width), ErrorKind::input,
            "triangle kernel must sit inside [0, inf) with positive half width");
    KernelFunction k;
    k.kind = KernelKind::triangle;
    k.a = center;
    k.b = half_width;
    k.scale = scale;
    k.support_end = center + half_width;
    return k;
}

KernelFunction KernelFunction::exponential(double rate, double end, double scale) {
    require(end > 0.0, ErrorKind::input, "exp kernel needs a positive support end");
    KernelFunction k;
    k.kind = KernelKind::exp;
    k.a = rate;
    k.scale = scale;
    k.support_end = end;
    return k;
}

KernelFunction KernelFunction::sampled(std::vector<double> values, double end) {
    require(values.size() >= 2 && end > 0.0 && std::isfinite(end), ErrorKind::input,
            "sampled kernel needs at least two samples and a finite support end");
    for (double v : values) {
        require(std::isfinite(v), ErrorKind::input, "sampled kernel has a non-finite sample");
    }
    KernelFunction k;
    k.kind = KernelKind::samples;
    k.values = std::move(values);
    k.support_end = end;
    return k;
}

KernelFunction KernelFunction::custom(std::function<double(double)> fn, double end, std::vector<double> kinks) {
    require(static_cast<bool>(fn) && end > 0.0, ErrorKind::input, "custom kernel needs a function and a support end");
    KernelFunction k;
    k.kind = KernelKind::custom;
    k.fn = std::move(fn);
    k.support_end = end;
    k.kinks = std::move(kinks);
    return k;
}

double KernelFunction::operator()(double t) const {
    if (t < 0.0 || t > support_end) {
        return 0.0;
    }
    switch (kind) {
    case KernelKind::indicator:
        return t >= a && t <= b ? scale : 0.0;
    case KernelKind::triangle:
        return scale * std::max(0.0, 1.0 - std::abs(t - a) / b);
    case KernelKind::exp:
        return scale * std::exp(-a * t);
    case KernelKind::samples: {
        const double pos = t / support_end * static_cast<double>(values.size() - 1);
        const auto i = std::min(static_cast<std::size_t>(pos), values.size() - 2);
        const double frac = pos - static_cast<double>(i);
        return scale * ((1.0 - frac) * values[i] + frac * values[i + 1]);
    }
    case KernelKind::custom:
        return scale * fn(t);
    }
    return 0.0;
}

std::vector<double> KernelFunction::breakpoints() const {
    std::vector<double> pts{0.0, support_end};
    switch (kind) {
    case KernelKind::indicator:
        pts.insert(pts.end(), {a, b});
        break;
    case KernelKind::triangle:
        pts.insert(pts.end(), {a - b, a, a + b});
        break;
    case KernelKind::samples:
        for (std::size_t i = 1; i + 1 < values.size(); ++i) {
            pts.push_back(support_end * static_cast<double>(i) / static_cast<double>(values.size() - 1));
        }
        break;
    case KernelKind::custom:
        pts.insert(pts.end(), kinks.begin(), kinks.end());
        break;
    case KernelKind::exp:
        break;
    }
    std::erase_if(pts, [&](double p) { return p < 0.0 || p > support_end; });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

GaussRule gauss_legendre(int order) {
    require(order >= 1 && order <= 256, ErrorKind::input, "gauss_legendre: order must be in 1..256");
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (order == 1) {
                p0 = 1.0;
                p1 = x;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-16) {
                break;
            }
        }
        rule.nodes[static_cast<std::size_t>(i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

namespace {

// sum over [lo, hi] split at the given points
template <class F>
double integrate_pieces(const F& f, std::vector<double> cuts, double lo, double hi, const GaussRule& rule) {
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::erase_if(cuts, [&](double c) { return c < lo || c > hi; });
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
        const double half = 0.5 * (cuts[s + 1] - cuts[s]);
        if (half <= 0.0) {
            continue;
        }
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            total += half * rule.weights[q] * f(mid + half * rule.nodes[q]);
        }
    }
    return total;
}

} // namespace

double KernelFunction::l1_norm(int order) const {
    if (kind == KernelKind::exp && !std::isfinite(support_end)) {
        return std::abs(scale) / a;
    }
    const auto rule = gauss_legendre(order);
    return integrate_pieces([this](double t) { return std::abs((*this)(t)); }, breakpoints(), 0.0, support_end, rule);
}

std::vector<double> discretize_kernel(const KernelFunction& b, int n, int order) {
    require(n >= 1, ErrorKind::input, "discretize_kernel: n must be at least 1");
    require(std::isfinite(b.support_end), ErrorKind::precondition,
            "discretize_kernel: kernel support must be bounded");
    const auto rule = gauss_legendre(order);
    const auto pts = b.breakpoints();
    const double nd = static_cast<double>(n);
    const auto last = static_cast<int>(std::ceil(nd * b.support_end));
    std::vector<double> out;
    for (int k = 0; k <= last; ++k) {
        // the double integral reduces to the overlap density 1 - |u| of u = t - s
        std::vector<double> cuts{0.0};
        for (double p : pts) {
            cuts.push_back(nd * p - k);
        }
        const auto integrand = [&](double u) { return (1.0 - std::abs(u)) * b((u + k) / nd); };
        out.push_back(integrate_pieces(integrand, cuts, -1.0, 1.0, rule) / nd);
    }
    return out;
}

namespace {

template <class F>
ConvolutionResult adaptive_convolution(const KernelFunction& b, const F& family, Eigen::Index dim,
                                       const QuadratureConfig& cfg) {
    require(std::isfinite(b.support_end), ErrorKind::precondition,
            "semigroup_convolution: kernel support must be bounded");
    require(cfg.max_refinements >= 1, ErrorKind::input, "semigroup_convolution: need at least one refinement");
    const auto rule = gauss_legendre(cfg.order);
    const auto pts = b.breakpoints();
    ConvolutionResult out;
    out.b_l1 = b.l1_norm();
    ComplexMatrix previous;
    for (int level = 0; level <= cfg.max_refinements; ++level) {
        const int split = 1 << level;
        ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
        int panels = 0;
        for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
            const double width = (pts[s + 1] - pts[s]) / split;
            for (int p = 0; p < split; ++p) {
                const double mid = pts[s] + (p + 0.5) * width;
                for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                    const double t = mid + 0.5 * width * rule.nodes[q];
                    const double weight = 0.5 * width * rule.weights[q] * b(t);
                    if (weight != 0.0) {
                        sum += weight * family(t);
                    }
                }
                ++panels;
            }
        }
        if (level > 0) {
            out.last_change = (sum - previous).norm();
            if (out.last_change <= cfg.tol * std::max(1.0, sum.norm())) {
                out.value = std::move(sum);
                out.panels = panels;
                return out;
            }
        }
        previous = std::move(sum);
        out.panels = panels;
    }
    fail(ErrorKind::accuracy, "semigroup_convolution: quadrature did not settle (last change " +
                                  std::to_string(out.last_change) + ")");
}

} // namespace

ConvolutionResult semigroup_convolution(const KernelFunction& b, const ComplexMatrix& generator,
                                        const QuadratureConfig& cfg) {
    require(generator.rows() == generator.cols() && generator.rows() >= 1, ErrorKind::input,
            "semigroup_convolution: generator must be square");
    const PExponent p(cfg.p);
    const bool closed = p.is_one() || p.is_infinite() || p.is_two();
    auto op_norm = [&](const ComplexMatrix& m) {
        if (closed) {
            return exact_pnorm_special(m, p);
        }
        return estimate_pnorm(BlockOperator(m), p, {.restarts = 8}).value;
    };
    for (int i = 0; i <= 8; ++i) {
        const double t = b.support_end * i / 8.0;
        const double norm = op_norm((t * generator).exp());
        require(norm <= 1.0 + 1e-8, ErrorKind::precondition,
                "semigroup_convolution: exp(tL) is not contractive at t = " + std::to_string(t));
    }
    auto out = adaptive_convolution(b, [&](double t) { return ComplexMatrix((t * generator).exp()); },
                                    generator.rows(), cfg);
    out.norm_estimate = op_norm(out.value);
    return out;
}

ConvolutionResult semigroup_convolution(const KernelFunction& b, const SemigroupSpec& spec,
                                        const QuadratureConfig& cfg) {
    require(spec.size() >= 1, ErrorKind::input, "semigroup_convolution: empty semigroup spec");
    const RealMatrix dist = spec.squared_distances();
    auto out = adaptive_convolution(
        b, [&](double t) { return ComplexMatrix((-t * dist.array()).exp().matrix().cast<cplx>()); }, spec.size(),
        cfg);
    const SchurMap map(out.value.real());
    out.norm_estimate = estimate_pnorm(map, PExponent(cfg.p), {.restarts = 8}).value;
    return out;
}

} // namespace ncm
