#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ncmatsaev/fock_clifford.hpp"
#include "ncmatsaev/schur_fourier.hpp"

namespace ncm {

using LinearMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

/// Ambient elements are kept sparse: the images of matrix units under U^k J
/// have few nonzeros even when D is in the thousands.
using AmbientMatrix = Eigen::SparseMatrix<cplx>;

/// Residuals measured when a bundle is built. All must be tiny or the
/// construction throws a certification error.
struct BundleChecks {
    double homomorphism = 0.0; // J(xy) - J(x)J(y), probed on random vectors
    double adjoint = 0.0;      // J(x^*) - J(x)^*
    double unit = 0.0;         // J(1) - 1
    double unitarity = 0.0;    // V^* V - Id
    double section = 0.0;      // E(J(x)) - x
    double trace = 0.0;        // trace compatibility of E, relative
    double covariance = 0.0;   // crossed product relation (Fourier only)
};

/// Finite model of a dilation (J, U, E): U(X) = V X V^* on D x D matrices.
struct DilationBundle {
    std::string kind;
    Eigen::Index input_dim = 0;
    Eigen::Index ambient_dim = 0;
    int window = 0;
    int rank = 0; // dimension of the Gram factor space
    AmbientMatrix v;
    std::function<AmbientMatrix(const ComplexMatrix&)> j;
    std::function<ComplexMatrix(const AmbientMatrix&)> e;
    BundleChecks checks;

    [[nodiscard]] AmbientMatrix automorphism(const AmbientMatrix& x) const;
    [[nodiscard]] AmbientMatrix automorphism_power(const AmbientMatrix& x, int k) const;
};

struct DilationConfig {
    Eigen::Index max_ambient = 4096;
    std::uint64_t seed = 0;          // random probes of the build-time checks
};

/// Ambient C^n (x) F^{(x)K}, F the Fock space over the Gram factor space of A.
/// J(x) = x (x) 1, V = d (Id (x) cyclic leg shift), d = sum e_ii (x) omega(v_i)
/// on leg 0, E the normalized partial trace over the legs.
DilationBundle dilate_schur(const RealMatrix& a, int window, const DilationConfig& cfg = {});

/// Ambient Fock(R^{rK}) (x) l^2_G with the covariant pair
/// pi(x) = sum_h alpha_{h^-1}(x) (x) e_hh, J(lambda(g)) = 1 (x) lambda(g).
DilationBundle dilate_fourier_finite(const FiniteGroup& g, const RealVector& t, int window,
                                     const DilationConfig& cfg = {});

struct DilationReport {
    int k_max = 0;
    int test_elements = 0;
    std::vector<double> residual_by_k; // max over the test set of ||M^k(x) - E U^k J(x)||_F
    double max_residual = 0.0;
};

/// Window error when k_max exceeds the bundle window.
DilationReport verify_dilation(const DilationBundle& bundle, const LinearMap& m, int k_max,
                               const std::vector<ComplexMatrix>& tests);

/// M_A and M_t as maps on matrices (the latter on elements of VN(G)).
LinearMap schur_multiplier_map(const RealMatrix& a);
LinearMap fourier_multiplier_map(const FiniteGroup& g, const RealVector& t);

/// sum_g c_g lambda(g).
ComplexMatrix group_element(const FiniteGroup& g, const ComplexVector& coeffs);

std::vector<ComplexMatrix> matrix_units(Eigen::Index n);
std::vector<ComplexMatrix> group_basis(const FiniteGroup& g); // lambda(g) for every g

/// Columns alpha_1..alpha_n in R^r; A(t)_ij = exp(-t |alpha_i - alpha_j|^2).
struct SemigroupSpec {
    RealMatrix alphas;

    [[nodiscard]] Eigen::Index size() const noexcept { return alphas.cols(); }
    [[nodiscard]] RealMatrix squared_distances() const;
    [[nodiscard]] RealMatrix matrix(double t) const;
};

struct SchoenbergResult {
    bool cnd = false;
    double min_eigenvalue = 0.0; // of -A/2 compressed to the complement of the constants
    std::optional<double> offending_t;
    std::optional<double> offending_eigenvalue;
    std::optional<RealMatrix> alphas; // columns with |a_i - a_j|^2 = A_ij
    bool spot_checks_agree = true;   // every sampled exp(-tA) PSD iff cnd
};

/// Conditionally negative definite test for a symmetric, zero-diagonal A.
SchoenbergResult schoenberg_check(const RealMatrix& a, const std::vector<double>& t_samples);

struct GaussianDilation {
    ComplexMatrix mc_estimate;
    ComplexMatrix exact;
    double residual = 0.0; // Frobenius
};

/// Average of D_t(w) x D_t(w)^* with D_t(w) = diag(exp(i sqrt(t) <alpha_j, w>)),
/// w Gaussian normalized so that E exp(i <h, w>) = exp(-|h|^2).
GaussianDilation gaussian_semigroup_dilate(const SemigroupSpec& spec, double t, const ComplexMatrix& x,
                                           long mc_samples, std::uint64_t seed);

enum class KernelKind { samples, indicator, triangle, exp, custom };
const char* to_string(KernelKind k) noexcept;

/// Real function b on [0, T], T = support_end. Zero outside.
struct KernelFunction {
    KernelKind kind = KernelKind::indicator;
    double scale = 1.0;
    double a = 0.0;               // indicator: [a, b]; triangle: center; exp: rate
    double b = 1.0;               // indicator: right end; triangle: half width
    double support_end = 1.0;     // T
    std::vector<double> values{}; // samples on a uniform grid of [0, T], linear interpolation
    std::function<double(double)> fn{};
    std::vector<double> kinks{}; // custom: points where fn is not smooth

    static KernelFunction indicator(double left, double right, double scale = 1.0);
    static KernelFunction triangle(double center, double half_width, double scale = 1.0);
    static KernelFunction exponential(double rate, double end, double scale = 1.0);
    static KernelFunction sampled(std::vector<double> values, double end);
    static KernelFunction custom(std::function<double(double)> fn, double end, std::vector<double> kinks = {});

    [[nodiscard]] double operator()(double t) const;
    /// Support end points and nonsmooth points, sorted, inside [0, T].
    [[nodiscard]] std::vector<double> breakpoints() const;
    [[nodiscard]] double l1_norm(int order = 16) const;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

/// a_{n,k} = int_0^1 int_0^1 b((t - s + k)/n) / n ds dt for k = 0 .. ceil(nT).
/// Precondition error for an unbounded support.
std::vector<double> discretize_kernel(const KernelFunction& b, int n, int order = 16);

struct QuadratureConfig {
    int order = 8;
    double tol = 1e-9;
    int max_refinements = 14; // panel doublings
    double p = 2.0;           // exponent of the reported operator norm
};

struct ConvolutionResult {
    ComplexMatrix value;
    double b_l1 = 0.0;
    double norm_estimate = 0.0; // lower bound of ||value|| on l^p (generator) or S^p (Schur symbol)
    int panels = 0;
    double last_change = 0.0;
};

/// int b(t) exp(tL) dt. Requires exp(tL) contractive on l^p at sampled t.
ConvolutionResult semigroup_convolution(const KernelFunction& b, const ComplexMatrix& generator,
                                        const QuadratureConfig& cfg = {});

/// Symbol of int b(t) T_t dt for the Schur semigroup of spec.
ConvolutionResult semigroup_convolution(const KernelFunction& b, const SemigroupSpec& spec,
                                        const QuadratureConfig& cfg = {});

} // namespace ncm
