#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncmatsaev/pnorm_engine.hpp"

namespace ncm {

/// Complex polynomial a_0 + a_1 z + ... + a_d z^d, trailing coefficient
/// nonzero except for the zero polynomial, which is stored as {0}.
class Polynomial {
public:
    Polynomial() : coeffs_{cplx{0.0, 0.0}} {}
    explicit Polynomial(std::vector<cplx> coeffs);

    /// Parses comma-separated coefficients, low degree first. Each entry is
    /// a real number, an imaginary number ending in 'i', or "re+imi".
    static Polynomial parse(std::string_view text);

    [[nodiscard]] const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == cplx{}; }
    [[nodiscard]] bool is_real(double tol = 0.0) const noexcept;

    [[nodiscard]] cplx operator()(cplx z) const noexcept; // Horner
    [[nodiscard]] double l1_norm() const noexcept;        // sum |a_k|
    [[nodiscard]] double max_abs_coeff() const noexcept;

    /// P(e^{i psi} z).
    [[nodiscard]] Polynomial rotated(double psi) const;

    [[nodiscard]] std::string to_string() const;

private:
    std::vector<cplx> coeffs_;
};

enum class ShiftKind { right, left, matrix_shift, two_sided };

/// Finite truncation of one of the shift operators.
struct ShiftTruncation {
    Eigen::Index n = 1;
    ShiftKind kind = ShiftKind::right;

    /// S_n / S_{-,n} as n x n matrices. For matrix_shift and two_sided the
    /// n^2 x n^2 matrix acting on column-major vectorized n x n blocks.
    [[nodiscard]] ComplexMatrix matrix() const;
};

/// Lower-triangular Toeplitz matrix P(S_n): entry (i,j) = a_{i-j}.
ComplexMatrix toeplitz_of(const Polynomial& poly, Eigen::Index n);

/// P(C_n) for the cyclic shift C_n (C_n e_k = e_{k+1 mod n}).
ComplexMatrix circulant_of(const Polynomial& poly, Eigen::Index n);

/// Theta on a finite window of Z: (Theta A)(i,j) = A(i-1, j-1), with
/// entries whose source lies outside the window set to 0.
ComplexMatrix theta_apply(const ComplexMatrix& a);

/// ||Theta(A) - S A S^{-1}||_F over the interior of the window (first and
/// last rows/columns excluded), S the bilateral shift restricted to it.
double sigma_conjugation_check(const ComplexMatrix& a);

/// How the infinite shift is replaced by an n-dimensional operator.
///  - finite_section: S_n (lower-triangular Toeplitz) and the NW-SE shift
///    sigma_n with zero first row and column; each n embeds in n+1.
///  - periodic: the twisted cyclic shift e^{i psi} C_n (and A -> C A C^* for
///    sigma), maximized over the twist psi. Exact on sign-extremal anchors.
enum class Truncation { finite_section, periodic };

const char* to_string(Truncation t) noexcept;
Truncation truncation_from_string(std::string_view s);

struct PolyNormConfig {
    PNormConfig engine{};
    Truncation truncation = Truncation::periodic;
    int twist_grid = 8;         // coarse grid points on [0, 2 pi / n)
    int twist_restarts = 0;     // random restarts per twist during the scan (besides the Fourier starts)
    int twist_refine_steps = 24; // golden-section steps around the best grid point
    std::vector<double> twist_hints{};
    int fourier_starts = 2;      // periodic only: top circulant eigenvectors used as warm starts
};

struct PolyNormEstimate {
    PNormEstimate estimate;
    Eigen::Index n = 0;
    Eigen::Index block_dim = 1;
    Truncation truncation = Truncation::periodic;
    double twist = 0.0;  // psi at which the value was attained (periodic only)
    bool exact = false;  // closed form used (p in {1, 2, inf})

    [[nodiscard]] double value() const noexcept { return estimate.value; }
};

/// Truncated ||P||_p = ||P(S)||_{l^p -> l^p}; always a certified lower bound.
PolyNormEstimate poly_norm(const Polynomial& poly, const PExponent& p, Eigen::Index n, const PolyNormConfig& cfg = {});

/// Truncated ||P||_{p,S^p_m} = ||P(S) (x) Id_{S^p_m}||.
PolyNormEstimate poly_vector_norm(const Polynomial& poly, const PExponent& p, Eigen::Index n, Eigen::Index m,
                                  const PolyNormConfig& cfg = {});

/// Truncated ||P(sigma)||_{S^p -> S^p} over n x n matrices.
PolyNormEstimate sigma_norm(const Polynomial& poly, const PExponent& p, Eigen::Index n, const PolyNormConfig& cfg = {});

/// The three truncated norms of the chain poly <= sigma <= vector(m = n).
/// sigma is warm-started from the diagonal embedding of the scalar witness
/// and vector from the isometric orbit embedding of the sigma witness, so
/// each estimate is at least the previous one whenever the embedding is
/// exact (always for the diagonal step, periodic truncation for the second).
struct NormChain {
    PolyNormEstimate scalar;
    PolyNormEstimate sigma;
    PolyNormEstimate vector;
};
NormChain norm_chain(const Polynomial& poly, const PExponent& p, Eigen::Index n, const PolyNormConfig& cfg = {});

/// P(sigma_n) (finite_section) or P(Theta_n) (periodic) with rotation psi,
/// acting on a single n x n block.
class SigmaPolyMap final : public BlockMap {
public:
    SigmaPolyMap(const Polynomial& poly, Eigen::Index n, Truncation truncation, double twist = 0.0);

    [[nodiscard]] Eigen::Index input_blocks() const override { return 1; }
    [[nodiscard]] Eigen::Index output_blocks() const override { return 1; }
    [[nodiscard]] Eigen::Index block_dim() const override { return n_; }
    [[nodiscard]] BlockVector apply(const BlockVector& x) const override;
    [[nodiscard]] BlockVector apply_adjoint(const BlockVector& y) const override;

    /// The same map as an explicit n^2 x n^2 matrix on column-major vec(A).
    [[nodiscard]] ComplexMatrix matrix() const;

private:
    [[nodiscard]] ComplexMatrix shifted(const ComplexMatrix& a, Eigen::Index k) const;
    std::vector<cplx> coeffs_;
    Eigen::Index n_;
    Truncation truncation_;
};

/// max |P(e^{i theta})| on a dense grid followed by golden-section refinement.
struct CircleMax {
    double value = 0.0;
    double theta = 0.0;
};
CircleMax sup_circle_arg(const Polynomial& poly, int grid = 1 << 16);
double sup_circle(const Polynomial& poly, int grid = 1 << 16);

enum class ExtremalVerdict { same_sign, alternating, neither };
const char* to_string(ExtremalVerdict v) noexcept;

struct ExtremalClassification {
    ExtremalVerdict verdict = ExtremalVerdict::neither;
    double l1 = 0.0;                       // sum |a_k|
    std::optional<double> predicted_norm; // set iff verdict != neither
};

/// Real polynomials with all coefficients nonzero: ||P||_p = sum |a_k| for
/// every 1 < p < inf exactly when the signs agree or alternate.
ExtremalClassification classify_extremal(const Polynomial& poly);

struct NormProfileEntry {
    Eigen::Index n = 0;
    double value = 0.0;
    bool converged = false;
    bool certified = false;
    double twist = 0.0;
};

struct NormProfile {
    Polynomial poly;
    double p = 2.0;
    Eigen::Index block_dim = 1;
    Truncation truncation = Truncation::periodic;
    std::vector<NormProfileEntry> entries;
};

const std::vector<Eigen::Index>& default_truncation_ladder();

/// Estimates across the ladder. Periodic profiles pass each best twist on
/// to the next (doubled) size, so values are nondecreasing along doubling ladders.
NormProfile norm_profile(const Polynomial& poly, const PExponent& p, const std::vector<Eigen::Index>& ladder,
                         Eigen::Index block_dim = 1, const PolyNormConfig& cfg = {});

struct GapSearchConfig {
    int budget = 40;          // candidate evaluations
    Eigen::Index n = 12;      // truncation size
    Eigen::Index block_dim = 2;
    int keep = 8;             // size of the reported table and of the perturbation pool
    double perturbation = 0.15;
    std::uint64_t seed = 0;
    PolyNormConfig norm{};
};

struct GapCandidate {
    Polynomial poly;
    double scalar_value = 0.0; // lower bound of ||P||_p
    double vector_value = 0.0; // lower bound of ||P||_{p,S^p_m}
    double gap = 0.0;          // vector - scalar (heuristic)
    BlockVector witness;       // unit vector attaining vector_value
    double twist = 0.0;
    bool certified = false;    // witness re-evaluation reproduces vector_value
};

struct GapSearchResult {
    double p = 4.0;
    int degree = 0;
    int evaluated = 0;
    std::vector<GapCandidate> ranked;
    static constexpr const char* caveat =
        "heuristic, not certified: the scalar value is only a lower bound of ||P||_p, so a positive gap "
        "is not a proof of ||P||_p < ||P||_{p,S^p}";
};

/// Random plus perturbative search for polynomials with a large vector-valued
/// vs scalar gap. Coefficients are normalized to sum |a_k| = 1.
GapSearchResult gap_search(const PExponent& p, int degree, const GapSearchConfig& cfg = {});

/// Witness re-evaluation for a gap candidate: ||P(.) (x) Id witness||_p.
double reevaluate_vector_witness(const Polynomial& poly, const PExponent& p, Eigen::Index n, const BlockVector& witness,
                                 Truncation truncation, double twist);

} // namespace ncm
