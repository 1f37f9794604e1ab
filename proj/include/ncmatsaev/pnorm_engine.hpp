#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "ncmatsaev/matrix_core.hpp"

namespace ncm {

/// Element of l^p_n(S^p_m): n blocks, each an m x m complex matrix.
///
/// Blocks are stored as the rows of an n x m^2 matrix (each row is the
/// column-major vectorization of one block), so an operator with scalar
/// coefficients acts on all blocks at once by a single matrix product.
class BlockVector {
public:
    BlockVector() = default;
    BlockVector(Eigen::Index blocks, Eigen::Index block_dim);

    static BlockVector from_blocks(const std::vector<ComplexMatrix>& blocks);
    static BlockVector from_scalars(const ComplexVector& v);
    static BlockVector from_stacked(ComplexMatrix stacked, Eigen::Index block_dim);

    [[nodiscard]] Eigen::Index size() const noexcept { return stacked_.rows(); }
    [[nodiscard]] Eigen::Index block_dim() const noexcept { return block_dim_; }

    [[nodiscard]] ComplexMatrix block(Eigen::Index i) const;
    void set_block(Eigen::Index i, const ComplexMatrix& b);

    [[nodiscard]] const ComplexMatrix& stacked() const noexcept { return stacked_; }
    [[nodiscard]] ComplexMatrix& stacked() noexcept { return stacked_; }

    /// Scalar view, only valid when block_dim() == 1.
    [[nodiscard]] ComplexVector as_scalars() const;

    [[nodiscard]] bool is_zero() const { return stacked_.isZero(0.0); }

private:
    ComplexMatrix stacked_;
    Eigen::Index block_dim_ = 1;
};

/// (sum_i ||X_i||_{S^p}^p)^{1/p}; max over blocks for p = inf.
double mixed_norm(const BlockVector& x, const PExponent& p);

/// Norm-attaining functional of x in l^p(S^p): unit in l^{p*}(S^{p*}) and
/// Re <w, x> = ||x||. Zero blocks map to zero blocks.
BlockVector mixed_duality_map(const BlockVector& x, const PExponent& p);

/// Real part of the trace pairing sum_i Tr(W_i^* X_i).
double real_pairing(const BlockVector& w, const BlockVector& x);

/// Linear map between block spaces of a fixed block dimension. The adjoint is
/// taken with respect to the trace pairing.
class BlockMap {
public:
    virtual ~BlockMap() = default;
    [[nodiscard]] virtual Eigen::Index input_blocks() const = 0;
    [[nodiscard]] virtual Eigen::Index output_blocks() const = 0;
    [[nodiscard]] virtual Eigen::Index block_dim() const = 0;
    [[nodiscard]] virtual BlockVector apply(const BlockVector& x) const = 0;
    [[nodiscard]] virtual BlockVector apply_adjoint(const BlockVector& y) const = 0;
};

/// T (x) Id_{S^p_m}: (T x)_i = sum_j t_ij X_j.
class BlockOperator final : public BlockMap {
public:
    /// Coefficient matrices with few nonzeros (banded shift polynomials) are
    /// applied through a sparse copy.
    explicit BlockOperator(ComplexMatrix coefficients, Eigen::Index block_dim = 1);

    [[nodiscard]] const ComplexMatrix& coefficients() const noexcept { return coeffs_; }
    [[nodiscard]] Eigen::Index input_blocks() const override { return coeffs_.cols(); }
    [[nodiscard]] Eigen::Index output_blocks() const override { return coeffs_.rows(); }
    [[nodiscard]] Eigen::Index block_dim() const override { return block_dim_; }
    [[nodiscard]] BlockVector apply(const BlockVector& x) const override;
    [[nodiscard]] BlockVector apply_adjoint(const BlockVector& y) const override;

private:
    ComplexMatrix coeffs_;
    Eigen::Index block_dim_;
    bool use_sparse_ = false;
    Eigen::SparseMatrix<cplx> sparse_;
    Eigen::SparseMatrix<cplx> sparse_adjoint_;
};

struct PNormConfig {
    int restarts = 32;
    int max_iters = 500;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    /// Deterministic starting vectors tried before the random restarts; each
    /// counts as one restart.
    std::vector<BlockVector> starts{};
    /// A proven upper bound for ||T||. Once a run reaches it (relative 1e-12)
    /// no later restart can improve the value and the search stops.
    std::optional<double> known_upper_bound{};
};

struct PNormEstimate {
    double value = 0.0;
    BlockVector witness;
    int iterations = 0;
    bool converged = false;
    int restarts_used = 0;
    bool zero_operator = false;
    std::vector<double> history; // value sequence of the best run
};

/// Nonlinear power iteration x <- J_{p*}(T^* J_p(T x)) from the supplied
/// starts and then Gaussian random starts; random restart i is seeded with
/// seed + i. The reported value is always
/// ||T witness|| for a unit witness, hence a lower bound for ||T||.
PNormEstimate estimate_pnorm(const BlockMap& op, const PExponent& p, const PNormConfig& config = {});

/// Closed forms for scalar matrices: max column sum (p=1), top singular value
/// (p=2), max row sum (p=inf).
double exact_pnorm_special(const ComplexMatrix& t, const PExponent& p);

struct SampleConfig {
    int samples = 100000;
    bool refine = true;
    int refine_from = 8; // best samples used as seeds of the local ascent
    std::uint64_t seed = 0;
};

/// Brute-force lower bound: max of ||T x|| over normalized Gaussian block
/// vectors, optionally followed by coordinate-wise local ascent.
double sample_lower_bound(const BlockMap& op, const PExponent& p, const SampleConfig& config = {});

/// Standard complex Gaussian block vector normalized to unit mixed norm.
template <class Rng>
BlockVector random_unit_block_vector(Eigen::Index blocks, Eigen::Index block_dim, const PExponent& p, Rng& rng);

} // namespace ncm

#include "ncmatsaev/detail/random_block.hpp"
