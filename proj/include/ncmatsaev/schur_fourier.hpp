#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncmatsaev/pnorm_engine.hpp"

namespace ncm {

/// M_A(B) = [a_ij b_ij].
ComplexMatrix schur_apply(const RealMatrix& a, const ComplexMatrix& b);

/// M_A acting on a single n x n block, for the p-norm engine.
class SchurMap final : public BlockMap {
public:
    explicit SchurMap(RealMatrix a);
    [[nodiscard]] Eigen::Index input_blocks() const override { return 1; }
    [[nodiscard]] Eigen::Index output_blocks() const override { return 1; }
    [[nodiscard]] Eigen::Index block_dim() const override { return a_.rows(); }
    [[nodiscard]] BlockVector apply(const BlockVector& x) const override;
    [[nodiscard]] BlockVector apply_adjoint(const BlockVector& y) const override { return apply(y); }

private:
    RealMatrix a_;
    ComplexMatrix vec_weights_;
};

/// Entrywise power A^{o k}, so that (M_A)^k = M_{A^{o k}}.
RealMatrix schur_power(const RealMatrix& a, int k);

/// e_1..e_n as the columns of an r x n matrix with <e_i, e_j> = a_ij.
struct GramFactorization {
    RealMatrix vectors;
    Eigen::Index rank = 0;
    double residual = 0.0; // max |<e_i, e_j> - a_ij|
};

/// Symmetric eigendecomposition; eigenvalues <= cutoff * lambda_max are the
/// kernel and dropped. Certification error if A is not PSD.
GramFactorization gram_factorize(const RealMatrix& a, double cutoff = 1e-10);

struct SchurCertificate {
    bool unital = false;     // diagonal all ones (1e-12)
    bool cp = false;         // A positive semidefinite
    bool selfadjoint = false; // A real, i.e. M_A selfadjoint for the trace pairing
    std::optional<GramFactorization> witness; // unit vectors with a_ij = <e_i, e_j>, when unital and cp
};

SchurCertificate certify(const ComplexMatrix& a);
SchurCertificate certify(const RealMatrix& a);

/// [[<h_i,h_j>, <h_i,k_j>], [<k_i,h_j>, <k_i,k_j>]] for unit vectors (the
/// columns of h and k). The result is unital and CP, and its upper right
/// block is the contractive multiplier a_ij = <h_i, k_j>.
struct TwoByTwoEmbedding {
    RealMatrix f;
    SchurCertificate certificate;
};
TwoByTwoEmbedding embed_two_by_two(const RealMatrix& h, const RealMatrix& k);

/// Finite group on {0..N-1}, 0 the identity, table(g, h) = gh.
class FiniteGroup {
public:
    /// Checks closure, identity 0, inverses and associativity (axiom error).
    explicit FiniteGroup(std::vector<std::vector<int>> table, std::string name = "table");

    [[nodiscard]] int order() const noexcept { return static_cast<int>(table_.size()); }
    [[nodiscard]] int mul(int g, int h) const { return table_[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)]; }
    [[nodiscard]] int inv(int g) const { return inverse_[static_cast<std::size_t>(g)]; }
    [[nodiscard]] const std::vector<std::vector<int>>& table() const noexcept { return table_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    std::string name_;
};

FiniteGroup cyclic_group(int n);
/// Dihedral group of order 2n; element r^a s^b has index a + n b.
FiniteGroup dihedral_group(int n);

/// Left regular representation: lambda(g) e_h = e_{gh}.
RealMatrix regular_rep(const FiniteGroup& g, int element);

/// Canonical trace of the group algebra on C^N: <delta_e, X delta_e>.
cplx group_trace(const FiniteGroup& g, const ComplexMatrix& x);

/// sum_g x_g lambda(g) -> sum_g t_g x_g lambda(g).
ComplexVector fourier_apply(const FiniteGroup& g, const RealVector& t, const ComplexVector& x);

/// Coefficients of a group-algebra element X = sum_g x_g lambda(g) given as a matrix.
ComplexVector group_coefficients(const FiniteGroup& g, const ComplexMatrix& x);

/// a_{g,h} = t_{g h^{-1}}.
RealMatrix herz_schur_transfer(const FiniteGroup& g, const RealVector& t);

/// [t_{g^{-1} h}], the Gram matrix of the symbol.
RealMatrix symbol_gram(const FiniteGroup& g, const RealVector& t);

} // namespace ncm
