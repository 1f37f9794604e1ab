#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "ncmatsaev/matrix_core.hpp"

namespace ncm {

using RealSparse = Eigen::SparseMatrix<double>;

/// Antisymmetric Fock space over R^d. Basis: subsets of {0..d-1} in
/// lexicographic order of their sorted element lists, so the vacuum (empty
/// set) has index 0. e_S = l_{s_1} ... l_{s_m} Omega for s_1 < ... < s_m.
class FockSpace {
public:
    static constexpr int max_generators = 14;

    /// Builds l_0..l_{d-1} and verifies the CAR relations (resource error
    /// unless 1 <= d <= 14, certification error if a relation fails).
    explicit FockSpace(int d);

    [[nodiscard]] int d() const noexcept { return d_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(basis_.size()); }
    [[nodiscard]] const std::vector<std::uint32_t>& basis() const noexcept { return basis_; } // bitmasks
    [[nodiscard]] Eigen::Index index_of(std::uint32_t mask) const { return index_[mask]; }

    [[nodiscard]] const RealSparse& creation(int i) const;
    [[nodiscard]] RealSparse annihilation(int i) const { return creation(i).transpose(); }

    /// l(v) = sum_i v_i l_i.
    [[nodiscard]] RealSparse creation_of(const RealVector& v) const;

    /// Largest CAR residual found while building.
    [[nodiscard]] double car_residual() const noexcept { return car_residual_; }

private:
    int d_;
    std::vector<std::uint32_t> basis_;
    std::vector<Eigen::Index> index_;
    std::vector<RealSparse> creation_;
    double car_residual_ = 0.0;
};

FockSpace build_fock(int d);

/// omega(v) = l(v) + l(v)^*, selfadjoint; omega(v)^2 = |v|^2 Id.
RealSparse omega(const FockSpace& f, const RealVector& v);

/// tau(X) = <Omega, X Omega>.
cplx vacuum_trace(const FockSpace& f, const ComplexMatrix& x);
double vacuum_trace(const FockSpace& f, const RealSparse& x);

/// tau(omega(f_1) ... omega(f_m)) computed by applying the fields to the vacuum.
double field_moment(const FockSpace& f, const std::vector<RealVector>& vectors);

/// Gamma(O) for a real d x d matrix: e_S -> (O e_{s_1}) ^ ... ^ (O e_{s_m}).
/// Dense, so limited to d <= 10.
RealMatrix second_quantization(const FockSpace& f, const RealMatrix& o);

/// Gamma of the mode permutation e_i -> e_{perm[i]}, as a signed permutation
/// matrix. Sparse, so usable for every d.
RealSparse fock_permutation(const FockSpace& f, const std::vector<int>& perm);

struct PairPartition {
    std::vector<std::pair<int, int>> pairs; // 1-based, i < j, sorted by first element
    int crossings = 0;
};

/// Number of pairs of pairs (i, j), (k, l) with i < k < j < l.
int crossing_number(const std::vector<std::pair<int, int>>& pairs);

/// All (2k-1)!! pair partitions of {1..2k} in lexicographic order; k <= 8.
std::vector<PairPartition> enumerate_pair_partitions(int k);

/// sum over pair partitions V of (-1)^{c(V)} prod_{(i,j) in V} <f_i, f_j>.
/// Odd counts give 0.
double wick_trace(const std::vector<RealVector>& vectors);

/// |wick_trace - tau(prod omega(f_i))|.
double wick_vs_matrix_check(const FockSpace& f, const std::vector<RealVector>& vectors);

/// <h_1 (x) ... (x) h_n, k_1 (x) ... (x) k_n>_q = sum_sigma q^{inv(sigma)} prod <h_i, k_sigma(i)>.
/// -1 <= q < 1, n <= 8.
cplx q_inner(const std::vector<ComplexVector>& h, const std::vector<ComplexVector>& k, double q);

/// Gram matrix of a family of simple tensors of a common length.
ComplexMatrix q_gram(const std::vector<std::vector<ComplexVector>>& family, double q);

} // namespace ncm
