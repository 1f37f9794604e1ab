#include "ncmatsaev/fock_clifford.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace ncm {

namespace {

void lex_subsets(int d, int next, std::uint32_t mask, std::vector<std::uint32_t>& out) {
    out.push_back(mask);
    for (int i = next; i < d; ++i) {
        lex_subsets(d, i + 1, mask | (1u << i), out);
    }
}

double sparse_max_abs(const RealSparse& m) {
    double top = 0.0;
    for (int k = 0; k < m.outerSize(); ++k) {
        for (RealSparse::InnerIterator it(m, k); it; ++it) {
            top = std::max(top, std::abs(it.value()));
        }
    }
    return top;
}

void check_dims(const FockSpace& f, const RealVector& v) {
    require(v.size() == f.d(), ErrorKind::input,
            "vector of length " + std::to_string(v.size()) + " does not fit a Fock space over R^" + std::to_string(f.d()));
}

} // namespace

FockSpace::FockSpace(int d) : d_(d) {
    require(d >= 1 && d <= max_generators, ErrorKind::resource,
            "Fock space needs 1 <= d <= " + std::to_string(max_generators) + ", got " + std::to_string(d));
    lex_subsets(d, 0, 0u, basis_);
    index_.assign(std::size_t{1} << d, 0);
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        index_[basis_[k]] = static_cast<Eigen::Index>(k);
    }
    const auto n = dim();
    for (int i = 0; i < d; ++i) {
        std::vector<Eigen::Triplet<double>> entries;
        const std::uint32_t bit = 1u << i;
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            const std::uint32_t s = basis_[k];
            if ((s & bit) != 0u) {
                continue;
            }
            // moving e_i past the smaller occupied modes
            const int below = std::popcount(s & (bit - 1u));
            entries.emplace_back(index_[s | bit], static_cast<Eigen::Index>(k), below % 2 == 0 ? 1.0 : -1.0);
        }
        RealSparse l(n, n);
        l.setFromTriplets(entries.begin(), entries.end());
        creation_.push_back(std::move(l));
    }
    RealSparse id(n, n);
    id.setIdentity();
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            const RealSparse& li = creation_[static_cast<std::size_t>(i)];
            const RealSparse& lj = creation_[static_cast<std::size_t>(j)];
            const RealSparse anti = li * lj + lj * li;
            RealSparse mixed = RealSparse(li.transpose()) * lj + lj * RealSparse(li.transpose());
            if (i == j) {
                mixed -= id;
            }
            car_residual_ = std::max({car_residual_, sparse_max_abs(anti), sparse_max_abs(mixed)});
        }
    }
    require(car_residual_ <= 1e-12, ErrorKind::certification, "CAR relations fail for the Fock realization");
}

const RealSparse& FockSpace::creation(int i) const {
    require(i >= 0 && i < d_, ErrorKind::input, "creation operator index out of range");
    return creation_[static_cast<std::size_t>(i)];
}

RealSparse FockSpace::creation_of(const RealVector& v) const {
    check_dims(*this, v);
    RealSparse out(dim(), dim());
    for (int i = 0; i < d_; ++i) {
        if (v[i] != 0.0) {
            out += v[i] * creation_[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

FockSpace build_fock(int d) { return FockSpace(d); }

RealSparse omega(const FockSpace& f, const RealVector& v) {
    const RealSparse l = f.creation_of(v);
    return l + RealSparse(l.transpose());
}

cplx vacuum_trace(const FockSpace& f, const ComplexMatrix& x) {
    require(x.rows() == f.dim() && x.cols() == f.dim(), ErrorKind::input, "vacuum_trace: dimension mismatch");
    return x(0, 0);
}

double vacuum_trace(const FockSpace& f, const RealSparse& x) {
    require(x.rows() == f.dim() && x.cols() == f.dim(), ErrorKind::input, "vacuum_trace: dimension mismatch");
    return x.coeff(0, 0);
}

double field_moment(const FockSpace& f, const std::vector<RealVector>& vectors) {
    RealVector state = RealVector::Zero(f.dim());
    state[0] = 1.0;
    for (auto it = vectors.rbegin(); it != vectors.rend(); ++it) {
        state = omega(f, *it) * state;
    }
    return state[0];
}

RealMatrix second_quantization(const FockSpace& f, const RealMatrix& o) {
    require(o.rows() == f.d() && o.cols() == f.d(), ErrorKind::input, "second_quantization: matrix must be d x d");
    require(f.d() <= 10, ErrorKind::resource, "second_quantization is dense; d <= 10");
    std::vector<RealSparse> images;
    for (int i = 0; i < f.d(); ++i) {
        images.push_back(f.creation_of(o.col(i)));
    }
    RealMatrix g(f.dim(), f.dim());
    for (Eigen::Index k = 0; k < f.dim(); ++k) {
        const std::uint32_t s = f.basis()[static_cast<std::size_t>(k)];
        RealVector state = RealVector::Zero(f.dim());
        state[0] = 1.0;
        for (int i = f.d() - 1; i >= 0; --i) {
            if ((s >> i) & 1u) {
                state = images[static_cast<std::size_t>(i)] * state;
            }
        }
        g.col(k) = state;
    }
    return g;
}

RealSparse fock_permutation(const FockSpace& f, const std::vector<int>& perm) {
    require(static_cast<int>(perm.size()) == f.d(), ErrorKind::input, "fock_permutation: wrong length");
    std::vector<bool> seen(perm.size(), false);
    for (int p : perm) {
        require(p >= 0 && p < f.d() && !seen[static_cast<std::size_t>(p)], ErrorKind::input,
                "fock_permutation: not a permutation");
        seen[static_cast<std::size_t>(p)] = true;
    }
    std::vector<Eigen::Triplet<double>> entries;
    for (Eigen::Index k = 0; k < f.dim(); ++k) {
        const std::uint32_t s = f.basis()[static_cast<std::size_t>(k)];
        std::vector<int> image;
        for (int i = 0; i < f.d(); ++i) {
            if ((s >> i) & 1u) {
                image.push_back(perm[static_cast<std::size_t>(i)]);
            }
        }
        int inversions = 0;
        std::uint32_t target = 0;
        for (std::size_t a = 0; a < image.size(); ++a) {
            target |= 1u << image[a];
            for (std::size_t b = a + 1; b < image.size(); ++b) {
                inversions += image[a] > image[b] ? 1 : 0;
            }
        }
        entries.emplace_back(f.index_of(target), k, inversions % 2 == 0 ? 1.0 : -1.0);
    }
    RealSparse g(f.dim(), f.dim());
    g.setFromTriplets(entries.begin(), entries.end());
    return g;
}

int crossing_number(const std::vector<std::pair<int, int>>& pairs) {
    int c = 0;
    for (const auto& [i, j] : pairs) {
        for (const auto& [k, l] : pairs) {
            if (i < k && k < j && j < l) {
                ++c;
            }
        }
    }
    return c;
}

namespace {

void extend_partition(std::vector<bool>& used, std::vector<std::pair<int, int>>& current, int n,
                      std::vector<PairPartition>& out) {
    const auto first = std::find(used.begin(), used.end(), false);
    if (first == used.end()) {
        out.push_back({current, crossing_number(current)});
        return;
    }
    const int a = static_cast<int>(first - used.begin());
    used[static_cast<std::size_t>(a)] = true;
    for (int b = a + 1; b < n; ++b) {
        if (used[static_cast<std::size_t>(b)]) {
            continue;
        }
        used[static_cast<std::size_t>(b)] = true;
        current.emplace_back(a + 1, b + 1);
        extend_partition(used, current, n, out);
        current.pop_back();
        used[static_cast<std::size_t>(b)] = false;
    }
    used[static_cast<std::size_t>(a)] = false;
}

} // namespace

std::vector<PairPartition> enumerate_pair_partitions(int k) {
    require(k >= 1, ErrorKind::input, "pair partitions need k >= 1");
    require(k <= 8, ErrorKind::resource, "pair partitions of more than 16 points are not enumerated");
    std::vector<PairPartition> out;
    std::vector<bool> used(static_cast<std::size_t>(2 * k), false);
    std::vector<std::pair<int, int>> current;
    extend_partition(used, current, 2 * k, out);
    return out;
}

double wick_trace(const std::vector<RealVector>& vectors) {
    if (vectors.empty()) {
        return 1.0;
    }
    for (const auto& v : vectors) {
        require(v.size() == vectors.front().size(), ErrorKind::input, "wick_trace: vectors of different lengths");
    }
    if (vectors.size() % 2 == 1) {
        return 0.0;
    }
    const int m = static_cast<int>(vectors.size());
    RealMatrix gram(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            gram(i, j) = vectors[static_cast<std::size_t>(i)].dot(vectors[static_cast<std::size_t>(j)]);
        }
    }
    double total = 0.0;
    for (const auto& v : enumerate_pair_partitions(m / 2)) {
        double term = v.crossings % 2 == 0 ? 1.0 : -1.0;
        for (const auto& [i, j] : v.pairs) {
            term *= gram(i - 1, j - 1);
        }
        total += term;
    }
    return total;
}

double wick_vs_matrix_check(const FockSpace& f, const std::vector<RealVector>& vectors) {
    for (const auto& v : vectors) {
        check_dims(f, v);
    }
    return std::abs(wick_trace(vectors) - field_moment(f, vectors));
}

cplx q_inner(const std::vector<ComplexVector>& h, const std::vector<ComplexVector>& k, double q) {
    require(q >= -1.0 && q < 1.0, ErrorKind::input, "q must satisfy -1 <= q < 1");
    require(h.size() == k.size() && !h.empty(), ErrorKind::input, "q_inner: tensors of different lengths");
    require(h.size() <= 8, ErrorKind::resource, "q_inner sums over n! permutations; n <= 8");
    const std::size_t n = h.size();
    for (std::size_t i = 0; i < n; ++i) {
        require(h[i].size() == h.front().size() && k[i].size() == h.front().size(), ErrorKind::input,
                "q_inner: vectors of different dimensions");
    }
    ComplexMatrix pair(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            pair(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h[i].dot(k[j]);
        }
    }
    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    cplx total{};
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                inversions += sigma[i] > sigma[j] ? 1 : 0;
            }
        }
        cplx term = std::pow(q, inversions);
        for (std::size_t i = 0; i < n; ++i) {
            term *= pair(static_cast<Eigen::Index>(i), sigma[i]);
        }
        total += term;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

ComplexMatrix q_gram(const std::vector<std::vector<ComplexVector>>& family, double q) {
    const auto size = static_cast<Eigen::Index>(family.size());
    ComplexMatrix g(size, size);
    for (Eigen::Index a = 0; a < size; ++a) {
        for (Eigen::Index b = 0; b < size; ++b) {
            g(a, b) = q_inner(family[static_cast<std::size_t>(a)], family[static_cast<std::size_t>(b)], q);
        }
    }
    return g;
}

} // namespace ncm
