#pragma once

#include <random>

namespace ncm {

template <class Rng>
BlockVector random_unit_block_vector(Eigen::Index blocks, Eigen::Index block_dim, const PExponent& p, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix stacked(blocks, block_dim * block_dim);
    for (Eigen::Index c = 0; c < stacked.cols(); ++c) {
        for (Eigen::Index r = 0; r < stacked.rows(); ++r) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            stacked(r, c) = cplx(re, im);
        }
    }
    auto x = BlockVector::from_stacked(std::move(stacked), block_dim);
    const double norm = mixed_norm(x, p);
    if (norm > 0.0) {
        x.stacked() /= norm;
    }
    return x;
}

} // namespace ncm
