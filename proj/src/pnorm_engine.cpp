#include "ncmatsaev/pnorm_engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace ncm {

namespace {

using Index = Eigen::Index;

ComplexMatrix unvec(const ComplexMatrix& stacked, Index row, Index m) {
    ComplexMatrix b(m, m);
    for (Index c = 0; c < m; ++c) {
        for (Index r = 0; r < m; ++r) {
            b(r, c) = stacked(row, c * m + r);
        }
    }
    return b;
}

void vec_into(ComplexMatrix& stacked, Index row, const ComplexMatrix& b) {
    const Index m = b.rows();
    for (Index c = 0; c < m; ++c) {
        for (Index r = 0; r < m; ++r) {
            stacked(row, c * m + r) = b(r, c);
        }
    }
}

RealVector block_schatten_norms(const BlockVector& x, const PExponent& p) {
    RealVector norms(x.size());
    if (x.block_dim() == 1) {
        norms = x.stacked().col(0).cwiseAbs();
        return norms;
    }
    for (Index i = 0; i < x.size(); ++i) {
        norms[i] = schatten_norm(x.block(i), p);
    }
    return norms;
}

} // namespace

BlockVector::BlockVector(Index blocks, Index block_dim)
    : stacked_(ComplexMatrix::Zero(blocks, block_dim * block_dim)), block_dim_(block_dim) {
    require(blocks >= 0 && block_dim >= 1, ErrorKind::input, "BlockVector: invalid dimensions");
}

BlockVector BlockVector::from_blocks(const std::vector<ComplexMatrix>& blocks) {
    require(!blocks.empty(), ErrorKind::input, "BlockVector: no blocks");
    const Index m = blocks.front().rows();
    BlockVector x(static_cast<Index>(blocks.size()), m);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        require(blocks[i].rows() == m && blocks[i].cols() == m, ErrorKind::input,
                "BlockVector: inconsistent block sizes (block " + std::to_string(i) + ")");
        vec_into(x.stacked_, static_cast<Index>(i), blocks[i]);
    }
    return x;
}

BlockVector BlockVector::from_scalars(const ComplexVector& v) {
    BlockVector x(v.size(), 1);
    x.stacked_.col(0) = v;
    return x;
}

BlockVector BlockVector::from_stacked(ComplexMatrix stacked, Index block_dim) {
    require(block_dim >= 1 && stacked.cols() == block_dim * block_dim, ErrorKind::input,
            "BlockVector: stacked width must equal block_dim^2");
    BlockVector x;
    x.stacked_ = std::move(stacked);
    x.block_dim_ = block_dim;
    return x;
}

ComplexMatrix BlockVector::block(Index i) const { return unvec(stacked_, i, block_dim_); }

void BlockVector::set_block(Index i, const ComplexMatrix& b) {
    require(b.rows() == block_dim_ && b.cols() == block_dim_, ErrorKind::input, "BlockVector: block size mismatch");
    vec_into(stacked_, i, b);
}

ComplexVector BlockVector::as_scalars() const {
    require(block_dim_ == 1, ErrorKind::input, "BlockVector: scalar view needs block_dim 1");
    return stacked_.col(0);
}

double mixed_norm(const BlockVector& x, const PExponent& p) {
    return lp_norm_of_magnitudes(block_schatten_norms(x, p), p);
}

namespace {

// J_p(x) together with ||x||, sharing one SVD per block.
BlockVector duality_with_norm(const BlockVector& x, const PExponent& p, double& norm) {
    require(p.is_interior(), ErrorKind::routing, "mixed_duality_map requires 1 < p < inf");
    const Index m = x.block_dim();
    BlockVector w(x.size(), m);
    if (m == 1) {
        norm = lp_norm(x.stacked().col(0), p);
        require(norm > 0.0, ErrorKind::undefined_direction, "duality map of the zero block vector");
        w.stacked().col(0) = duality_map_vector(x.stacked().col(0), p);
        return w;
    }
    std::vector<SingularSpectrum> spectra;
    spectra.reserve(static_cast<std::size_t>(x.size()));
    RealVector block_norms(x.size());
    for (Index i = 0; i < x.size(); ++i) {
        spectra.push_back(singular_values(x.block(i)));
        block_norms[i] = lp_norm_of_magnitudes(spectra.back().values, p);
    }
    norm = lp_norm_of_magnitudes(block_norms, p);
    require(norm > 0.0, ErrorKind::undefined_direction, "duality map of the zero block vector");
    for (Index i = 0; i < x.size(); ++i) {
        const auto& s = spectra[static_cast<std::size_t>(i)];
        RealVector powered(s.values.size());
        for (Index k = 0; k < s.values.size(); ++k) {
            powered[k] = std::pow(s.values[k] / norm, p.value() - 1.0);
        }
        w.set_block(i, s.left.leftCols(powered.size()) * powered.asDiagonal() *
                           s.right.leftCols(powered.size()).adjoint());
    }
    return w;
}

} // namespace

BlockVector mixed_duality_map(const BlockVector& x, const PExponent& p) {
    double norm = 0.0;
    return duality_with_norm(x, p, norm);
}

double real_pairing(const BlockVector& w, const BlockVector& x) {
    require(w.stacked().rows() == x.stacked().rows() && w.stacked().cols() == x.stacked().cols(), ErrorKind::input,
            "pairing: shape mismatch");
    return (w.stacked().conjugate().cwiseProduct(x.stacked())).sum().real();
}

BlockOperator::BlockOperator(ComplexMatrix coefficients, Index block_dim)
    : coeffs_(std::move(coefficients)), block_dim_(block_dim) {
    require(block_dim_ >= 1, ErrorKind::input, "BlockOperator: block_dim must be >= 1");
    require_finite(coeffs_, "BlockOperator");
    const auto nonzeros = (coeffs_.array() != cplx{}).count();
    if (coeffs_.size() >= 64 && 4 * nonzeros <= coeffs_.size()) {
        use_sparse_ = true;
        sparse_ = coeffs_.sparseView();
        sparse_adjoint_ = sparse_.adjoint();
    }
}

BlockVector BlockOperator::apply(const BlockVector& x) const {
    require(x.size() == coeffs_.cols() && x.block_dim() == block_dim_, ErrorKind::input,
            "BlockOperator: input shape mismatch");
    if (use_sparse_) {
        return BlockVector::from_stacked(sparse_ * x.stacked(), block_dim_);
    }
    return BlockVector::from_stacked(coeffs_ * x.stacked(), block_dim_);
}

BlockVector BlockOperator::apply_adjoint(const BlockVector& y) const {
    require(y.size() == coeffs_.rows() && y.block_dim() == block_dim_, ErrorKind::input,
            "BlockOperator: adjoint input shape mismatch");
    if (use_sparse_) {
        return BlockVector::from_stacked(sparse_adjoint_ * y.stacked(), block_dim_);
    }
    return BlockVector::from_stacked(coeffs_.adjoint() * y.stacked(), block_dim_);
}

namespace {

struct RunResult {
    double value = 0.0;
    BlockVector witness;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

RunResult power_run(const BlockMap& op, const PExponent& p, const PExponent& q, const PNormConfig& cfg,
                    BlockVector start) {
    RunResult run;
    run.witness = std::move(start);
    const BlockVector image = op.apply(run.witness);
    if (image.is_zero()) {
        run.history.push_back(0.0);
        return run;
    }
    BlockVector functional = duality_with_norm(image, p, run.value);
    run.history.push_back(run.value);
    for (int it = 1; it <= cfg.max_iters; ++it) {
        const BlockVector pulled = op.apply_adjoint(functional);
        if (pulled.is_zero()) {
            break;
        }
        double pulled_norm = 0.0;
        // J_{p*} of a nonzero vector is unit in l^p up to rounding.
        BlockVector next = duality_with_norm(pulled, q, pulled_norm);
        const BlockVector next_image = op.apply(next);
        run.iterations = it;
        if (next_image.is_zero()) {
            break;
        }
        double next_value = 0.0;
        BlockVector next_functional = duality_with_norm(next_image, p, next_value);
        if (next_value < run.value) {
            // Only rounding can decrease the value; keep the better iterate.
            run.converged = run.value - next_value <= 1e-12 * std::max(1.0, run.value);
            break;
        }
        const double step = next_value - run.value;
        run.value = next_value;
        run.witness = std::move(next);
        functional = std::move(next_functional);
        run.history.push_back(run.value);
        if (step <= cfg.tol * std::max(1.0, run.value)) {
            run.converged = true;
            break;
        }
    }
    return run;
}

} // namespace

PNormEstimate estimate_pnorm(const BlockMap& op, const PExponent& p, const PNormConfig& config) {
    require(p.is_interior(), ErrorKind::routing,
            "estimate_pnorm handles 1 < p < inf; use exact_pnorm_special for p in {1, inf}");
    require(config.restarts >= 0 && config.max_iters >= 0 && config.restarts + config.starts.size() >= 1,
            ErrorKind::input, "estimate_pnorm: invalid config");
    const PExponent q = p.conjugate();

    for (const auto& s : config.starts) {
        require(s.size() == op.input_blocks() && s.block_dim() == op.block_dim(), ErrorKind::input,
                "estimate_pnorm: start vector shape mismatch");
    }

    PNormEstimate best;
    bool have_best = false;
    const int total = static_cast<int>(config.starts.size()) + config.restarts;
    for (int r = 0; r < total; ++r) {
        BlockVector start;
        const auto warm = static_cast<std::size_t>(r);
        if (warm < config.starts.size()) {
            start = config.starts[warm];
            const double norm = mixed_norm(start, p);
            if (norm == 0.0) {
                continue;
            }
            start.stacked() /= norm;
        } else {
            std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(r - static_cast<int>(config.starts.size())));
            start = random_unit_block_vector(op.input_blocks(), op.block_dim(), p, rng);
        }
        RunResult run = power_run(op, p, q, config, std::move(start));
        ++best.restarts_used;
        bool take = !have_best;
        if (have_best) {
            const double tie_band = 1e-12 * std::max(1.0, best.value);
            if (run.value > best.value + tie_band) {
                take = true;
            } else if (std::abs(run.value - best.value) <= tie_band && run.iterations < best.iterations) {
                take = true;
            }
        }
        if (take) {
            have_best = true;
            best.value = run.value;
            best.witness = std::move(run.witness);
            best.iterations = run.iterations;
            best.converged = run.converged;
            best.history = std::move(run.history);
        }
        if (config.known_upper_bound && best.value >= *config.known_upper_bound * (1.0 - 1e-12)) {
            break;
        }
    }
    require(have_best, ErrorKind::input, "estimate_pnorm: every start vector is zero");
    if (best.value == 0.0) {
        best.zero_operator = true;
        best.converged = true;
    }
    // The certificate: value is recomputed from the exactly normalized witness.
    best.witness.stacked() /= mixed_norm(best.witness, p);
    best.value = mixed_norm(op.apply(best.witness), p);
    return best;
}

double exact_pnorm_special(const ComplexMatrix& t, const PExponent& p) {
    require_finite(t, "exact_pnorm_special");
    if (t.size() == 0) {
        return 0.0;
    }
    if (p.is_one()) {
        return t.cwiseAbs().colwise().sum().maxCoeff();
    }
    if (p.is_infinite()) {
        return t.cwiseAbs().rowwise().sum().maxCoeff();
    }
    if (p.is_two()) {
        return singular_values(t).values[0];
    }
    fail(ErrorKind::routing, "exact_pnorm_special handles p in {1, 2, inf} only");
}

namespace {

double ratio(const BlockMap& op, const BlockVector& x, const PExponent& p) {
    const double nx = mixed_norm(x, p);
    return nx == 0.0 ? 0.0 : mixed_norm(op.apply(x), p) / nx;
}

double local_ascent(const BlockMap& op, BlockVector x, const PExponent& p) {
    double best = ratio(op, x, p);
    const double scale = x.stacked().cwiseAbs().maxCoeff();
    for (double step = 0.25 * scale; step > 1e-10 * scale; step *= 0.5) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (Eigen::Index k = 0; k < x.stacked().size(); ++k) {
                for (const cplx dir : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
                    const cplx saved = x.stacked()(k);
                    x.stacked()(k) = saved + step * dir;
                    const double value = ratio(op, x, p);
                    if (value > best) {
                        best = value;
                        improved = true;
                    } else {
                        x.stacked()(k) = saved;
                    }
                }
            }
        }
    }
    return best;
}

} // namespace

double sample_lower_bound(const BlockMap& op, const PExponent& p, const SampleConfig& config) {
    require(config.samples >= 1, ErrorKind::input, "sample_lower_bound: samples must be >= 1");
    std::mt19937_64 rng(config.seed);
    const auto keep = static_cast<std::size_t>(std::max(1, config.refine_from));
    std::vector<std::pair<double, BlockVector>> top;
    double best = 0.0;
    for (int s = 0; s < config.samples; ++s) {
        BlockVector x = random_unit_block_vector(op.input_blocks(), op.block_dim(), p, rng);
        const double value = mixed_norm(op.apply(x), p);
        best = std::max(best, value);
        if (!config.refine) {
            continue;
        }
        if (top.size() < keep || value > top.back().first) {
            top.emplace_back(value, std::move(x));
            std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
            if (top.size() > keep) {
                top.pop_back();
            }
        }
    }
    for (auto& [value, x] : top) {
        best = std::max(best, local_ascent(op, std::move(x), p));
    }
    return best;
}

} // namespace ncm
