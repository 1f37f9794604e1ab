#include "ncmatsaev/schur_fourier.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace ncm {

ComplexMatrix schur_apply(const RealMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::input, "schur_apply: shape mismatch");
    return b.cwiseProduct(a.cast<cplx>());
}

SchurMap::SchurMap(RealMatrix a) : a_(std::move(a)) {
    require(a_.rows() == a_.cols() && a_.rows() >= 1, ErrorKind::input, "SchurMap: square matrix required");
    // row i of the stacked layout holds vec(block), column-major
    vec_weights_ = Eigen::Map<const RealMatrix>(a_.data(), 1, a_.size()).cast<cplx>();
}

BlockVector SchurMap::apply(const BlockVector& x) const {
    require(x.size() == 1 && x.block_dim() == a_.rows(), ErrorKind::input, "SchurMap: shape mismatch");
    return BlockVector::from_stacked(x.stacked().cwiseProduct(vec_weights_), a_.rows());
}

RealMatrix schur_power(const RealMatrix& a, int k) {
    require(k >= 0, ErrorKind::input, "schur_power: k must be >= 0");
    RealMatrix out = RealMatrix::Ones(a.rows(), a.cols());
    for (int i = 0; i < k; ++i) {
        out = out.cwiseProduct(a);
    }
    return out;
}

GramFactorization gram_factorize(const RealMatrix& a, double cutoff) {
    require(a.rows() == a.cols(), ErrorKind::input, "gram_factorize: matrix must be square");
    require(is_psd(a), ErrorKind::certification, "gram_factorize: matrix is not positive semidefinite");
    const RealMatrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym);
    const RealVector& lambda = es.eigenvalues(); // increasing
    const double top = lambda.size() > 0 ? lambda.maxCoeff() : 0.0;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = lambda.size(); k-- > 0;) {
        if (top > 0.0 && lambda[k] > cutoff * top) {
            kept.push_back(k);
        }
    }
    GramFactorization out;
    out.rank = static_cast<Eigen::Index>(kept.size());
    out.vectors = RealMatrix::Zero(out.rank, a.cols());
    for (Eigen::Index r = 0; r < out.rank; ++r) {
        const Eigen::Index k = kept[static_cast<std::size_t>(r)];
        out.vectors.row(r) = std::sqrt(lambda[k]) * es.eigenvectors().col(k).transpose();
    }
    out.residual = a.size() == 0 ? 0.0 : (out.vectors.transpose() * out.vectors - a).cwiseAbs().maxCoeff();
    return out;
}

SchurCertificate certify(const ComplexMatrix& a) {
    require(a.rows() == a.cols(), ErrorKind::input, "certify: matrix must be square");
    SchurCertificate c;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    c.selfadjoint = a.imag().cwiseAbs().maxCoeff() <= 1e-12 * scale;
    c.unital = (a.diagonal().array() - cplx(1.0)).abs().maxCoeff() <= 1e-12;
    c.cp = is_psd(a);
    if (c.unital && c.cp && c.selfadjoint) {
        c.witness = gram_factorize(a.real());
    }
    return c;
}

SchurCertificate certify(const RealMatrix& a) { return certify(ComplexMatrix(a.cast<cplx>())); }

TwoByTwoEmbedding embed_two_by_two(const RealMatrix& h, const RealMatrix& k) {
    require(h.rows() == k.rows() && h.cols() == k.cols(), ErrorKind::input,
            "embed_two_by_two: h and k must hold the same number of vectors of one dimension");
    for (Eigen::Index i = 0; i < h.cols(); ++i) {
        require(std::abs(h.col(i).norm() - 1.0) <= 1e-10 && std::abs(k.col(i).norm() - 1.0) <= 1e-10,
                ErrorKind::precondition, "embed_two_by_two: vectors h_i and k_i must have norm 1");
    }
    RealMatrix stacked(h.rows(), 2 * h.cols());
    stacked << h, k;
    TwoByTwoEmbedding out;
    out.f = stacked.transpose() * stacked;
    out.certificate = certify(out.f);
    require(out.certificate.unital && out.certificate.cp, ErrorKind::certification,
            "embed_two_by_two: embedded multiplier failed certification");
    return out;
}

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table, std::string name)
    : table_(std::move(table)), name_(std::move(name)) {
    const int n = static_cast<int>(table_.size());
    require(n >= 1, ErrorKind::axiom, "group table is empty");
    for (const auto& row : table_) {
        require(static_cast<int>(row.size()) == n, ErrorKind::axiom, "group table must be square");
        for (const int x : row) {
            require(x >= 0 && x < n, ErrorKind::axiom, "group table entry outside 0..N-1");
        }
    }
    for (int g = 0; g < n; ++g) {
        require(mul(0, g) == g && mul(g, 0) == g, ErrorKind::axiom, "element 0 is not the identity");
    }
    inverse_.assign(static_cast<std::size_t>(n), -1);
    for (int g = 0; g < n; ++g) {
        for (int h = 0; h < n; ++h) {
            if (mul(g, h) == 0) {
                require(mul(h, g) == 0, ErrorKind::axiom, "left and right inverses differ");
                inverse_[static_cast<std::size_t>(g)] = h;
            }
        }
        require(inverse_[static_cast<std::size_t>(g)] >= 0, ErrorKind::axiom,
                "element " + std::to_string(g) + " has no inverse");
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                require(mul(mul(a, b), c) == mul(a, mul(b, c)), ErrorKind::axiom,
                        "table is not associative at (" + std::to_string(a) + ", " + std::to_string(b) + ", " +
                            std::to_string(c) + ")");
            }
        }
    }
}

FiniteGroup cyclic_group(int n) {
    require(n >= 1, ErrorKind::input, "cyclic group needs n >= 1");
    std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
        }
    }
    return FiniteGroup(std::move(t), "cyclic " + std::to_string(n));
}

FiniteGroup dihedral_group(int n) {
    require(n >= 1, ErrorKind::input, "dihedral group needs n >= 1");
    const int order = 2 * n;
    std::vector<std::vector<int>> t(static_cast<std::size_t>(order), std::vector<int>(static_cast<std::size_t>(order)));
    for (int x = 0; x < order; ++x) {
        for (int y = 0; y < order; ++y) {
            const int a = x % n;
            const int b = x / n;
            const int c = y % n;
            const int d = y / n;
            // r^a s^b r^c s^d = r^{a + (-1)^b c} s^{b + d}
            const int rot = ((a + (b == 0 ? c : -c)) % n + n) % n;
            t[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = rot + n * ((b + d) % 2);
        }
    }
    return FiniteGroup(std::move(t), "dihedral " + std::to_string(n));
}

RealMatrix regular_rep(const FiniteGroup& g, int element) {
    require(element >= 0 && element < g.order(), ErrorKind::input, "group element out of range");
    RealMatrix m = RealMatrix::Zero(g.order(), g.order());
    for (int h = 0; h < g.order(); ++h) {
        m(g.mul(element, h), h) = 1.0;
    }
    return m;
}

cplx group_trace(const FiniteGroup& g, const ComplexMatrix& x) {
    require(x.rows() == g.order() && x.cols() == g.order(), ErrorKind::input, "group_trace: dimension mismatch");
    return x(0, 0);
}

ComplexVector fourier_apply(const FiniteGroup& g, const RealVector& t, const ComplexVector& x) {
    require(t.size() == g.order() && x.size() == g.order(), ErrorKind::input,
            "fourier_apply: symbol and element need one entry per group element");
    return x.cwiseProduct(t.cast<cplx>());
}

ComplexVector group_coefficients(const FiniteGroup& g, const ComplexMatrix& x) {
    require(x.rows() == g.order() && x.cols() == g.order(), ErrorKind::input, "group_coefficients: dimension mismatch");
    return x.col(0);
}

RealMatrix herz_schur_transfer(const FiniteGroup& g, const RealVector& t) {
    require(t.size() == g.order(), ErrorKind::input, "herz_schur_transfer: symbol length must equal |G|");
    RealMatrix a(g.order(), g.order());
    for (int x = 0; x < g.order(); ++x) {
        for (int y = 0; y < g.order(); ++y) {
            a(x, y) = t[g.mul(x, g.inv(y))];
        }
    }
    return a;
}

RealMatrix symbol_gram(const FiniteGroup& g, const RealVector& t) {
    require(t.size() == g.order(), ErrorKind::input, "symbol length must equal |G|");
    RealMatrix a(g.order(), g.order());
    for (int x = 0; x < g.order(); ++x) {
        for (int y = 0; y < g.order(); ++y) {
            a(x, y) = t[g.mul(g.inv(x), y)];
        }
    }
    return a;
}

} // namespace ncm
