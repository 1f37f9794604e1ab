#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "ncmatsaev/schur_fourier.hpp"

using namespace ncm;

namespace {

RealMatrix unit_columns(Eigen::Index d, Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    RealMatrix v(d, n);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        v(k) = g(rng);
    }
    return v.colwise().normalized();
}

ComplexMatrix random_complex(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(n, n);
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        m(k) = cplx(g(rng), g(rng));
    }
    return m;
}

} // namespace

TEST_CASE("schur products") {
    std::mt19937_64 rng(1);
    const ComplexMatrix b = random_complex(3, rng);
    CHECK(schur_apply(RealMatrix::Ones(3, 3), b) == b);
    const ComplexMatrix diag = schur_apply(RealMatrix::Identity(3, 3), b);
    CHECK(diag == ComplexMatrix(b.diagonal().asDiagonal()));
    RealMatrix a = RealMatrix::Random(3, 3);
    const RealMatrix a2 = RealMatrix::Random(3, 3);
    CHECK((schur_apply(a, schur_apply(a2, b)) - schur_apply(a.cwiseProduct(a2), b)).norm() <= 1e-14);
    ComplexMatrix iter = b;
    for (int k = 0; k < 3; ++k) {
        iter = schur_apply(a, iter);
    }
    CHECK((iter - schur_apply(schur_power(a, 3), b)).norm() <= 1e-14);
    CHECK_THROWS_AS(schur_apply(a, random_complex(2, rng)), Error);
}

TEST_CASE("certification") {
    auto ones = certify(RealMatrix(RealMatrix::Ones(3, 3)));
    CHECK(ones.unital);
    CHECK(ones.cp);
    REQUIRE(ones.witness);
    CHECK(ones.witness->rank == 1);

    std::mt19937_64 rng(2);
    const RealMatrix h = unit_columns(3, 4, rng);
    auto gram = certify(RealMatrix(h.transpose() * h));
    CHECK(gram.unital);
    CHECK(gram.cp);
    CHECK(gram.witness->residual <= 1e-10);
    for (Eigen::Index i = 0; i < 4; ++i) {
        CHECK(std::abs(gram.witness->vectors.col(i).norm() - 1.0) <= 1e-10);
    }

    RealMatrix bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    auto c = certify(bad);
    CHECK(c.unital);
    CHECK_FALSE(c.cp);
    CHECK_FALSE(c.witness);
}

TEST_CASE("gram factorization") {
    const auto id = gram_factorize(RealMatrix::Identity(4, 4));
    CHECK(id.rank == 4);
    CHECK((id.vectors.transpose() * id.vectors - RealMatrix::Identity(4, 4)).norm() <= 1e-12);
    const auto ones = gram_factorize(RealMatrix::Ones(3, 3));
    CHECK(ones.rank == 1);
    CHECK((ones.vectors.col(0) - ones.vectors.col(2)).norm() <= 1e-12);
    std::mt19937_64 rng(3);
    const RealMatrix v = RealMatrix::Random(2, 5);
    const auto low = gram_factorize(v.transpose() * v);
    CHECK(low.rank == 2);
    CHECK(low.residual <= 1e-10);
    RealMatrix bad(2, 2);
    bad << 0.0, 1.0, 1.0, 0.0;
    CHECK_THROWS_AS(gram_factorize(bad), Error);
}

TEST_CASE("two by two embedding") {
    std::mt19937_64 rng(4);
    const RealMatrix h = unit_columns(3, 3, rng);
    const auto same = embed_two_by_two(h, h);
    const RealMatrix b = h.transpose() * h;
    CHECK((same.f.topLeftCorner(3, 3) - b).norm() <= 1e-14);
    CHECK((same.f.topRightCorner(3, 3) - b).norm() <= 1e-14);
    CHECK((same.f.bottomRightCorner(3, 3) - b).norm() <= 1e-14);

    const RealMatrix e = RealMatrix::Identity(3, 3);
    const auto ortho = embed_two_by_two(e, e);
    RealMatrix expected(6, 6);
    expected << e, e, e, e;
    CHECK((ortho.f - expected).norm() <= 1e-15);

    const RealMatrix k = unit_columns(3, 3, rng);
    const auto mixed = embed_two_by_two(h, k);
    CHECK(mixed.certificate.cp);
    CHECK(mixed.certificate.unital);
    CHECK((mixed.f.topRightCorner(3, 3) - h.transpose() * k).norm() <= 1e-14);
    CHECK_THROWS_AS(embed_two_by_two(2.0 * h, k), Error);
}

TEST_CASE("unital CP multipliers are contractive on S^p") {
    std::mt19937_64 rng(5);
    const RealMatrix h = unit_columns(2, 4, rng);
    const SchurMap map(h.transpose() * h);
    for (double p : {1.5, 2.0, 3.0}) {
        const auto est = estimate_pnorm(map, PExponent(p), {.restarts = 4});
        CHECK(est.value <= 1.0 + 1e-6);
    }
    // diagonal preserved
    const ComplexMatrix x = random_complex(4, rng);
    const ComplexMatrix y = schur_apply(h.transpose() * h, x);
    CHECK((y.diagonal() - x.diagonal()).norm() <= 1e-15);
}

TEST_CASE("finite groups") {
    const auto z2 = cyclic_group(2);
    RealMatrix flip(2, 2);
    flip << 0.0, 1.0, 1.0, 0.0;
    CHECK(regular_rep(z2, 1) == flip);
    const auto z3 = cyclic_group(3);
    const RealMatrix l1 = regular_rep(z3, 1);
    CHECK(l1 * l1 * l1 == RealMatrix::Identity(3, 3));
    for (const auto& g : {z3, dihedral_group(3), dihedral_group(4)}) {
        CHECK(regular_rep(g, 0) == RealMatrix::Identity(g.order(), g.order()));
        for (int a = 0; a < g.order(); ++a) {
            CHECK(group_trace(g, regular_rep(g, a).cast<cplx>()) == cplx(a == 0 ? 1.0 : 0.0));
            for (int b = 0; b < g.order(); ++b) {
                CHECK(regular_rep(g, a) * regular_rep(g, b) == regular_rep(g, g.mul(a, b)));
            }
        }
    }
    const auto d3 = dihedral_group(3);
    CHECK(d3.order() == 6);
    CHECK(d3.mul(1, 3) != d3.mul(3, 1)); // nonabelian
    CHECK_THROWS_AS(FiniteGroup({{0, 1}, {1, 1}}), Error);
    CHECK_THROWS_AS(FiniteGroup({{1, 0}, {0, 1}}), Error);
    // a Latin square with identity 0 that is not associative
    CHECK_THROWS_AS(FiniteGroup({{0, 1, 2, 3, 4},
                                 {1, 0, 3, 4, 2},
                                 {2, 4, 0, 1, 3},
                                 {3, 2, 4, 0, 1},
                                 {4, 3, 1, 2, 0}}),
                    Error);
}

TEST_CASE("fourier multipliers and the transfer") {
    const auto z3 = cyclic_group(3);
    ComplexVector x(3);
    x << cplx(1, 2), -0.5, cplx(0, 3);
    CHECK(fourier_apply(z3, RealVector::Ones(3), x) == x);
    RealVector delta = RealVector::Zero(3);
    delta[0] = 1.0;
    const ComplexVector proj = fourier_apply(z3, delta, x);
    CHECK(proj[0] == x[0]);
    CHECK(proj[1] == cplx{});
    RealVector t(3);
    t << 1.0, 0.4, 0.4;
    ComplexVector it = x;
    for (int k = 0; k < 3; ++k) {
        it = fourier_apply(z3, t, it);
    }
    CHECK(std::abs(it[1] - std::pow(0.4, 3) * x[1]) <= 1e-15);

    CHECK(herz_schur_transfer(z3, delta) == RealMatrix::Identity(3, 3));
    CHECK(herz_schur_transfer(z3, RealVector::Ones(3)) == RealMatrix::Ones(3, 3));
    const RealMatrix a = herz_schur_transfer(z3, t);
    CHECK(is_psd(a));
    CHECK(herz_schur_transfer(z3, t.array().pow(3).matrix()) == schur_power(a, 3));

    // the matrix of sum x_g lambda(g) has x as first column
    ComplexMatrix elem = ComplexMatrix::Zero(3, 3);
    for (int g = 0; g < 3; ++g) {
        elem += x[g] * regular_rep(z3, g).cast<cplx>();
    }
    CHECK(group_coefficients(z3, elem) == x);
    CHECK_THROWS_AS(fourier_apply(z3, RealVector::Ones(2), x), Error);
}
