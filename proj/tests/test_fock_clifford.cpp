#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "ncmatsaev/fock_clifford.hpp"

using namespace ncm;

namespace {

RealVector unit(int d, int i) {
    RealVector v = RealVector::Zero(d);
    v[i] = 1.0;
    return v;
}

RealVector gaussian(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    RealVector v(d);
    for (int i = 0; i < d; ++i) {
        v[i] = g(rng);
    }
    return v;
}

RealMatrix dense(const RealSparse& s) { return RealMatrix(s); }

long double_factorial(int n) { return n <= 1 ? 1 : n * double_factorial(n - 2); }

} // namespace

TEST_CASE("fock space of one generator") {
    const auto f = build_fock(1);
    CHECK(f.dim() == 2);
    RealMatrix expected(2, 2);
    expected << 0.0, 0.0, 1.0, 0.0;
    CHECK(dense(f.creation(0)) == expected);
}

TEST_CASE("CAR relations and vacuum") {
    for (int d : {2, 3, 5}) {
        const auto f = build_fock(d);
        CHECK(f.car_residual() <= 1e-14);
        RealVector vac = RealVector::Zero(f.dim());
        vac[0] = 1.0;
        for (int i = 0; i < d; ++i) {
            CHECK((f.annihilation(i) * vac).norm() == 0.0);
        }
    }
    CHECK_THROWS_AS(build_fock(0), Error);
    CHECK_THROWS_AS(build_fock(15), Error);
}

TEST_CASE("lexicographic basis") {
    const auto f = build_fock(3);
    const std::vector<std::uint32_t> expected{0b000, 0b001, 0b011, 0b111, 0b101, 0b010, 0b110, 0b100};
    CHECK(f.basis() == expected);
    for (std::size_t k = 0; k < expected.size(); ++k) {
        CHECK(f.index_of(expected[k]) == static_cast<Eigen::Index>(k));
    }
}

TEST_CASE("field operators") {
    const auto f = build_fock(4);
    const RealMatrix w = dense(omega(f, unit(4, 0)));
    CHECK((w * w - RealMatrix::Identity(f.dim(), f.dim())).norm() <= 1e-12);
    CHECK((w - w.transpose()).norm() == 0.0);
    CHECK(omega(f, RealVector::Zero(4)).nonZeros() == 0);
    std::mt19937_64 rng(1);
    const RealVector u = gaussian(4, rng);
    const RealVector v = gaussian(4, rng);
    CHECK((dense(omega(f, u + v)) - dense(omega(f, u)) - dense(omega(f, v))).norm() <= 1e-12);
    RealVector n = u / u.norm();
    const RealMatrix wn = dense(omega(f, n));
    CHECK((wn * wn - RealMatrix::Identity(f.dim(), f.dim())).norm() <= 1e-12);
    CHECK_THROWS_AS(omega(f, RealVector::Zero(3)), Error);
}

TEST_CASE("vacuum trace") {
    const auto f = build_fock(3);
    CHECK(vacuum_trace(f, ComplexMatrix(ComplexMatrix::Identity(8, 8))) == cplx(1.0));
    std::mt19937_64 rng(2);
    const RealVector e = gaussian(3, rng);
    const RealVector g = gaussian(3, rng);
    const RealSparse prod = omega(f, e) * omega(f, g);
    CHECK(std::abs(vacuum_trace(f, prod) - e.dot(g)) <= 1e-12);
    CHECK(std::abs(vacuum_trace(f, omega(f, e))) <= 1e-15);
    CHECK_THROWS_AS(vacuum_trace(f, ComplexMatrix(ComplexMatrix::Identity(4, 4))), Error);
}

TEST_CASE("traciality and odd moments") {
    const auto f = build_fock(4);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int trial = 0; trial < 10; ++trial) {
        RealMatrix x = RealMatrix::Identity(f.dim(), f.dim());
        RealMatrix y = RealMatrix::Identity(f.dim(), f.dim());
        for (int k = 0; k < 3; ++k) {
            x = x * dense(omega(f, unit(4, pick(rng))));
        }
        for (int k = 0; k < 4; ++k) {
            y = y * dense(omega(f, unit(4, pick(rng))));
        }
        CHECK(std::abs((x * y)(0, 0) - (y * x)(0, 0)) <= 1e-10);
        std::vector<RealVector> odd;
        for (int k = 0; k < 2 * (trial % 3) + 1; ++k) {
            odd.push_back(gaussian(4, rng));
        }
        CHECK(std::abs(field_moment(f, odd)) <= 1e-12);
    }
}

TEST_CASE("pair partitions") {
    const auto one = enumerate_pair_partitions(1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].crossings == 0);

    const auto two = enumerate_pair_partitions(2);
    REQUIRE(two.size() == 3);
    CHECK(two[0].pairs == std::vector<std::pair<int, int>>{{1, 2}, {3, 4}});
    CHECK(two[0].crossings == 0);
    CHECK(two[1].pairs == std::vector<std::pair<int, int>>{{1, 3}, {2, 4}});
    CHECK(two[1].crossings == 1);
    CHECK(two[2].pairs == std::vector<std::pair<int, int>>{{1, 4}, {2, 3}});
    CHECK(two[2].crossings == 0);

    for (int k = 1; k <= 6; ++k) {
        CHECK(static_cast<long>(enumerate_pair_partitions(k).size()) == double_factorial(2 * k - 1));
    }
    CHECK_THROWS_AS(enumerate_pair_partitions(9), Error);
}

TEST_CASE("wick formula") {
    std::mt19937_64 rng(4);
    const RealVector e = gaussian(3, rng);
    const RealVector g = gaussian(3, rng);
    CHECK(std::abs(wick_trace({e, g}) - e.dot(g)) <= 1e-14);

    std::vector<RealVector> f4;
    for (int i = 0; i < 4; ++i) {
        f4.push_back(gaussian(3, rng));
    }
    const double expected = f4[0].dot(f4[1]) * f4[2].dot(f4[3]) - f4[0].dot(f4[2]) * f4[1].dot(f4[3]) +
                            f4[0].dot(f4[3]) * f4[1].dot(f4[2]);
    CHECK(std::abs(wick_trace(f4) - expected) <= 1e-12);

    const RealVector e1 = unit(2, 0);
    const RealVector e2 = unit(2, 1);
    CHECK(wick_trace({e1, e2, e1, e2}) == doctest::Approx(-1.0));
    CHECK(wick_trace({e1, e2, e1}) == 0.0);
}

TEST_CASE("wick against the matrix route") {
    std::mt19937_64 rng(5);
    auto suite = [&](int count, int d) {
        std::vector<RealVector> v;
        for (int i = 0; i < count; ++i) {
            v.push_back(gaussian(d, rng));
        }
        return v;
    };
    CHECK(wick_vs_matrix_check(build_fock(3), suite(2, 3)) <= 1e-12);
    CHECK(wick_vs_matrix_check(build_fock(4), suite(4, 4)) <= 1e-10);
    CHECK(wick_vs_matrix_check(build_fock(5), suite(6, 5)) <= 1e-9);
    CHECK(wick_vs_matrix_check(build_fock(6), suite(8, 6)) <= 1e-9);
}

TEST_CASE("second quantization") {
    const auto f = build_fock(3);
    CHECK((second_quantization(f, RealMatrix::Identity(3, 3)) - RealMatrix::Identity(8, 8)).norm() <= 1e-15);
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g;
    RealMatrix a(3, 3);
    for (Eigen::Index k = 0; k < 9; ++k) {
        a(k) = g(rng);
    }
    const RealMatrix o = Eigen::HouseholderQR<RealMatrix>(a).householderQ();
    const RealMatrix go = second_quantization(f, o);
    CHECK((go.transpose() * go - RealMatrix::Identity(8, 8)).norm() <= 1e-12);
    // Gamma(O) omega(v) Gamma(O)^* = omega(O v)
    const RealVector v = RealVector::Random(3);
    CHECK((go * dense(omega(f, v)) * go.transpose() - dense(omega(f, o * v))).norm() <= 1e-12);
}

TEST_CASE("q-deformed inner products") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    auto cvec = [&](int d) {
        ComplexVector v(d);
        for (int i = 0; i < d; ++i) {
            v[i] = cplx(g(rng), g(rng));
        }
        return v;
    };
    const std::vector<ComplexVector> h{cvec(3), cvec(3), cvec(3)};
    const std::vector<ComplexVector> k{cvec(3), cvec(3), cvec(3)};
    CHECK(std::abs(q_inner(h, k, 0.0) - h[0].dot(k[0]) * h[1].dot(k[1]) * h[2].dot(k[2])) <= 1e-12);

    const ComplexVector e = cvec(2);
    CHECK(std::abs(q_inner({e, e}, {e, e}, -1.0)) <= 1e-12);

    const double q = 0.37;
    const std::vector<ComplexVector> h2{h[0], h[1]};
    const std::vector<ComplexVector> k2{k[0], k[1]};
    CHECK(std::abs(q_inner(h2, k2, q) - (h[0].dot(k[0]) * h[1].dot(k[1]) + q * h[0].dot(k[1]) * h[1].dot(k[0]))) <=
          1e-12);
    CHECK_THROWS_AS(q_inner(h2, k2, 1.0), Error);

    for (double qv : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        for (int n = 1; n <= 4; ++n) {
            std::vector<std::vector<ComplexVector>> family;
            for (int t = 0; t < 5; ++t) {
                std::vector<ComplexVector> tensor;
                for (int i = 0; i < n; ++i) {
                    tensor.push_back(cvec(2));
                }
                family.push_back(tensor);
            }
            const ComplexMatrix gram = q_gram(family, qv);
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
            CHECK(es.eigenvalues().minCoeff() >= -1e-9 * std::max(1.0, gram.norm()));
        }
    }
}

TEST_CASE("mode permutations") {
    const FockSpace f(4);
    const std::vector<int> perm{2, 0, 3, 1};
    RealMatrix p = RealMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
        p(perm[static_cast<std::size_t>(i)], i) = 1.0;
    }
    CHECK((RealMatrix(fock_permutation(f, perm)) - second_quantization(f, p)).norm() <= 1e-15);
    const RealVector v = RealVector::Random(4);
    const RealSparse g = fock_permutation(f, perm);
    // Gamma(P) omega(v) Gamma(P)^* = omega(P v)
    CHECK(RealMatrix(g * omega(f, v) * RealSparse(g.transpose()) - omega(f, p * v)).norm() <= 1e-14);
    CHECK_THROWS_AS(fock_permutation(f, {0, 0, 1, 2}), Error);
}
