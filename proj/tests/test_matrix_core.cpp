#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "ncmatsaev/matrix_core.hpp"

using namespace ncm;

namespace {

ComplexMatrix random_complex(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j) {
        for (Eigen::Index i = 0; i < r; ++i) {
            const double re = g(rng);
            const double im = g(rng);
            m(i, j) = cplx(re, im);
        }
    }
    return m;
}

ComplexMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_complex(n, n, rng));
    return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

} // namespace

TEST_CASE("singular values of identity and diagonal matrices") {
    auto id = singular_values(ComplexMatrix::Identity(2, 2));
    CHECK(id.values[0] == doctest::Approx(1.0));
    CHECK(id.values[1] == doctest::Approx(1.0));

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 4.0;
    auto s = singular_values(d);
    CHECK(s.values[0] == doctest::Approx(4.0));
    CHECK(s.values[1] == doctest::Approx(3.0));
}

TEST_CASE("squared singular values match the Gram eigenvalues") {
    std::mt19937_64 rng(7);
    const ComplexMatrix m = random_complex(3, 3, rng);
    const auto s = singular_values(m);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.adjoint() * m);
    RealVector eig = es.eigenvalues().reverse();
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(s.values[i] * s.values[i] - eig[i]) <= 1e-10);
    }
    const ComplexMatrix rebuilt = s.left * s.values.asDiagonal() * s.right.adjoint();
    CHECK((rebuilt - m).norm() <= 1e-12 * m.norm());
}

TEST_CASE("rectangular spectra are sorted and nonnegative") {
    std::mt19937_64 rng(8);
    const ComplexMatrix m = random_complex(4, 2, rng);
    const auto s = singular_values(m);
    REQUIRE(s.values.size() == 2);
    CHECK(s.values[0] >= s.values[1]);
    CHECK(s.values[1] >= 0.0);
    CHECK((singular_value_list(m) - s.values).norm() <= 1e-12);
}

TEST_CASE("non-finite entries are rejected") {
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    m(0, 1) = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(singular_values(m), Error);
}

TEST_CASE("schatten norms") {
    ComplexVector u(2);
    u << cplx(0.6, 0.0), cplx(0.0, 0.8);
    const ComplexMatrix proj = u * u.adjoint();
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        CHECK(schatten_norm(proj, PExponent(p)) == doctest::Approx(1.0));
    }
    CHECK(schatten_norm(proj, PExponent::infinity()) == doctest::Approx(1.0));
    CHECK(schatten_norm(ComplexMatrix::Identity(2, 2), PExponent(2.0)) == doctest::Approx(std::sqrt(2.0)));
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 4.0;
    CHECK(schatten_norm(d, PExponent(1.0)) == doctest::Approx(7.0));
    CHECK_THROWS_AS(PExponent(0.5), Error);
}

TEST_CASE("exponent conjugation") {
    CHECK(PExponent(1.0).conjugate().is_infinite());
    CHECK(PExponent::infinity().conjugate().is_one());
    const PExponent q = PExponent(3.0).conjugate();
    CHECK(std::abs(1.0 / 3.0 + 1.0 / q.value() - 1.0) <= 1e-15);
}

TEST_CASE("lp norms") {
    ComplexVector v(2);
    v << 1.0, 1.0;
    CHECK(lp_norm(v, PExponent(1.0)) == doctest::Approx(2.0));
    v << 3.0, 4.0;
    CHECK(lp_norm(v, PExponent(2.0)) == doctest::Approx(5.0));
    CHECK(lp_norm(v, PExponent::infinity()) == doctest::Approx(4.0));
    const ComplexVector ones = ComplexVector::Ones(7);
    CHECK(lp_norm(ones, PExponent(3.0)) == doctest::Approx(std::pow(7.0, 1.0 / 3.0)));
}

TEST_CASE("vector duality map") {
    ComplexVector v(3);
    v << cplx(1, 2), cplx(-0.5, 0), cplx(0, 0.3);
    const ComplexVector w2 = duality_map_vector(v, PExponent(2.0));
    CHECK((w2 - v / v.norm()).norm() <= 1e-14);

    ComplexVector ones(2);
    ones << 1.0, 1.0;
    const ComplexVector w4 = duality_map_vector(ones, PExponent(4.0));
    CHECK(std::abs(w4[0] - std::pow(2.0, -0.75)) <= 1e-14);
    CHECK(lp_norm(w4, PExponent(4.0 / 3.0)) == doctest::Approx(1.0).epsilon(1e-14));

    for (double p : {1.2, 1.5, 3.0, 7.0}) {
        const ComplexVector w = duality_map_vector(v, PExponent(p));
        CHECK(std::abs(w.dot(v).real() - lp_norm(v, PExponent(p))) <= 1e-12);
        CHECK(std::abs(lp_norm(w, PExponent(p).conjugate()) - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(duality_map_vector(ComplexVector::Zero(3), PExponent(3.0)), Error);
    CHECK_THROWS_AS(duality_map_vector(v, PExponent(1.0)), Error);
}

TEST_CASE("matrix duality map") {
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = cplx(2, 1);
    d(1, 1) = -1.0;
    d(2, 2) = cplx(0, 0.5);
    const PExponent p(3.0);
    const ComplexMatrix n = duality_map_matrix(d, p);
    const ComplexVector on_diag = duality_map_vector(d.diagonal(), p);
    CHECK((n.diagonal() - on_diag).norm() <= 1e-12);
    CHECK((n - ComplexMatrix(n.diagonal().asDiagonal())).norm() <= 1e-12);

    std::mt19937_64 rng(11);
    const ComplexMatrix m = random_complex(3, 3, rng);
    CHECK((duality_map_matrix(m, PExponent(2.0)) - m / m.norm()).norm() <= 1e-12);
    for (double pv : {1.5, 4.0}) {
        const PExponent pe(pv);
        const ComplexMatrix w = duality_map_matrix(m, pe);
        CHECK(std::abs(schatten_norm(w, pe.conjugate()) - 1.0) <= 1e-12);
        CHECK(std::abs((w.adjoint() * m).trace().real() - schatten_norm(m, pe)) <= 1e-12);
    }

    // All singular values equal: the map is M / ||M|| scaled by rank^(1/p) / rank.
    const ComplexMatrix u = random_unitary(4, rng);
    const ComplexMatrix wu = duality_map_matrix(u, PExponent(3.0));
    CHECK((wu - u / std::pow(4.0, 2.0 / 3.0)).norm() <= 1e-12);
    CHECK_THROWS_AS(duality_map_matrix(ComplexMatrix::Zero(2, 2), PExponent(3.0)), Error);
}

TEST_CASE("positivity test") {
    CHECK(is_psd(ComplexMatrix(ComplexMatrix::Identity(3, 3))));
    ComplexMatrix flip(2, 2);
    flip << 0.0, 1.0, 1.0, 0.0;
    CHECK_FALSE(is_psd(flip));
    std::mt19937_64 rng(3);
    const ComplexMatrix v = random_complex(4, 6, rng);
    CHECK(is_psd(ComplexMatrix(v * v.adjoint())));
    CHECK_THROWS_AS(is_psd(ComplexMatrix(ComplexMatrix::Zero(2, 3))), Error);
}

TEST_CASE("frobenius identity, unitary invariance, Hoelder") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix a = random_complex(4, 4, rng);
        const ComplexMatrix b = random_complex(4, 4, rng);
        CHECK(std::abs(std::pow(schatten_norm(a, PExponent(2.0)), 2) - a.squaredNorm()) <= 1e-10 * a.squaredNorm());
        const ComplexMatrix u = random_unitary(4, rng);
        const ComplexMatrix v = random_unitary(4, rng);
        for (double p : {1.0, 1.5, 3.0}) {
            const PExponent pe(p);
            CHECK(std::abs(schatten_norm(u * a * v, pe) - schatten_norm(a, pe)) <= 1e-9);
        }
        for (double p : {1.5, 2.0, 3.0}) {
            const PExponent pe(p);
            CHECK(std::abs((a.adjoint() * b).trace()) <=
                  schatten_norm(a, pe) * schatten_norm(b, pe.conjugate()) + 1e-12);
        }
        CHECK((a.adjoint().adjoint() - a).norm() == 0.0);
    }
}

TEST_CASE("phase of zero") {
    CHECK(phase(cplx{}) == cplx{});
    CHECK(std::abs(phase(cplx(0, 3)) - cplx(0, 1)) <= 1e-15);
}
