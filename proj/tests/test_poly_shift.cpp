#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ncmatsaev/poly_shift.hpp"

using namespace ncm;

namespace {

Polynomial poly(const char* s) { return Polynomial::parse(s); }

PolyNormConfig quick() {
    PolyNormConfig cfg;
    cfg.engine.restarts = 4;
    cfg.engine.max_iters = 300;
    return cfg;
}

} // namespace

TEST_CASE("polynomial parsing and evaluation") {
    const auto p = poly("1, -2.5+0.5i, 3i, 0, 0");
    CHECK(p.degree() == 2);
    CHECK(p.coeffs()[1] == cplx(-2.5, 0.5));
    CHECK(p.coeffs()[2] == cplx(0, 3));
    const cplx z(0.3, -0.7);
    CHECK(std::abs(p(z) - (1.0 + cplx(-2.5, 0.5) * z + cplx(0, 3) * z * z)) <= 1e-14);
    CHECK(poly("0,0").is_zero());
    CHECK(poly("1e-3-2e+1i").coeffs()[0] == cplx(1e-3, -20.0));
    CHECK(poly("-i").coeffs()[0] == cplx(0, -1));
    CHECK_THROWS_AS(poly("1,,2"), Error);
    CHECK_THROWS_AS(poly("1,abc"), Error);
    CHECK(Polynomial::parse(p.to_string()).coeffs() == p.coeffs());
}

TEST_CASE("shift truncations") {
    const ComplexMatrix s3 = toeplitz_of(poly("0,1"), 3);
    CHECK(s3 == ShiftTruncation{3, ShiftKind::right}.matrix());
    CHECK(s3(1, 0) == 1.0);
    CHECK(s3(2, 1) == 1.0);
    CHECK(s3.cwiseAbs().sum() == 2.0);
    CHECK(ShiftTruncation{3, ShiftKind::left}.matrix() == s3.adjoint());
    CHECK(toeplitz_of(poly("1"), 5) == ComplexMatrix::Identity(5, 5));
    ComplexMatrix expected(2, 2);
    expected << 1.0, 0.0, 1.0, 1.0;
    CHECK(toeplitz_of(poly("1,1"), 2) == expected);

    // sigma_n on vec(A) agrees with theta_apply
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    ComplexMatrix a(4, 4);
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        a(k) = cplx(g(rng), g(rng));
    }
    const ComplexMatrix sig = ShiftTruncation{4, ShiftKind::matrix_shift}.matrix();
    const ComplexVector va = Eigen::Map<const ComplexVector>(a.data(), a.size());
    const ComplexMatrix ta = theta_apply(a);
    CHECK((sig * va - Eigen::Map<const ComplexVector>(ta.data(), ta.size())).norm() <= 1e-15);
}

TEST_CASE("theta is conjugation by the shift") {
    ComplexMatrix e00 = ComplexMatrix::Zero(5, 5);
    e00(2, 2) = 1.0;
    CHECK(sigma_conjugation_check(e00) == 0.0);
    const ComplexMatrix t = theta_apply(e00);
    CHECK(t(3, 3) == 1.0);
    CHECK(t.cwiseAbs().sum() == 1.0);
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g;
    ComplexMatrix a(6, 6);
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        a(k) = cplx(g(rng), g(rng));
    }
    CHECK(sigma_conjugation_check(a) <= 1e-12);
    CHECK_THROWS_AS(sigma_conjugation_check(ComplexMatrix::Zero(2, 2)), Error);
}

TEST_CASE("poly_norm anchors") {
    CHECK(std::abs(poly_norm(poly("1,1"), PExponent(2.0), 32).value() - 2.0) <= 1e-6);
    for (double p : {1.0, 1.5, 3.0}) {
        CHECK(poly_norm(poly("1"), PExponent(p), 10, quick()).value() == doctest::Approx(1.0));
    }
    CHECK(std::abs(poly_norm(poly("1,1,1"), PExponent(2.0), 64).value() - 3.0) <= 1e-4);
    CHECK(std::abs(poly_norm(poly("1,-1,1"), PExponent(3.0), 64, quick()).value() - 3.0) <= 1e-4);
    // p in {1, inf} go through the closed forms on the same truncation
    CHECK(poly_norm(poly("1,-2,0.5i"), PExponent(1.0), 16).value() == doctest::Approx(3.5));
    CHECK(poly_norm(poly("1,-2,0.5i"), PExponent::infinity(), 16).value() == doctest::Approx(3.5));
    CHECK(poly_norm(poly("1,-2,0.5i"), PExponent(1.0), 16).exact);
}

TEST_CASE("degree one: |a| + |b| for every p") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 3; ++trial) {
        const Polynomial p({cplx(g(rng), g(rng)), cplx(g(rng), g(rng))});
        for (double pv : {1.3, 2.0, 3.0}) {
            const auto est = poly_norm(p, PExponent(pv), 64, quick());
            CHECK(std::abs(est.value() - p.l1_norm()) <= 1e-4);
            CHECK(est.value() <= p.l1_norm() + 1e-8);
        }
        for (Eigen::Index m : {2, 4}) {
            const auto v = poly_vector_norm(p, PExponent(3.0), 16, m, quick());
            CHECK(std::abs(v.value() - p.l1_norm()) <= 1e-4);
        }
    }
}

TEST_CASE("finite sections are lower bounds that increase with n") {
    PolyNormConfig cfg = quick();
    cfg.truncation = Truncation::finite_section;
    const auto p = poly("1,1,-1");
    double prev = 0.0;
    for (Eigen::Index n : {4, 8, 16}) {
        const double v = poly_norm(p, PExponent(3.0), n, cfg).value();
        CHECK(v >= prev - 1e-8);
        CHECK(v <= p.l1_norm() + 1e-8);
        prev = v;
    }
    // the n x n section sits inside the periodic one's supremum
    CHECK(prev <= poly_norm(p, PExponent(3.0), 16, quick()).value() + 1e-3);
}

TEST_CASE("vector-valued norms") {
    const auto p = poly("0.5,-1+0.5i,0.25");
    const PExponent pe(3.0);
    const auto scalar = poly_norm(p, pe, 12, quick());
    const auto m1 = poly_vector_norm(p, pe, 12, 1, quick());
    CHECK(std::abs(scalar.value() - m1.value()) <= 1e-10);
    const auto m2 = poly_vector_norm(p, pe, 12, 2, quick());
    CHECK(m2.value() >= scalar.value() - 1e-6);
    const auto at2 = poly_vector_norm(p, PExponent(2.0), 12, 3, quick());
    CHECK(std::abs(at2.value() - sup_circle(p)) <= 1e-3);
}

TEST_CASE("sigma norms") {
    CHECK(sigma_norm(poly("0,1"), PExponent(3.0), 6, quick()).value() == doctest::Approx(1.0));
    PolyNormConfig finite = quick();
    finite.truncation = Truncation::finite_section;
    CHECK(sigma_norm(poly("0,1"), PExponent(1.5), 5, finite).value() == doctest::Approx(1.0));
    CHECK(std::abs(sigma_norm(poly("1,1"), PExponent(2.0), 8, quick()).value() - 2.0) <= 1e-6);
    CHECK_THROWS_AS(sigma_norm(poly("1,1"), PExponent(1.0), 8), Error);

    // explicit matrix and structured application agree
    const SigmaPolyMap map(poly("1,-0.5i,2"), 4, Truncation::finite_section);
    ComplexMatrix expected = ComplexMatrix::Zero(16, 16);
    const ComplexMatrix sig = ShiftTruncation{4, ShiftKind::matrix_shift}.matrix();
    expected = ComplexMatrix::Identity(16, 16) + cplx(0, -0.5) * sig + 2.0 * sig * sig;
    CHECK((map.matrix() - expected).norm() <= 1e-14);
}

TEST_CASE("norm chain") {
    const auto p = poly("1,0.5-0.3i,-0.7,0.2i");
    PolyNormConfig cfg = quick();
    cfg.engine.restarts = 2;
    for (double pv : {1.5, 3.0}) {
        const auto chain = norm_chain(p, PExponent(pv), 6, cfg);
        CHECK(chain.scalar.value() <= chain.sigma.value() + 1e-4);
        CHECK(chain.sigma.value() <= chain.vector.value() + 1e-4);
        CHECK(chain.vector.value() <= p.l1_norm() + 1e-8);
    }
}

TEST_CASE("sup over the circle") {
    CHECK(sup_circle(poly("1,1")) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sup_circle_arg(poly("1,1")).theta == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(sup_circle(poly("0,0,0,1")) == doctest::Approx(1.0));
    const auto alt = sup_circle_arg(poly("1,-1,1"));
    CHECK(alt.value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(alt.theta == doctest::Approx(std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("extremal classification") {
    auto same = classify_extremal(poly("1,2,1"));
    CHECK(same.verdict == ExtremalVerdict::same_sign);
    CHECK(*same.predicted_norm == doctest::Approx(4.0));
    auto alt = classify_extremal(poly("1,-1,1"));
    CHECK(alt.verdict == ExtremalVerdict::alternating);
    CHECK(*alt.predicted_norm == doctest::Approx(3.0));
    auto neither = classify_extremal(poly("1,1,-1"));
    CHECK(neither.verdict == ExtremalVerdict::neither);
    CHECK_FALSE(neither.predicted_norm.has_value());
    CHECK(sup_circle(poly("1,1,-1")) < 3.0 - 1e-6);
    CHECK_THROWS_AS(classify_extremal(poly("1,0,1")), Error);
    CHECK_THROWS_AS(classify_extremal(poly("1,1i")), Error);
}

TEST_CASE("norm profiles") {
    const auto profile = norm_profile(poly("1,1,-1"), PExponent(3.0), {4, 8, 16}, 1, quick());
    REQUIRE(profile.entries.size() == 3);
    for (std::size_t i = 0; i < profile.entries.size(); ++i) {
        CHECK(profile.entries[i].certified);
        CHECK(profile.entries[i].value <= 3.0 + 1e-8);
        if (i > 0) {
            CHECK(profile.entries[i].value >= profile.entries[i - 1].value - 1e-8);
        }
    }
}

TEST_CASE("gap search") {
    CHECK_THROWS_AS(gap_search(PExponent(2.0), 3), Error);
    CHECK_THROWS_AS(gap_search(PExponent(4.0), 0), Error);
    GapSearchConfig cfg;
    cfg.budget = 4;
    cfg.keep = 3;
    cfg.n = 6;
    cfg.norm = quick();
    cfg.norm.engine.restarts = 2;
    const auto result = gap_search(PExponent(4.0), 3, cfg);
    CHECK(result.evaluated == 4);
    CHECK(result.ranked.size() == 3);
    for (std::size_t i = 0; i < result.ranked.size(); ++i) {
        CHECK(result.ranked[i].certified);
        CHECK(std::abs(result.ranked[i].poly.l1_norm() - 1.0) <= 1e-12);
        if (i > 0) {
            CHECK(result.ranked[i].gap <= result.ranked[i - 1].gap);
        }
    }
    // degree one: no gap
    GapSearchConfig one = cfg;
    one.budget = 2;
    for (const auto& c : gap_search(PExponent(4.0), 1, one).ranked) {
        CHECK(std::abs(c.gap) <= 1e-4);
    }
}

TEST_CASE("reported twist reproduces the witness") {
    // refined twists can land below 0; the witness belongs to the unwrapped value
    GapSearchConfig cfg;
    cfg.seed = 1111;
    cfg.norm = quick();
    cfg.norm.engine.seed = 1111;
    const auto res = gap_search(PExponent(4.0), 8, cfg);
    for (const auto& c : res.ranked) {
        CHECK(c.certified);
        const double again = reevaluate_vector_witness(c.poly, PExponent(4.0), cfg.n, c.witness, cfg.norm.truncation, c.twist);
        CHECK(std::abs(again - c.vector_value) <= 1e-10);
    }
}
