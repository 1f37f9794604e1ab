#include <doctest.h>

#include <cmath>
#include <random>

#include "ncmatsaev/pnorm_engine.hpp"

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

// Wraps an operator and checks the monotone-iteration invariant by replaying
// the power iteration history.
bool nondecreasing(const std::vector<double>& h) {
    for (std::size_t i = 1; i < h.size(); ++i) {
        if (h[i] < h[i - 1] - 1e-12 * std::max(1.0, h[i - 1])) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("mixed norm") {
    const auto one = BlockVector::from_blocks({ComplexMatrix::Identity(2, 2)});
    CHECK(mixed_norm(one, PExponent(2.0)) == doctest::Approx(std::sqrt(2.0)));

    ComplexVector v(3);
    v << cplx(1, 1), -2.0, cplx(0, 0.5);
    const auto scalars = BlockVector::from_scalars(v);
    for (double p : {1.0, 1.5, 4.0}) {
        CHECK(mixed_norm(scalars, PExponent(p)) == doctest::Approx(lp_norm(v, PExponent(p))));
    }

    ComplexMatrix e = ComplexMatrix::Zero(2, 2);
    e(1, 0) = 1.0;
    const auto two = BlockVector::from_blocks({e, e});
    CHECK(mixed_norm(two, PExponent(3.0)) == doctest::Approx(std::pow(2.0, 1.0 / 3.0)));
    CHECK_THROWS_AS(BlockVector::from_blocks({e, ComplexMatrix::Identity(3, 3)}), Error);
}

TEST_CASE("mixed duality map identities") {
    std::mt19937_64 rng(5);
    const auto x = BlockVector::from_stacked(random_complex(3, 4, rng), 2);
    for (double p : {1.3, 2.0, 3.5}) {
        const PExponent pe(p);
        const auto w = mixed_duality_map(x, pe);
        CHECK(std::abs(real_pairing(w, x) - mixed_norm(x, pe)) <= 1e-12);
        CHECK(std::abs(mixed_norm(w, pe.conjugate()) - 1.0) <= 1e-12);
    }
}

TEST_CASE("identity has norm one") {
    const BlockOperator id(ComplexMatrix::Identity(5, 5), 2);
    for (double p : {1.2, 2.0, 5.0}) {
        const auto est = estimate_pnorm(id, PExponent(p), {.restarts = 3});
        CHECK(est.value == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(est.converged);
    }
}

TEST_CASE("p = 2 agrees with the top singular value") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix t = random_complex(4, 4, rng);
        const auto est = estimate_pnorm(BlockOperator(t), PExponent(2.0), {.seed = static_cast<std::uint64_t>(trial)});
        CHECK(std::abs(est.value - exact_pnorm_special(t, PExponent(2.0))) <= 1e-8);
        CHECK(nondecreasing(est.history));
    }
}

TEST_CASE("closed forms") {
    ComplexMatrix t(2, 2);
    t << 1.0, 1.0, 0.0, 1.0;
    CHECK(exact_pnorm_special(t, PExponent(1.0)) == doctest::Approx(2.0));
    CHECK(exact_pnorm_special(t, PExponent::infinity()) == doctest::Approx(2.0));
    CHECK(exact_pnorm_special(t, PExponent(2.0)) == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));
    CHECK_THROWS_AS(exact_pnorm_special(t, PExponent(3.0)), Error);
    CHECK_THROWS_AS(estimate_pnorm(BlockOperator(t), PExponent(1.0)), Error);
    CHECK_THROWS_AS(estimate_pnorm(BlockOperator(t), PExponent::infinity()), Error);
}

TEST_CASE("zero operator") {
    const auto est = estimate_pnorm(BlockOperator(ComplexMatrix::Zero(3, 3)), PExponent(3.0), {.restarts = 2});
    CHECK(est.value == 0.0);
    CHECK(est.zero_operator);
}

TEST_CASE("sampling oracle") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    const BlockOperator op(d);
    CHECK(std::abs(sample_lower_bound(op, PExponent(3.0), {.samples = 2000}) - 2.0) <= 1e-6);
    const BlockOperator id(ComplexMatrix::Identity(3, 3));
    CHECK(sample_lower_bound(id, PExponent(1.7), {.samples = 50, .refine = false}) == doctest::Approx(1.0));

    std::mt19937_64 rng(2);
    const BlockOperator t(random_complex(4, 4, rng));
    const PExponent p(1.5);
    const double sampled = sample_lower_bound(t, p, {.samples = 20000});
    const double power = estimate_pnorm(t, p).value;
    CHECK(sampled <= power + 1e-6);
    CHECK(std::abs(sampled - power) <= 1e-3);
}

TEST_CASE("witness certificate, monotone runs and seeding") {
    std::mt19937_64 rng(9);
    const BlockOperator t(random_complex(5, 5, rng), 2);
    const PExponent p(3.0);
    const auto a = estimate_pnorm(t, p, {.restarts = 6, .seed = 42});
    const auto b = estimate_pnorm(t, p, {.restarts = 6, .seed = 42});
    CHECK(a.value == b.value);
    CHECK(a.iterations == b.iterations);
    CHECK(std::abs(mixed_norm(a.witness, p) - 1.0) <= 1e-12);
    CHECK(std::abs(mixed_norm(t.apply(a.witness), p) - a.value) <= 1e-10);
    CHECK(nondecreasing(a.history));
    CHECK(a.restarts_used == 6);
}

TEST_CASE("scale covariance and duality symmetry") {
    std::mt19937_64 rng(13);
    const ComplexMatrix m = random_complex(4, 4, rng);
    const cplx c(0.7, -1.9);
    const PExponent p(2.5);
    const double base = estimate_pnorm(BlockOperator(m), p).value;
    const double scaled = estimate_pnorm(BlockOperator(c * m), p).value;
    CHECK(std::abs(scaled - std::abs(c) * base) <= 1e-9 * std::max(1.0, scaled));
    const double dual = estimate_pnorm(BlockOperator(m.adjoint()), p.conjugate()).value;
    CHECK(std::abs(dual - base) <= 1e-6);
}

TEST_CASE("interpolation sanity for p >= 2") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 4; ++trial) {
        const ComplexMatrix m = random_complex(4, 4, rng);
        const double n2 = exact_pnorm_special(m, PExponent(2.0));
        const double ninf = exact_pnorm_special(m, PExponent::infinity());
        for (double p : {3.0, 4.0}) {
            const double v = estimate_pnorm(BlockOperator(m), PExponent(p)).value;
            CHECK(v <= std::pow(ninf, 1.0 - 2.0 / p) * std::pow(n2, 2.0 / p) + 1e-6);
        }
    }
}

TEST_CASE("warm starts and known upper bounds") {
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = 0.5;
    d(1, 1) = 2.0;
    d(2, 2) = 1.0;
    ComplexVector e1 = ComplexVector::Zero(3);
    e1[1] = 1.0;
    PNormConfig cfg;
    cfg.restarts = 0;
    cfg.starts = {BlockVector::from_scalars(e1)};
    const auto est = estimate_pnorm(BlockOperator(d), PExponent(3.0), cfg);
    CHECK(est.value == doctest::Approx(2.0));
    CHECK(est.restarts_used == 1);

    cfg.restarts = 10;
    cfg.known_upper_bound = 2.0;
    CHECK(estimate_pnorm(BlockOperator(d), PExponent(3.0), cfg).restarts_used == 1);

    cfg.starts = {BlockVector::from_scalars(ComplexVector::Zero(2))};
    CHECK_THROWS_AS(estimate_pnorm(BlockOperator(d), PExponent(3.0), cfg), Error);
}
