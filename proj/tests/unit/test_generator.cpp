#include <doctest.h>

#include <numeric>

#include "rmc/driving.hpp"
#include "rmc/error.hpp"
#include "rmc/generator.hpp"
#include "support/oracles.hpp"
#include "support/property.hpp"

using namespace rmc;

TEST_CASE("N=3 bands from (1,2,3,4)") {
    const std::vector<double> c{1, 2, 3, 4};
    const auto q = build_generator(c);
    CHECK(q.n() == 3);
    CHECK(q.sub() == std::vector<double>{1, 3});
    CHECK(q.sup() == std::vector<double>{2, 4});
    CHECK(q.diag() == std::vector<double>{-1, -5, -4});
    const auto m = q.dense();
    for (std::size_t j = 0; j < 3; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < 3; ++i) s += m(i, j);
        CHECK(s == 0.0);
    }
    CHECK(q.max_abs_diag() == 5.0);
}

TEST_CASE("N=2 dense matrix from (1,2)") {
    const std::vector<double> c{1, 2};
    const auto m = build_generator(c).dense();
    CHECK(m(0, 0) == -1.0);
    CHECK(m(0, 1) == 2.0);
    CHECK(m(1, 0) == 1.0);
    CHECK(m(1, 1) == -2.0);
}

TEST_CASE("dense form agrees with the oracle construction") {
    prop::for_all(3, 50, [](prop::Gen& g) {
        const auto n = g.index(2, 9);
        const auto c = g.reals(2 * n - 2, 0.1, 5.0);
        const auto m = build_generator(c).dense();
        const auto o = oracle::dense_generator(c);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) REQUIRE(m(i, j) == o(i, j));
        }
    });
}

TEST_CASE("non-positive coefficient is rejected with its index") {
    const std::vector<double> c{1, -0.5};
    try {
        build_generator(c);
        FAIL("expected CoefficientError");
    } catch (const CoefficientError& e) {
        CHECK(e.index() == 1);
    }
    CHECK_THROWS_AS(build_generator(std::vector<double>{1, 2, 3}), InvalidArgument);
    CHECK_THROWS_AS(build_generator(std::vector<double>{}), InvalidArgument);
    CHECK_THROWS_AS(build_generator(std::vector<double>{1, 0}), CoefficientError);
}

TEST_CASE("apply examples") {
    const auto q2 = build_generator(std::vector<double>{1, 2});
    CHECK(rmc::apply(q2, std::vector<double>{1, 0}) == std::vector<double>{-1, 1});
    const auto q3 = build_generator(std::vector<double>{1, 2, 3, 4});
    const auto v = rmc::apply(q3, std::vector<double>{1, 1, 1});
    CHECK(v == std::vector<double>{1, 0, -1});
    const auto dense = oracle::stdvec(oracle::dense_generator(std::vector<double>{1, 2, 3, 4}) * Eigen::Vector3d(1, 1, 1));
    CHECK(oracle::max_abs_diff(v, dense) == 0.0);
    CHECK_THROWS_AS(rmc::apply(q3, std::vector<double>{1, 1}), DimensionMismatch);
}

TEST_CASE("apply preserves total mass and matches the dense product") {
    prop::for_all(4, 200, [](prop::Gen& g) {
        const auto n = g.index(2, 12);
        const auto c = g.reals(2 * n - 2, 0.5, 2.0);
        const auto v = g.reals(n, -1.0, 1.0);
        const auto qv = rmc::apply(build_generator(c), v);
        double mass = 0.0, scale = 0.0;
        for (double x : qv) {
            mass += x;
            scale += std::abs(x);
        }
        REQUIRE(std::abs(mass) <= 1e-14 * (1.0 + scale));
        const Eigen::VectorXd ref = oracle::dense_generator(c) * oracle::vec(v);
        REQUIRE(oracle::max_abs_diff(qv, oracle::stdvec(ref)) <= 1e-14 * (1.0 + scale));
    });
}

TEST_CASE("comparison matrix for equal bounds is the generator") {
    const std::vector<double> c{0.7, 1.3, 2.0, 0.9};
    const auto qbar = comparison_matrix(c, c);
    const auto q = build_generator(c);
    CHECK(qbar.bands() == q.bands());
}

TEST_CASE("comparison matrix N=2 bounds [1,2]") {
    const auto qbar = comparison_matrix(std::vector<double>{1, 1}, std::vector<double>{2, 2});
    const auto m = qbar.dense();
    CHECK(m(0, 0) == -2.0);
    CHECK(m(0, 1) == 1.0);
    CHECK(m(1, 0) == 1.0);
    CHECK(m(1, 1) == -2.0);
    CHECK(rmc::apply(qbar, std::vector<double>{1, 1}) == std::vector<double>{-1, -1});
}

TEST_CASE("comparison matrix bounds telegraph generators from below") {
    const std::vector<double> lo(8, 0.5), hi(8, 2.0);
    const auto d = DrivingSystem::telegraph(lo, hi, 1.0, 99);
    const auto qbar = comparison_matrix(lo, hi);
    prop::for_all(6, 1000, [&](prop::Gen& g) {
        const auto q = build_generator(coefficients_at(d, g.uniform(-50, 50)).values);
        REQUIRE(qbar.bounds_below(q));
        const auto a = q.dense(), b = qbar.dense();
        for (std::size_t i = 0; i < a.data.size(); ++i) REQUIRE(a.data[i] - b.data[i] >= 0.0);
    });
}

TEST_CASE("comparison matrix column sums are non-positive") {
    prop::for_all(7, 100, [](prop::Gen& g) {
        const auto n = g.index(2, 8);
        auto lo = g.reals(2 * n - 2, 0.1, 1.0);
        auto hi = lo;
        for (double& x : hi) x += g.uniform(0.0, 2.0);
        const auto m = comparison_matrix(lo, hi).dense();
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += m(i, j);
            REQUIRE(s <= 1e-15);
        }
    });
    CHECK_THROWS_AS(comparison_matrix(std::vector<double>{0, 1}, std::vector<double>{1, 1}), CoefficientError);
    CHECK_THROWS_AS(comparison_matrix(std::vector<double>{2, 1}, std::vector<double>{1, 1}), CoefficientError);
    CHECK_THROWS_AS(comparison_matrix(std::vector<double>{1, 1}, std::vector<double>{1, 1, 1, 1}), InvalidArgument);
}

TEST_CASE("stationary distribution examples") {
    auto pi = stationary_distribution(build_generator(std::vector<double>{1, 2}));
    CHECK(pi[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(pi[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const auto qpi = rmc::apply(build_generator(std::vector<double>{1, 2}), pi.values());
    CHECK(std::abs(qpi[0]) + std::abs(qpi[1]) < 1e-14);

    pi = stationary_distribution(build_generator(std::vector<double>{1, 1, 1, 1}));
    for (int i = 0; i < 3; ++i) CHECK(pi[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const std::vector<double> c{1, 2, 3, 4};
    pi = stationary_distribution(build_generator(c));
    const std::vector<double> expect{8.0 / 15, 4.0 / 15, 3.0 / 15};
    CHECK(oracle::max_abs_diff(pi.values(), expect) < 1e-15);
    const auto ns = oracle::null_space_distribution(oracle::dense_generator(c));
    CHECK(oracle::max_abs_diff(pi.values(), oracle::stdvec(ns)) < 1e-14);
}

TEST_CASE("stationary distribution matches the null-space oracle") {
    prop::for_all(8, 100, [](prop::Gen& g) {
        const auto n = g.index(2, 10);
        const auto c = g.reals(2 * n - 2, 0.5, 2.0);
        const auto pi = stationary_distribution(build_generator(c));
        const auto ns = oracle::null_space_distribution(oracle::dense_generator(c));
        REQUIRE(oracle::max_abs_diff(pi.values(), oracle::stdvec(ns)) < 1e-12);
    });
}

TEST_CASE("probability vector validation") {
    CHECK_NOTHROW(ProbabilityVector({0.25, 0.75}));
    CHECK_THROWS_AS(ProbabilityVector({0.5, 0.6}), InvalidArgument);
    CHECK_THROWS_AS(ProbabilityVector({-0.1, 1.1}), InvalidArgument);
    CHECK_NOTHROW(ProbabilityVector({0.5, 0.5 + 1e-10}, 1e-9));
    CHECK(ProbabilityVector::vertex(3, 1).values() == std::vector<double>{0, 1, 0});
    CHECK(ProbabilityVector::barycenter(4)[2] == 0.25);
}

TEST_CASE("in-place rebuild equals a fresh build") {
    auto q = build_generator(std::vector<double>{1, 1, 1, 1});
    const std::vector<double> c{0.3, 1.7, 2.2, 0.9};
    rebuild_generator(q, c);
    CHECK(q == build_generator(c));
}
