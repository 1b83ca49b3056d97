#include <doctest.h>

#include <cmath>

#include "rmc/driving.hpp"
#include "rmc/error.hpp"
#include "support/property.hpp"

using namespace rmc;

namespace {

DrivingSystem telegraph(std::size_t n, std::uint64_t seed, double h = 1.0) {
    return DrivingSystem::telegraph(std::vector<double>(2 * n - 2, 0.5), std::vector<double>(2 * n - 2, 2.0), h,
                                    seed);
}

}  // namespace

TEST_CASE("constant path") {
    const auto d = DrivingSystem::constant({1, 2, 3, 4});
    for (double t : {-100.0, -1.5, 0.0, 0.37, 1e6}) {
        CHECK(coefficients_at(d, t).values == std::vector<double>{1, 2, 3, 4});
    }
    CHECK(d.states() == 3);
    CHECK(discontinuities_in(d, -10, 10).empty());
    CHECK(d.piecewise_constant());
}

TEST_CASE("periodic path repeats with its period") {
    const auto d = DrivingSystem::periodic({0.5, 0.5}, {2.0, 2.0}, 2.0, std::uint64_t{9});
    const auto a = coefficients_at(d, 0.37).values;
    const auto b = coefficients_at(d, 0.37 + 2.0).values;
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
    CHECK_FALSE(d.piecewise_constant());
    CHECK(discontinuities_in(d, 0, 10).empty());
}

TEST_CASE("periodic path spans exactly its bounds") {
    const auto d = DrivingSystem::periodic({0.5, 1.0}, {2.0, 3.0}, 1.0, std::vector<double>{0.0, 0.0});
    CHECK(coefficients_at(d, 0.25).values[0] == doctest::Approx(2.0));
    CHECK(coefficients_at(d, 0.75).values[0] == doctest::Approx(0.5));
    CHECK(coefficients_at(d, 0.0).values[0] == doctest::Approx(1.25));
    CHECK(coefficients_at(d, 0.75).values[1] == doctest::Approx(1.0));
}

TEST_CASE("telegraph samples stay inside the declared bounds") {
    const auto d = telegraph(5, 11);
    prop::for_all(1, 10000, [&](prop::Gen& g) {
        const auto c = coefficients_at(d, g.uniform(-200.0, 200.0)).values;
        for (double x : c) {
            REQUIRE(x >= 0.5);
            REQUIRE(x <= 2.0);
        }
    });
}

TEST_CASE("shift by zero is the identity") {
    const auto d = telegraph(4, 3);
    CHECK(shift(d, 0.0) == d);
}

TEST_CASE("shift group law at a point is bit-exact") {
    for (const auto& d : {telegraph(4, 3), DrivingSystem::periodic({0.5, 0.5}, {2, 2}, 2.0, std::uint64_t{1})}) {
        CHECK(coefficients_at(shift(d, 1.5), -1.5).values == coefficients_at(d, 0.0).values);
    }
}

TEST_CASE("shift and unshift reproduce the telegraph path") {
    const auto d = telegraph(4, 5);
    const auto back = shift(shift(d, 2.0), -2.0);
    for (int k = 0; k < 100; ++k) {
        const double t = -10.0 + 20.0 * k / 99.0;
        REQUIRE(coefficients_at(back, t).values == coefficients_at(d, t).values);
    }
}

TEST_CASE("renewal counts match the holding-time mean") {
    // Poisson count with mean 100 per stream: 3 sigma = 30
    const auto d = telegraph(5, 2024);
    for (std::size_t s = 0; s < d.n_coeffs(); ++s) {
        const auto jumps = stream_discontinuities(d, s, 0.0, 100.0);
        CAPTURE(s);
        CHECK(std::abs(static_cast<double>(jumps.size()) - 100.0) <= 30.0);
    }
}

TEST_CASE("backward holding times have the same law as forward ones") {
    const auto d = telegraph(2, 77, 0.5);
    const auto fwd = stream_discontinuities(d, 0, 0.0, 1000.0).size();
    const auto bwd = stream_discontinuities(d, 0, -1000.0, 0.0).size();
    // each ~ Poisson(2000), sd ~ 45
    CHECK(std::abs(static_cast<double>(fwd) - 2000.0) < 200.0);
    CHECK(std::abs(static_cast<double>(bwd) - 2000.0) < 200.0);
}

TEST_CASE("jump times move with the shift") {
    const auto d = telegraph(3, 8);
    const double s = 3.25;
    const auto shifted = discontinuities_in(shift(d, s), -4.0, 6.0);
    const auto direct = discontinuities_in(d, -4.0 + s, 6.0 + s);
    REQUIRE(shifted.size() == direct.size());
    for (std::size_t i = 0; i < direct.size(); ++i) CHECK(shifted[i] == doctest::Approx(direct[i] - s).epsilon(1e-14));
}

TEST_CASE("coefficients are constant between reported jumps") {
    const auto d = telegraph(3, 21);
    auto cuts = discontinuities_in(d, -5.0, 5.0);
    REQUIRE(std::is_sorted(cuts.begin(), cuts.end()));
    cuts.insert(cuts.begin(), -5.0);
    cuts.push_back(5.0);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        const auto lo = coefficients_at(d, a + 0.01 * (b - a)).values;
        const auto hi = coefficients_at(d, b - 0.01 * (b - a)).values;
        REQUIRE(lo == hi);
    }
}

TEST_CASE("schedule pieces agree with pointwise evaluation") {
    const auto d = telegraph(4, 12);
    const auto sc = schedule(d, -3.0, 7.0);
    REQUIRE(sc.starts.front() == -3.0);
    prop::for_all(5, 500, [&](prop::Gen& g) {
        const double t = g.uniform(-3.0, 7.0);
        REQUIRE(sc.values[sc.piece_at(t)] == coefficients_at(d, t).values);
    });
    CHECK_THROWS_AS(schedule(DrivingSystem::periodic({1, 1}, {2, 2}, 1.0, std::uint64_t{0}), 0, 1), InvalidArgument);
}

TEST_CASE("distinct seeds give distinct paths, equal seeds equal paths") {
    CHECK(coefficients_at(telegraph(3, 1), 0.5).values != coefficients_at(telegraph(3, 2), 0.5).values);
    CHECK(coefficients_at(telegraph(3, 1), 0.5).values == coefficients_at(telegraph(3, 1), 0.5).values);
}

TEST_CASE("constructor preconditions") {
    CHECK_THROWS_AS(DrivingSystem::constant({1.0, 0.0}), CoefficientError);
    try {
        DrivingSystem::telegraph({0.5, 0.0}, {2, 2}, 1.0, 0);
        FAIL("expected CoefficientError");
    } catch (const CoefficientError& e) {
        CHECK(e.index() == 1);
        CHECK(std::string(e.what()).find("0<c_*") != std::string::npos);
    }
    CHECK_THROWS_AS(DrivingSystem::telegraph({3, 1}, {2, 2}, 1.0, 0), CoefficientError);
    CHECK_THROWS_AS(DrivingSystem::telegraph({1, 1}, {2, 2}, 0.0, 0), InvalidArgument);
    CHECK_THROWS_AS(DrivingSystem::periodic({1, 1}, {2, 2}, -1.0, std::uint64_t{0}), InvalidArgument);
    CHECK_THROWS_AS(DrivingSystem::constant({1.0}), InvalidArgument);
    CHECK_THROWS_AS(discontinuities_in(telegraph(2, 0), 1.0, 1.0), InvalidArgument);
}

TEST_CASE("model names round-trip") {
    for (auto m : {DriverModel::constant, DriverModel::periodic, DriverModel::telegraph}) {
        CHECK(parse_driver_model(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_driver_model("brownian"), InvalidArgument);
}
