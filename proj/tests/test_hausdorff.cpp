#include "lorcap/cantor.hpp"
#include "lorcap/hausdorff.hpp"

#include <doctest.h>

#include <cmath>

using namespace lorcap;

TEST_CASE("critical covering sums") {
    for (Rational p : {Rational(5, 4), Rational(3, 2), Rational(7, 4)}) {
        CantorParams u(2, p, Variant::Uniform);
        CantorParams h(2, p, Variant::Harmonic);
        Rational d = Rational(2) - p;
        for (int k = 1; k <= 12; ++k) {
            CoveringReport ru = covering_content(u, d, k);
            REQUIRE(ru.exact.has_value());
            CHECK(ru.exact->is_one());
            CHECK(ru.sum == doctest::Approx(1.0).epsilon(1e-12));

            CoveringReport rh = covering_content(h, d, k);
            CHECK(rh.exact->log2_exponent == 0);
            CHECK(rh.exact->k_exponent == p - 2);
            CHECK(rh.sum == doctest::Approx(std::pow(k, to_double(p) - 2.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("covering sum against direct enumeration") {
    // 2^{nk} cubes of side 2·inner_k, each contributing (side)^d.
    CantorParams c(2, Rational(3, 2), Variant::Harmonic);
    for (int k = 1; k <= 4; ++k) {
        auto cubes = core_cubes(c, k);
        long double sum = 0.0L;
        for (const Cube& q : cubes) sum += std::pow(static_cast<long double>(q.half_side), 0.7L);
        CoveringReport r = covering_content(c, 0.7, k);
        CHECK(r.count == cubes.size());
        CHECK(r.sum == doctest::Approx(static_cast<double>(sum)).epsilon(1e-12));
    }
}

TEST_CASE("harmonic sums blow up below the critical exponent") {
    CantorParams h(2, Rational(3, 2), Variant::Harmonic);
    CHECK(covering_content(h, Rational(1, 4), 20).sum > 1e3);
    long double prev = 0.0L;
    for (int k = 5; k <= 20; ++k) {
        long double s = covering_content(h, 0.25, k).sum;
        CHECK(s > prev);
        CHECK(s == doctest::Approx(static_cast<double>(harmonic_blowup_bound(h, 0.25, k))).epsilon(1e-10));
        prev = s;
    }
}

TEST_CASE("mass distribution bound") {
    CantorParams c(2, Rational(3, 2));
    MassBound m = mass_lower_bound(c, 0.5, 10);
    CHECK(m.ratios.size() == 10);
    for (long double r : m.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
    MassBound below = mass_lower_bound(c, 0.4, 10);
    CHECK(below.bound > 0.0L);
    CHECK(below.argmin == 1);
    MassBound above = mass_lower_bound(c, 0.6, 10);
    CHECK(above.argmin == 10);
    CHECK(above.bound == doctest::Approx(std::exp2(-0.4 * 10)));
    CHECK_THROWS_AS(mass_lower_bound(c, 0.0, 3), std::domain_error);
}

TEST_CASE("dimension estimate brackets n - p") {
    for (Variant v : {Variant::Uniform, Variant::Harmonic}) {
        DimensionEstimate d = dimension_estimate(CantorParams(2, Rational(3, 2), v), 12, 0.02);
        REQUIRE(d.determinate);
        CHECK(std::fabs(d.estimate - 0.5) <= 0.02);
        CHECK(d.lo <= 0.5);
        CHECK(d.hi >= 0.5);
    }
    DimensionEstimate shallow = dimension_estimate(CantorParams(2, Rational(3, 2)), 1, 0.02);
    CHECK_FALSE(shallow.determinate);
    CHECK_FALSE(shallow.message.empty());
}
