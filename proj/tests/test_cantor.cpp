#include "lorcap/cantor.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace lorcap;

namespace {

double linf(std::span<const double> x, std::span<const double> c) {
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::fabs(x[i] - c[i]));
    return r;
}

}  // namespace

TEST_CASE("beta and its defining identity") {
    CantorParams c(2, Rational(3, 2));
    CHECK(c.beta() == 3);
    CHECK(c.beta_identity_holds());
    CantorParams d(5, Rational(5, 4));
    CHECK(d.beta() == Rational(1, 3));
    CHECK(d.root() == 3u);
    CHECK(d.beta_identity_holds());
    CHECK_THROWS_AS(CantorParams(2, Rational(2)), std::invalid_argument);
    CHECK_THROWS_AS(CantorParams(2, Rational(1)), std::invalid_argument);
}

TEST_CASE("words") {
    Word w = Word::parse(2, "++|-+");
    CHECK(w.length() == 2);
    CHECK(w.to_string() == "++|-+");
    CHECK(Word::parse(2, w.to_string()) == w);
    CHECK_THROWS(Word::parse(2, "+-+"));
    CHECK_THROWS(Word::parse(2, "+x"));
    auto all = enumerate_words(2, 3);
    CHECK(all.size() == 64);
    Budget tiny{10};
    CHECK_THROWS_AS(enumerate_words(2, 3, tiny), ResourceError);
}

TEST_CASE("first-generation frame measure is 63/16") {
    CantorParams c(2, Rational(3, 2));
    Surd m = generation_measure(c, 1);
    REQUIRE(m.is_rational());
    CHECK(m.as_rational() == Rational(63, 16));

    // Monte Carlo against the frame list, not against the closed form.
    auto rows = frame_rows(c, 1);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int samples = 200000;
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
        double x[2] = {u(rng), u(rng)};
        for (const FrameRow& r : rows) {
            double d = linf(x, r.center);
            if (d < r.outer && d > r.inner) {
                ++hits;
                break;
            }
        }
    }
    double area = 4.0 * hits / samples;
    CHECK(std::fabs(area - 63.0 / 16.0) / (63.0 / 16.0) < 1e-2);
}

TEST_CASE("tiling: frames plus cores fill the unit cube exactly") {
    for (Variant v : {Variant::Uniform, Variant::Harmonic}) {
        for (Rational p : {Rational(5, 4), Rational(3, 2), Rational(7, 4)}) {
            CantorParams c(2, p, v);
            if (v == Variant::Harmonic) continue;  // Harmonic frames leave gaps
            Surd total(c.root());
            for (int k = 1; k <= 6; ++k) {
                total += generation_measure(c, k);
                CHECK(total + core_measure(c, k) == Surd(c.root(), Rational(4)));
            }
        }
    }
}

TEST_CASE("uniform nesting is tight and siblings touch") {
    CantorParams c(3, Rational(2));
    for (int k = 1; k <= 5; ++k) {
        CHECK(nesting_margin(c, k).is_zero());
        CHECK(sibling_overlap(c, k).is_zero());
    }
}

TEST_CASE("harmonic children stay inside their parents") {
    CantorParams c(2, Rational(3, 2), Variant::Harmonic);
    for (int k = 1; k <= 8; ++k) CHECK(nesting_margin(c, k).sign() >= 0);
}

TEST_CASE("centers against the explicit sum") {
    CantorParams c(2, Rational(3, 2), Variant::Harmonic);
    Word w = Word::parse(2, "+-|--|-+");
    auto x = center(c, w);
    const double beta = 3.0;
    double expect[2] = {0.0, 0.0};
    int signs[3][2] = {{1, -1}, {-1, -1}, {-1, 1}};
    for (int i = 1; i <= 3; ++i) {
        for (int a = 0; a < 2; ++a) expect[a] += std::exp2(beta - i * (beta + 1)) * signs[i - 1][a] / i;
    }
    CHECK(x[0] == doctest::Approx(expect[0]).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(expect[1]).epsilon(1e-15));
    Frame f = frame(c, w);
    CHECK(f.outer == doctest::Approx(std::exp2(beta - 3 * (beta + 1)) / 2));
    CHECK(f.inner == doctest::Approx(std::exp2(-3 * (beta + 1)) / 3));
}

TEST_CASE("locate agrees with brute-force membership") {
    for (Variant v : {Variant::Uniform, Variant::Harmonic}) {
        CantorParams c(2, Rational(3, 2), v);
        const int depth = 3;
        auto rows = frame_rows(c, depth);
        auto cores = core_cubes(c, depth);
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int s = 0; s < 3000; ++s) {
            double x[2] = {u(rng), u(rng)};
            Location loc = locate(c, x, depth);
            int frames = 0;
            for (const FrameRow& r : rows) {
                double d = linf(x, r.center);
                if (d < r.outer && d > r.inner) {
                    ++frames;
                    if (v == Variant::Uniform && loc.kind == Location::Kind::Frame && r.generation == loc.generation) {
                        CHECK(r.word == *loc.word);
                    }
                }
            }
            bool in_core = std::any_of(cores.begin(), cores.end(),
                                       [&](const Cube& q) { return linf(x, q.center) < q.half_side; });
            switch (loc.kind) {
                case Location::Kind::Frame: CHECK(frames >= 1); break;
                case Location::Kind::Core: CHECK(in_core); break;
                case Location::Kind::Gap:
                    CHECK(v == Variant::Harmonic);
                    CHECK(frames == 0);
                    CHECK_FALSE(in_core);
                    break;
                case Location::Kind::Null: break;
            }
            if (v == Variant::Uniform && loc.kind != Location::Kind::Null) {
                CHECK(frames + (in_core ? 1 : 0) == 1);
            }
        }
    }
    CantorParams c(2, Rational(3, 2));
    double outside[2] = {1.5, 0.0};
    CHECK_THROWS_AS(locate(c, outside, 2), std::domain_error);
    double split[2] = {0.0, 0.3};
    CHECK(locate(c, split, 2).kind == Location::Kind::Null);
}

TEST_CASE("axis projection is the one-dimensional construction") {
    CantorParams c(4, Rational(2));
    auto rows = axis_projection_rows(c, 3);
    CHECK(rows.size() == 2 + 4 + 8);
    CantorParams line(4, Rational(2));
    for (const FrameRow& r : rows) {
        CHECK(r.center.size() == 1);
        CHECK(r.outer == doctest::Approx(outer_half_side(line, r.generation).to_double()));
    }
}

TEST_CASE("frame enumeration respects the budget") {
    CantorParams c(3, Rational(2));
    CHECK_THROWS_AS(frame_rows(c, 6, Budget{1000}), ResourceError);
}
