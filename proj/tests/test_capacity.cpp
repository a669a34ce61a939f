#include "lorcap/capacity.hpp"
#include "lorcap/testfn.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace lorcap;

namespace {

CapacityProblem small_problem(CapacityVariant v, double p = 1.5, double q = 1.0) {
    CapacityProblem pr;
    pr.exp = LorentzExponents(p, q);
    pr.variant = v;
    pr.geometry = GridGeometry::centered_box(2, 1.0, 0.125);
    std::vector<double> origin{0.0, 0.0};
    pr.target = cube_mask_meeting(pr.geometry, origin, 0.2);
    pr.domain = cube_mask_centers(pr.geometry, origin, 0.6);
    return pr;
}

double linf_ramp(std::span<const double> x, double r) {
    double d = 0.0;
    for (double xi : x) d = std::max(d, std::fabs(xi));
    return std::clamp((2.0 * r - d) / r, 0.0, 1.0);
}

}  // namespace

TEST_CASE("forward differences of a linear function") {
    GridGeometry g = GridGeometry::centered_box(2, 1.0, 0.25);
    GridFunction u(g);
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        auto x = g.cell_center(c);
        u.samples[c] = 3.0 * x[0] - 4.0 * x[1];
    }
    auto mag = gradient_magnitude(u);
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        auto idx = g.unravel(c);
        if (idx[0] + 1 < g.shape[0] && idx[1] + 1 < g.shape[1]) CHECK(mag[c] == doctest::Approx(5.0));
    }
}

TEST_CASE("norm subgradient matches finite differences") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    std::vector<double> v(12);
    for (double& x : v) x = u(rng);
    for (double q : {1.0, 2.0}) {
        LorentzExponents e(1.5, q);
        NormGradient ng = lorentz_norm_gradient(v, 0.3, e);
        CHECK(ng.norm == doctest::Approx(static_cast<double>(lorentz_norm(values_to_profile(v, 0.3L), e))));
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double h = 1e-7;
            auto w = v;
            w[i] += h;
            double fd = (static_cast<double>(lorentz_norm(values_to_profile(w, 0.3L), e)) - ng.norm) / h;
            CHECK(ng.gradient[i] == doctest::Approx(fd).epsilon(1e-4));
        }
    }
}

TEST_CASE("objective is convex at the norm level") {
    CapacityProblem pr = small_problem(CapacityVariant::Variational);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        GridFunction a(pr.geometry), b(pr.geometry), m(pr.geometry);
        for (std::size_t c = 0; c < a.size(); ++c) {
            a.samples[c] = u(rng);
            b.samples[c] = u(rng);
            m.samples[c] = 0.5 * (a.samples[c] + b.samples[c]);
        }
        double p = pr.exp.p;
        double na = std::pow(objective(pr, a), 1 / p), nb = std::pow(objective(pr, b), 1 / p);
        CHECK(std::pow(objective(pr, m), 1 / p) <= 0.5 * (na + nb) * (1 + 1e-12));
    }
}

TEST_CASE("minimizer is feasible, deterministic and beats the ramp competitor") {
    CapacityProblem pr = cube_annulus_problem(2, 1.5, 0.5, 0.125);
    SolverOptions opt;
    opt.seed = 4;
    CapacityResult r = minimize(pr, opt);
    const Mask free = pr.free_cells();
    for (std::size_t c = 0; c < pr.target.size(); ++c) {
        double v = r.minimizer.samples[c];
        if (pr.target[c]) CHECK(v == 1.0);
        if (!pr.target[c] && !free[c]) CHECK(v == 0.0);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK(r.value == doctest::Approx(objective(pr, r.minimizer)));

    GridFunction ramp(pr.geometry);
    for (std::size_t c = 0; c < ramp.size(); ++c) {
        ramp.samples[c] = pr.target[c] ? 1.0 : (free[c] ? linf_ramp(pr.geometry.cell_center(c), 0.5) : 0.0);
    }
    CHECK(r.value <= objective(pr, ramp) * (1 + 1e-9));

    CapacityResult again = minimize(pr, opt);
    CHECK(again.value == r.value);
    CHECK(again.minimizer.samples == r.minimizer.samples);
    CHECK(again.iterations == r.iterations);
}

TEST_CASE("ramp oracle closed form") {
    for (int n : {1, 2, 3}) {
        double r = 0.7, p = 1.5;
        double m = (std::pow(4.0, n) - std::pow(2.0, n)) * std::pow(r, n);
        double norm = static_cast<double>(lorentz_norm(StepProfile({{1.0L / r, m}}), LorentzExponents(p, 1.0)));
        CHECK(ramp_oracle(n, p, r) == doctest::Approx(std::pow(norm, p)));
    }
}

TEST_CASE("capacity chain ordering on random instances") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-0.3, 0.3), s(0.1, 0.25);
    for (int t = 0; t < 3; ++t) {
        GridGeometry g = GridGeometry::centered_box(2, 1.0, 0.125);
        std::vector<double> c{u(rng), u(rng)};
        Mask E = cube_mask_meeting(g, c, s(rng));
        Mask G = cube_mask_centers(g, std::vector<double>{0.0, 0.0}, 0.8);
        ChainResult ch = chain_check(g, E, G, LorentzExponents(1.5, 1.0));
        CHECK(ch.ordered);
        CHECK(ch.worst_slack >= -1e-6);
        CHECK(ch.gamma <= ch.gamma_relative + 1e-6);
        CHECK(ch.gamma_relative <= ch.gamma_plus_relative + 1e-6);
        CHECK(ch.gamma <= ch.gamma_plus + 1e-6);
        CHECK(ch.gamma_plus <= ch.gamma_plus_relative + 1e-6);
    }
}

TEST_CASE("cutoff product rule bound") {
    GridGeometry g = GridGeometry::centered_box(2, 1.0, 0.0625);
    GridFunction v(g);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& x : v.samples) x = u(rng);
    CutoffSpec spec{{0.0, 0.0}, 0.25, 0.75, 3.0};  // slope 2, diagonal cells see 2√2
    CutoffReport r = cutoff_multiply(v, spec, 1.5);
    CHECK(r.discrete_lipschitz <= 3.0);
    CHECK(r.norm_D_v_tilde <= r.bound * (1 + 1e-12));
    for (std::size_t c = 0; c < g.cell_count(); ++c) CHECK(r.v_tilde.samples[c] <= v.samples[c]);
    CutoffSpec steep{{0.0, 0.0}, 0.25, 0.5, 3.0};
    CHECK_THROWS_AS(cutoff_multiply(v, steep, 1.5), std::invalid_argument);
}

TEST_CASE("masks") {
    GridGeometry g = GridGeometry::centered_box(2, 1.0, 0.25);
    std::vector<double> o{0.0, 0.0};
    // Cells are [-1 + 0.25 i, -1 + 0.25 (i + 1)); Q(0, 0.3) meets i = 2..5 on each axis.
    CHECK(mask_count(cube_mask_meeting(g, o, 0.3)) == 16);
    CHECK(mask_count(cube_mask_meeting(g, o, 0.25)) == 4);
    CHECK(mask_count(cube_mask_centers(g, o, 0.3)) == 4);
    CantorParams c(2, Rational(3, 2));
    GridGeometry fine = GridGeometry::centered_box(2, 1.5, 1.0 / 16);
    Mask t = cantor_target_mask(fine, c, 4);
    CHECK(mask_count(t) == 16);
}

TEST_CASE("problem validation") {
    CapacityProblem pr = small_problem(CapacityVariant::VariationalRelative);
    CHECK_NOTHROW(pr.validate());
    pr.target.assign(pr.target.size(), 0);
    CHECK_THROWS_WITH_AS(pr.validate(), doctest::Contains("target"), std::invalid_argument);
    CapacityProblem ring = small_problem(CapacityVariant::Variational);
    ring.target[0] = 1;
    CHECK_THROWS_AS(ring.validate(), std::invalid_argument);
}

TEST_CASE("extrapolation") {
    std::vector<double> geometric{10.0 - 4.0, 10.0 - 2.0, 10.0 - 1.0};
    std::string method;
    CHECK(extrapolate(geometric, &method) == doctest::Approx(10.0));
    CHECK(method == "aitken");
    std::vector<double> two{1.0, 2.0};
    CHECK(extrapolate(two, &method) == doctest::Approx(3.0));
    CHECK(method == "richardson");
}

TEST_CASE("test-function upper bound") {
    CantorParams c(2, Rational(3, 2));
    LorentzExponents e(1.5, 1.0);
    long double norm = lorentz_norm(gradient_profile(TestFunction(c, 2)), e);
    CHECK(testfn_upper_bound(c, 2, e) == doctest::Approx(static_cast<double>(std::pow(norm, 1.5L))));
}
