// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
// usage: acceptance <work-dir> <path-to-lorcap>

#include "lorcap/capacity.hpp"
#include "lorcap/cantor.hpp"
#include "lorcap/experiment.hpp"
#include "lorcap/hausdorff.hpp"
#include "lorcap/orlicz.hpp"
#include "lorcap/testfn.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace lorcap;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Verdict()>& body) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::cout << fmt::format("{} {:>2} {}: {} [{:.2f} s]", v.pass ? "PASS" : "FAIL", id, name, v.detail, secs)
              << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

bool strictly_decreasing(const std::vector<long double>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] < xs[i - 1])) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <work-dir> <lorcap>\n";
        return 1;
    }
    const fs::path work = argv[1];
    const std::string cli = argv[2];
    fs::create_directories(work);

    criterion(1, "factor-p layer-cake identity", [] {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> v(1e-3, 10.0), m(1e-3, 5.0);
        std::uniform_int_distribution<int> len(1, 12);
        long double worst = 0.0L;
        auto t0 = std::chrono::steady_clock::now();
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<Step> steps(static_cast<std::size_t>(len(rng)));
            for (Step& s : steps) s = {v(rng), m(rng)};
            StepProfile f = StepProfile::from_unsorted(steps);
            for (double p : {1.25, 1.5, 2.0, 3.0}) {
                long double a = lorentz_norm(f, LorentzExponents(p, 1.0));
                long double b = p * layercake_p1(f, p);
                worst = std::max(worst, std::fabs(a - b) / b);
            }
        }
        double secs = seconds_since(t0);
        return Verdict{worst <= 1e-10L && secs < 5.0,
                       fmt::format("max rel err {:.2e} over 4000 cases (<= 1e-10), {:.3f} s (< 5 s)",
                                   static_cast<double>(worst), secs)};
    });

    criterion(2, "indicator closed form", [] {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> logm(-10.0, 10.0);
        long double worst = 0.0L;
        for (int i = 0; i < 100; ++i) {
            long double m = std::exp(static_cast<long double>(logm(rng)));
            for (double p : {1.25, 1.5, 2.0, 3.0}) {
                long double expect = p * std::pow(m, 1.0L / p);
                long double got = lorentz_norm(StepProfile({{1.0L, m}}), LorentzExponents(p, 1.0));
                worst = std::max(worst, std::fabs(got - expect) / expect);
            }
        }
        return Verdict{worst <= 1e-15L, fmt::format("max rel err {:.2e} over 100 masses x 4 exponents",
                                                    static_cast<double>(worst))};
    });

    criterion(3, "tiling identity", [] {
        int checked = 0;
        bool ok = true;
        for (Rational p : {Rational(5, 4), Rational(3, 2), Rational(7, 4)}) {
            CantorParams c(2, p);
            Surd frames(c.root());
            for (int k = 1; k <= 6; ++k) {
                frames += generation_measure(c, k);
                ok = ok && frames + core_measure(c, k) == Surd(c.root(), Rational(4));
                ++checked;
            }
        }
        return Verdict{ok, fmt::format("{} exact identities in Q(2^(1/b)), n = 2, p in {{5/4, 3/2, 7/4}}, k <= 6",
                                       checked)};
    });

    criterion(4, "frame-measure cross-check", [] {
        CantorParams c(2, Rational(3, 2));
        Surd m = generation_measure(c, 1);
        bool exact = m.is_rational() && m.as_rational() == Rational(63, 16);
        auto rows = frame_rows(c, 1);
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const int samples = 1000000;
        int hits = 0;
        for (int s = 0; s < samples; ++s) {
            double x0 = u(rng), x1 = u(rng);
            for (const FrameRow& r : rows) {
                double d = std::max(std::fabs(x0 - r.center[0]), std::fabs(x1 - r.center[1]));
                if (d < r.outer && d > r.inner) {
                    ++hits;
                    break;
                }
            }
        }
        double area = 4.0 * hits / samples;
        double rel = std::fabs(area - 63.0 / 16.0) / (63.0 / 16.0);
        return Verdict{exact && rel <= 1e-2, fmt::format("exact {} = 63/16: {}; Monte Carlo {:.5f}, rel err {:.2e}",
                                                         m.to_double(), exact ? "yes" : "no", area, rel)};
    });

    criterion(5, "covering reproductions", [] {
        bool ok = true;
        int identities = 0;
        for (auto [n, p] : {std::pair{2, Rational(3, 2)}, std::pair{2, Rational(5, 4)}, std::pair{3, Rational(2)}}) {
            Rational d = Rational(n) - p;
            CantorParams u(n, p, Variant::Uniform), h(n, p, Variant::Harmonic);
            for (int k = 1; k <= 12; ++k) {
                ok = ok && covering_content(u, d, k).exact->is_one();
                const ExactPower e = *covering_content(h, d, k).exact;
                ok = ok && e.log2_exponent == 0 && e.k_exponent == p - n && e.k == k;
                identities += 2;
            }
        }
        CantorParams h(2, Rational(3, 2), Variant::Harmonic);
        int first = 0;
        long double at20 = 0.0L;
        for (int k = 1; k <= 20; ++k) {
            long double s = covering_content(h, Rational(1, 4), k).sum;
            if (first == 0 && s > 1e3L) first = k;
            if (k == 20) at20 = s;
        }
        ok = ok && first != 0;
        return Verdict{ok, fmt::format("{} exact identities (sum = 1 and k^(p-n)); Harmonic d = 1/4 sum exceeds 1e3 "
                                       "at k = {}, reaches {:.3e} at k = 20",
                                       identities, first, static_cast<double>(at20))};
    });

    criterion(6, "test-function decay, q = 2 and q = inf", [] {
        CantorParams c(2, Rational(3, 2));
        auto t0 = std::chrono::steady_clock::now();
        auto rows = norm_table(c, LorentzExponents(1.5, 2.0), 2, 10);
        std::vector<long double> df, f;
        for (const NormRow& r : rows) {
            df.push_back(r.norm_Df);
            f.push_back(r.norm_f);
        }
        bool decay = strictly_decreasing(df) && df.back() <= 0.5L * df.front();
        bool f_to_zero = strictly_decreasing(f) && f.back() < 1e-6L * f.front();

        // Weak-type bound: C from the displayed slope bounds at j = 2.
        auto weak = norm_table(c, LorentzExponents(1.5, kInfinity), 2, 10);
        const long double C = 2.0L * weak.front().norm_Df_bound;
        long double worst = 0.0L;
        for (const NormRow& r : weak) worst = std::max(worst, r.j * r.norm_Df / C);
        bool weak_ok = worst <= 1.0L;
        double secs = seconds_since(t0);
        return Verdict{decay && f_to_zero && weak_ok && secs < 10.0,
                       fmt::format("|Df_j|_(p,2): {:.4f} -> {:.4f} strictly decreasing {}, ratio {:.3f} (<= 0.5); "
                                   "|f_j|_(p,2): {:.3e} -> {:.3e} decreasing {}; max j|Df_j|_(p,inf)/C = {:.4f} "
                                   "with C = {:.4f}",
                                   static_cast<double>(df.front()), static_cast<double>(df.back()),
                                   strictly_decreasing(df), static_cast<double>(df.back() / df.front()),
                                   static_cast<double>(f.front()), static_cast<double>(f.back()),
                                   strictly_decreasing(f), static_cast<double>(worst), static_cast<double>(C))};
    });

    criterion(7, "test-function decay, q = 1 (Harmonic)", [] {
        CantorParams c(2, Rational(3, 2), Variant::Harmonic);
        auto rows = norm_table(c, LorentzExponents(1.5, 1.0), 2, 10);
        long double lo = rows.front().ratio, hi = lo;
        std::vector<long double> df, f;
        for (const NormRow& r : rows) {
            lo = std::min(lo, r.ratio);
            hi = std::max(hi, r.ratio);
            df.push_back(r.norm_Df);
            f.push_back(r.norm_f);
        }
        bool band = hi / lo <= 4.0L;
        bool decay = strictly_decreasing(df) && strictly_decreasing(f);
        return Verdict{band && decay,
                       fmt::format("ratio band [{:.4f}, {:.4f}], B/b = {:.4f} (<= 4); |Df_j| {:.4f} -> {:.4f}, "
                                   "|f_j| {:.3e} -> {:.3e}, both strictly decreasing: {}",
                                   static_cast<double>(lo), static_cast<double>(hi), static_cast<double>(hi / lo),
                                   static_cast<double>(df.front()), static_cast<double>(df.back()),
                                   static_cast<double>(f.front()), static_cast<double>(f.back()), decay)};
    });

    criterion(8, "contrast check (Uniform, q = 1)", [] {
        CantorParams c(2, Rational(3, 2));
        auto rows = norm_table(c, LorentzExponents(1.5, 1.0), 2, 10);
        long double drift = 0.0L;
        for (const NormRow& r : rows) drift = std::max(drift, to_long_double(r.Cj));
        const long double floor = rows.front().norm_Df / drift;
        long double lowest = rows.front().norm_Df;
        for (const NormRow& r : rows) lowest = std::min(lowest, r.norm_Df);
        return Verdict{lowest >= floor,
                       fmt::format("min_j |Df_j|_(p,1) = {:.4f} >= |Df_2|_(p,1) / max C_j = {:.4f} / {:.4f} = {:.4f}",
                                   static_cast<double>(lowest), static_cast<double>(rows.front().norm_Df),
                                   static_cast<double>(drift), static_cast<double>(floor))};
    });

    criterion(9, "dimension estimate", [] {
        std::string detail;
        bool ok = true;
        for (Variant v : {Variant::Uniform, Variant::Harmonic}) {
            DimensionEstimate d = dimension_estimate(CantorParams(2, Rational(3, 2), v), 12, 0.02);
            ok = ok && d.determinate && std::fabs(d.estimate - 0.5) <= 0.02;
            detail += fmt::format("{} {:.4f} ", to_string(v), d.estimate);
        }
        return Verdict{ok, detail + "(target 0.5 +- 0.02, depth 12)"};
    });

    criterion(10, "capacity solver vs oracle and ordering chain", [] {
        std::vector<double> hs{0.125, 0.0625, 0.03125};
        RefinementResult ref = refine([](double h) { return cube_annulus_problem(2, 1.5, 0.5, h); }, hs);
        const double oracle = ramp_oracle(2, 1.5, 0.5);
        const double rel = std::fabs(ref.extrapolated - oracle) / oracle;

        std::mt19937_64 rng(10);
        std::uniform_real_distribution<double> shift(-0.25, 0.25), side(0.1, 0.3), window(0.6, 0.85);
        double worst = 1e300;
        bool ordered = true;
        for (int t = 0; t < 10; ++t) {
            GridGeometry g = GridGeometry::centered_box(2, 1.0, 0.125);
            std::vector<double> c{shift(rng), shift(rng)};
            Mask E = cube_mask_meeting(g, c, side(rng));
            Mask G = cube_mask_centers(g, std::vector<double>{0.0, 0.0}, window(rng));
            for (std::size_t i = 0; i < E.size(); ++i) E[i] = E[i] && G[i];
            if (mask_count(E) == 0) continue;
            SolverOptions opt;
            opt.seed = static_cast<std::uint64_t>(t);
            ChainResult ch = chain_check(g, E, G, LorentzExponents(1.5, 1.0), opt);
            ordered = ordered && ch.ordered;
            worst = std::min(worst, ch.worst_slack);
        }
        bool ok = rel <= 0.25 && ordered && worst >= -1e-6;
        return Verdict{ok, fmt::format("values {:.4f}, {:.4f}, {:.4f} ({}) -> {:.4f} vs oracle {:.4f}, rel err {:.3f} "
                                       "(<= 0.25); chain ordered on 10 instances: {}, worst slack {:.3e}",
                                       ref.values[0], ref.values[1], ref.values[2], ref.method, ref.extrapolated,
                                       oracle, rel, ordered, worst)};
    });

    criterion(11, "upper-bound consistency", [] {
        CantorParams c(2, Rational(3, 2));
        const LorentzExponents e(1.5, 1.0);
        bool ok = true;
        std::string detail;
        for (int j : {2, 3}) {
            CapacityProblem pr;
            pr.exp = e;
            pr.variant = CapacityVariant::Variational;
            pr.geometry = GridGeometry::centered_box(2, 1.5, 1.0 / 32);
            pr.target = cantor_target_mask(pr.geometry, c, ramp_bounds(j).J);
            CapacityResult r = minimize(pr);
            long double bound = testfn_upper_bound(c, j, e);
            ok = ok && r.value <= 1.1L * bound;
            detail += fmt::format("j = {}: {:.4f} <= 1.1 x {:.4f}; ", j, r.value, static_cast<double>(bound));
        }
        return Verdict{ok, detail + "Uniform n = 2, p = 1.5, q = 1, h = 1/32"};
    });

    criterion(12, "Orlicz admissibility and pipeline modular decay", [] {
        long double worst = 0.0L;
        for (double p : {1.25, 1.5, 2.0, 3.0}) {
            for (double eps : {0.01, 0.1, 0.5, 1.0}) {
                worst = std::max(worst, std::fabs(admissibility_integral(calibrate_family(p, eps), p) - 1.0L));
            }
        }
        PipelineState st = run_pipeline(CantorParams(5, Rational(5, 4), Variant::Harmonic), 5,
                                        calibrate_family(1.25, 0.01));
        auto seq = st.modular_sequence();
        bool nonincreasing = true;
        for (std::size_t i = 1; i < seq.size(); ++i) nonincreasing = nonincreasing && seq[i] <= seq[i - 1];
        bool half = seq.size() == 5 && seq[4] <= 0.5L * seq[0];
        return Verdict{worst <= 1e-8L && nonincreasing && half,
                       fmt::format("max |integral - 1| = {:.2e} on 16 (p, eps) pairs; modular sequence {:.3e} -> "
                                   "{:.3e}, nonincreasing {}, k = 5 <= half of k = 1: {}",
                                   static_cast<double>(worst), static_cast<double>(seq.front()),
                                   static_cast<double>(seq.back()), nonincreasing, half)};
    });

    criterion(13, "determinism of the CLI suite", [&] {
        fs::path a = work / "suite-a", b = work / "suite-b";
        fs::remove_all(a);
        fs::remove_all(b);
        int ra = std::system(fmt::format("\"{}\" suite --seed 13 --out-dir \"{}\" > /dev/null", cli, a.string()).c_str());
        int rb = std::system(fmt::format("\"{}\" suite --seed 13 --out-dir \"{}\" > /dev/null", cli, b.string()).c_str());
        if (ra != 0 || rb != 0) return Verdict{false, fmt::format("suite exit status {} / {}", ra, rb)};
        std::size_t files = 0, identical = 0;
        for (const auto& entry : fs::directory_iterator(a)) {
            ++files;
            fs::path other = b / entry.path().filename();
            if (fs::exists(other) && slurp(entry.path()) == slurp(other)) ++identical;
        }
        std::size_t files_b = static_cast<std::size_t>(std::distance(fs::directory_iterator(b), fs::directory_iterator()));
        return Verdict{files > 0 && identical == files && files_b == files,
                       fmt::format("{} of {} artifacts byte-identical across two runs with seed 13", identical, files)};
    });

    std::cout << (failures == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failures)) << std::endl;
    return failures == 0 ? 0 : 1;
}
