#include "lorcap/orlicz.hpp"

#include "lorcap/testfn.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace lorcap {

long double PowerSegment::density(long double t) const { return c * std::pow(t + offset, alpha); }

long double PowerSegment::integral_to(long double t) const {
    long double b = std::min(t, t_hi);
    if (!(b > t_lo)) return 0.0L;
    const long double e = alpha + 1.0L;
    return c * (std::pow(b + offset, e) - std::pow(t_lo + offset, e)) / e;
}

PiecewiseDensity::PiecewiseDensity(std::vector<PowerSegment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw std::invalid_argument("density needs at least one segment");
    long double previous_end_value = 0.0L;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const PowerSegment& s = segments_[i];
        const std::string where = "segment " + std::to_string(i) + ": ";
        long double expected_lo = i == 0 ? 0.0L : segments_[i - 1].t_hi;
        if (s.t_lo != expected_lo) throw std::invalid_argument(where + "segments must be contiguous from t = 0");
        if (!(s.t_hi > s.t_lo)) throw std::invalid_argument(where + "t_hi must exceed t_lo");
        if (!(s.c > 0.0L) || !std::isfinite(s.c)) throw std::invalid_argument(where + "c must be finite and > 0");
        if (!(s.alpha >= 0.0L) || !std::isfinite(s.alpha)) {
            throw std::invalid_argument(where + "alpha must be finite and >= 0 (density nondecreasing)");
        }
        if (!(s.offset >= 0.0L)) throw std::invalid_argument(where + "offset must be >= 0");
        if (i == 0 && s.offset == 0.0L && s.alpha > 0.0L) {
            // Φ'(0) = 0 is allowed: positivity is required on (0, ∞) only.
        } else if (!(s.t_lo + s.offset > 0.0L)) {
            throw std::invalid_argument(where + "density must be positive on (0, inf)");
        }
        if (i > 0 && s.density(s.t_lo) < previous_end_value * (1.0L - 1e-15L)) {
            throw std::invalid_argument(where + "density decreases at t = " + std::to_string(double(s.t_lo)));
        }
        if (std::isfinite(s.t_hi)) previous_end_value = s.density(s.t_hi);
    }
    if (std::isfinite(segments_.back().t_hi)) throw std::invalid_argument("last segment must extend to infinity");
}

long double PiecewiseDensity::density(long double t) const {
    if (t < 0.0L) throw std::invalid_argument("density: t must be >= 0");
    for (const PowerSegment& s : segments_) {
        if (t < s.t_hi) return s.density(t);
    }
    return segments_.back().density(t);
}

long double PiecewiseDensity::Phi(long double t) const {
    if (t < 0.0L) throw std::invalid_argument("Phi: t must be >= 0");
    long double sum = 0.0L;
    for (const PowerSegment& s : segments_) {
        if (t <= s.t_lo) break;
        sum += s.integral_to(t);
    }
    return sum;
}

YoungFunction::YoungFunction(std::vector<PowerSegment> segments) : PiecewiseDensity(std::move(segments)) {
    const PowerSegment& first = segments_.front();
    if (first.offset != 0.0L || !(first.alpha > 0.0L)) {
        throw std::invalid_argument("Young function density must vanish at 0+: the leading segment needs "
                                    "offset 0 and alpha > 0");
    }
    if (!(segments_.back().alpha > 0.0L)) {
        throw std::invalid_argument("Young function density must tend to infinity: the last segment needs alpha > 0");
    }
}

// ---------------------------------------------------------------------------

long double admissibility_integral(const PiecewiseDensity& phi, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("admissibility_integral: p must exceed 1");
    const long double gamma = 1.0L / (static_cast<long double>(p) - 1.0L);
    long double sum = 0.0L;
    for (const PowerSegment& s : phi.segments()) {
        // ∫ (c (t + o)^α)^{-γ} dt = c^{-γ} ∫ u^{-αγ} du over u in [t_lo + o, t_hi + o].
        const long double e = 1.0L - s.alpha * gamma;
        const long double lo = s.t_lo + s.offset;
        const long double hi = s.t_hi + s.offset;
        long double piece;
        if (std::fabs(e) < 1e-15L) {
            if (lo == 0.0L || !std::isfinite(hi)) return kUnbounded;
            piece = std::log(hi / lo);
        } else if (e > 0.0L) {
            if (!std::isfinite(hi)) return kUnbounded;
            piece = (std::pow(hi, e) - std::pow(lo, e)) / e;
        } else {
            if (lo == 0.0L) return kUnbounded;
            long double top = std::isfinite(hi) ? std::pow(hi, e) : 0.0L;
            piece = (top - std::pow(lo, e)) / e;
        }
        sum += std::pow(s.c, -gamma) * piece;
    }
    return sum;
}

long double modular(const PiecewiseDensity& phi, const StepProfile& profile) {
    long double sum = 0.0L;
    for (const Step& s : profile.steps()) sum += phi.Phi(s.value) * s.mass;
    return sum;
}

long double calibrated_constant(double p, double eps) {
    if (!(p > 1.0) || !(eps > 0.0)) throw std::invalid_argument("calibrated family needs p > 1 and eps > 0");
    const long double pm1 = static_cast<long double>(p) - 1.0L;
    return std::pow(2.0L + pm1 / static_cast<long double>(eps), pm1);
}

namespace {

std::vector<PowerSegment> family_segments(double p, double eps, long double c) {
    const long double pm1 = static_cast<long double>(p) - 1.0L;
    return {PowerSegment{0.0L, 1.0L, c, pm1 / 2.0L, 0.0L},
            PowerSegment{1.0L, kUnbounded, c, pm1 + static_cast<long double>(eps), 0.0L}};
}

}  // namespace

YoungFunction calibrate_family(double p, double eps) {
    const long double guess = calibrated_constant(p, eps);
    auto residual = [&](long double log_c) {
        return admissibility_integral(PiecewiseDensity(family_segments(p, eps, std::exp(log_c))), p) - 1.0L;
    };
    long double lo = std::log(guess) - 2.0L, hi = std::log(guess) + 2.0L;
    if (!(residual(lo) > 0.0L) || !(residual(hi) < 0.0L)) {
        throw std::runtime_error("calibrate_family: root not bracketed in [" + std::to_string(double(lo)) + ", " +
                                 std::to_string(double(hi)) + "] (log c)");
    }
    std::uintmax_t iterations = 200;
    auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, boost::math::tools::eps_tolerance<long double>(60),
                                                    iterations);
    return YoungFunction(family_segments(p, eps, std::exp(0.5L * (a + b))));
}

// ---------------------------------------------------------------------------

std::vector<long double> PipelineState::modular_sequence() const {
    std::vector<long double> out;
    for (const PipelineRow& r : rows) out.push_back(r.modular_Dg + r.modular_g);
    return out;
}

PipelineState run_pipeline(const CantorParams& params, int K, const PiecewiseDensity& phi, int scan_limit) {
    if (K < 1) throw std::invalid_argument("pipeline needs K >= 1");
    const LorentzExponents exp(params.p_value(), 1.0);
    PipelineState state;

    std::vector<TestFunction> selected;
    int next_j = 1;
    for (int k = 1; k <= K; ++k) {
        const long double target = std::exp2(-static_cast<long double>(k));
        bool found = false;
        for (int j = next_j; j <= scan_limit; ++j) {
            ++state.scanned;
            TestFunction f(params, j);
            long double nf = value_norm(f, exp);
            long double nd = lorentz_norm(gradient_profile(f), exp);
            long double energy = std::pow(nf, exp.p) + std::pow(nd, exp.p);
            if (energy <= target) {
                PipelineRow row;
                row.k = k;
                row.j = j;
                row.J = f.J();
                row.norm_f = nf;
                row.norm_Df = nd;
                row.energy = energy;
                state.rows.push_back(row);
                next_j = f.J() + 1;
                selected.push_back(std::move(f));
                found = true;
                break;
            }
        }
        if (!found) {
            throw PipelineError("pipeline: no j in [" + std::to_string(next_j) + ", " + std::to_string(scan_limit) +
                                "] reaches energy <= 2^-" + std::to_string(k) + " for k = " + std::to_string(k));
        }
    }

    // Tail of Σ_{i>K} ‖Df_{j_i}‖ <= Σ_{i>K} 2^{-i/p}.
    const long double r = std::exp2(-1.0L / exp.p);
    const long double remainder = std::pow(r, K + 1) / (1.0L - r);

    const int last_J = selected.back().J();
    for (int k = 1; k <= K; ++k) {
        std::vector<Step> gradient, value;
        for (int i = k; i <= K; ++i) {
            const TestFunction& f = selected[static_cast<std::size_t>(i - 1)];
            StepProfile part = gradient_profile(f);
            gradient.insert(gradient.end(), part.steps().begin(), part.steps().end());
        }
        // Envelope of g_k on generation-m frames: every f_{j_i} with J_i < m is 1
        // there, the one whose ramp covers m contributes its plateau bound.
        const int first = selected[static_cast<std::size_t>(k - 1)].j();
        for (int m = first; m <= last_J; ++m) {
            long double v = 0.0L;
            for (int i = k; i <= K; ++i) {
                const TestFunction& f = selected[static_cast<std::size_t>(i - 1)];
                if (f.J() < m) {
                    v += 1.0L;
                } else if (f.j() <= m) {
                    v += to_long_double(f.plateau(m + 1));
                }
            }
            value.push_back({v, generation_measure_value(params, m)});
        }
        value.push_back({static_cast<long double>(K - k + 1), core_measure(params, last_J).to_long_double()});

        StepProfile dg = StepProfile::from_unsorted(std::move(gradient));
        StepProfile g = StepProfile::from_unsorted(std::move(value));
        PipelineRow& row = state.rows[static_cast<std::size_t>(k - 1)];
        row.modular_Dg = modular(phi, dg);
        row.modular_g = modular(phi, g);
        row.remainder_bound = remainder;
        state.gradient_profiles.push_back(std::move(dg));
        state.value_profiles.push_back(std::move(g));
    }

    // F = Σ |f_k| + |Df_k|: on generation-m frames the g_1 envelope plus the
    // single active slope.
    std::vector<Step> F;
    for (int m = selected.front().j(); m <= last_J; ++m) {
        long double v = 0.0L;
        for (const TestFunction& f : selected) {
            if (f.J() < m) {
                v += 1.0L;
            } else if (f.j() <= m) {
                v += to_long_double(f.plateau(m + 1)) + f.slope(m);
            }
        }
        F.push_back({v, generation_measure_value(params, m)});
    }
    F.push_back({static_cast<long double>(K), core_measure(params, last_J).to_long_double()});
    state.F_profile = StepProfile::from_unsorted(std::move(F));
    state.modular_F = modular(phi, state.F_profile);
    state.modular_F_exceeds_one = state.modular_F > 1.0L;
    return state;
}

}  // namespace lorcap
