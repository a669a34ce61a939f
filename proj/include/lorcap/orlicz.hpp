#pragma once

// Young functions given by piecewise-power densities, the admissibility
// integral ∫_0^∞ (Φ')^{-1/(p-1)} dt, Orlicz modulars of step profiles, and the
// decaying-sequence pipeline built from the Harmonic test functions.

#include "lorcap/cantor.hpp"
#include "lorcap/rearrange.hpp"

#include <limits>
#include <vector>

namespace lorcap {

inline constexpr long double kUnbounded = std::numeric_limits<long double>::infinity();

/// Φ'(t) = c (t + offset)^alpha on [t_lo, t_hi); t_hi may be kUnbounded.
struct PowerSegment {
    long double t_lo = 0.0L;
    long double t_hi = kUnbounded;
    long double c = 1.0L;
    long double alpha = 0.0L;
    long double offset = 1.0L;

    long double density(long double t) const;
    /// ∫_{t_lo}^{min(t, t_hi)} Φ'.
    long double integral_to(long double t) const;
};

/// A right-continuous, nondecreasing, positive density on [0, ∞) made of
/// contiguous power segments. Φ(t) = ∫_0^t Φ'.
class PiecewiseDensity {
public:
    explicit PiecewiseDensity(std::vector<PowerSegment> segments);

    const std::vector<PowerSegment>& segments() const { return segments_; }
    long double density(long double t) const;
    long double Phi(long double t) const;

protected:
    std::vector<PowerSegment> segments_;
};

/// A density that additionally satisfies Φ'(0+) = 0 and Φ'(t) → ∞, so that
/// Φ is a Young function.
class YoungFunction : public PiecewiseDensity {
public:
    explicit YoungFunction(std::vector<PowerSegment> segments);
};

/// ∫_0^∞ (Φ')^{-1/(p-1)} dt in closed form per segment; kUnbounded when divergent.
long double admissibility_integral(const PiecewiseDensity& phi, double p);

/// Σ Φ(value) mass.
long double modular(const PiecewiseDensity& phi, const StepProfile& profile);

/// Φ'(t) = c t^{(p-1)/2} on [0, 1) and c t^{p-1+eps} on [1, ∞), with c found
/// by root finding so the admissibility integral equals 1.
YoungFunction calibrate_family(double p, double eps);
/// Closed-form constant of calibrate_family: (2 + (p-1)/eps)^{p-1}.
long double calibrated_constant(double p, double eps);

struct PipelineRow {
    int k = 0;
    int j = 0;
    int J = 0;
    long double norm_f = 0.0L;
    long double norm_Df = 0.0L;
    long double energy = 0.0L;  // ‖f‖^p + ‖Df‖^p, must be <= 2^{-k}
    long double modular_Dg = 0.0L;
    long double modular_g = 0.0L;
    long double remainder_bound = 0.0L;
};

struct PipelineState {
    std::vector<PipelineRow> rows;
    std::vector<StepProfile> gradient_profiles;  // |Dg_k|
    std::vector<StepProfile> value_profiles;     // envelope of g_k
    StepProfile F_profile;                       // envelope of Σ |f_k| + |Df_k|
    long double modular_F = 0.0L;
    bool modular_F_exceeds_one = false;
    int scanned = 0;

    /// modular_Dg + modular_g per row.
    std::vector<long double> modular_sequence() const;
};

class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Selects j_1 < j_2 < ... < j_K with J(j_k) < j_{k+1} and
/// ‖f_{j_k}‖^p_{p,1} + ‖Df_{j_k}‖^p_{p,1} <= 2^{-k}, scanning j upward to
/// scan_limit, then assembles g_k = Σ_{i>=k} f_{j_i} and its modulars.
PipelineState run_pipeline(const CantorParams& params, int K, const PiecewiseDensity& phi, int scan_limit = 2000);

}  // namespace lorcap
