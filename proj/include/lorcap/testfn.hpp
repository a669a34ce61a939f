#pragma once

// Test functions f_j for the Cantor constructions.
//
// f_j vanishes on frames of generation < j, climbs one ℓ∞-radial ramp of
// height C_j^{-1}/k across each generation-k frame (j <= k <= J) and equals 1
// on the generation-J core cubes, where J = J(j) is the first index with
// C_j = Σ_{k=j}^{J} 1/k >= 1. The C_j^{-1} factor on the ramp makes the
// plateaus telescope to exactly 1, so f_j is Lipschitz and continuous.

#include "lorcap/cantor.hpp"
#include "lorcap/rearrange.hpp"

#include <span>
#include <vector>

namespace lorcap {

struct RampBounds {
    int J = 0;
    Rational Cj;
};

/// Smallest J >= j with Σ_{k=j}^{J} 1/k >= 1, and that sum.
RampBounds ramp_bounds(int j);

/// Exact generation_measure(params, k) rounded to long double, memoized.
long double generation_measure_value(const CantorParams& params, int k);

class TestFunction {
public:
    TestFunction(CantorParams params, int j);

    const CantorParams& params() const { return params_; }
    int j() const { return j_; }
    int J() const { return bounds_.J; }
    const Rational& Cj() const { return bounds_.Cj; }

    /// C_j^{-1} Σ_{i=j}^{k-1} 1/i for k in [j, J + 1]; 0 below j.
    Rational plateau(int k) const;

    long double outer(int k) const { return outer_.at(static_cast<std::size_t>(k)); }
    long double inner(int k) const { return inner_.at(static_cast<std::size_t>(k)); }

    /// |Df_j| on generation-k frames, j <= k <= J.
    long double slope(int k) const;
    /// The same slope without the C_j^{-1} factor: 1 / (k (outer_k - inner_k)).
    long double displayed_slope_bound(int k) const;

    /// f_j(x) for x in the closed Q(0, 1); throws std::domain_error otherwise.
    double evaluate(std::span<const double> x) const;
    /// f_j extended by zero to all of R^n.
    double evaluate_extended(std::span<const double> x) const;

private:
    CantorParams params_;
    int j_;
    RampBounds bounds_;
    std::vector<long double> offset_, outer_, inner_, plateau_;
};

/// Rearrangement of |Df_j|: one step per generation k in [j, J] with the
/// ramp slope as value and generation_measure(k) as mass.
StepProfile gradient_profile(const TestFunction& f);

/// Same masses, values from displayed_slope_bound. Dominates gradient_profile.
StepProfile displayed_bound_profile(const TestFunction& f);

/// Step upper envelope of f_j: value plateau(k + 1) on generation-k frames and
/// 1 on the generation-J core cubes.
StepProfile value_envelope(const TestFunction& f);

/// ‖f_j‖_{p,q} from the exact piecewise-radial rearrangement of f_j: within
/// generation k, μ(t) = 2^{nk} (2 r(t))^n with r linear in t.
long double value_norm(const TestFunction& f, const LorentzExponents& exp);

/// ‖f_j‖^p_{p,q} + ‖Df_j‖^p_{p,q}.
long double sobolev_energy(const TestFunction& f, const LorentzExponents& exp);

struct NormRow {
    int j = 0;
    int J = 0;
    Rational Cj;
    long double norm_f = 0.0L;
    long double norm_Df = 0.0L;
    long double norm_Df_bound = 0.0L;  // displayed_bound_profile
    long double reference_tail = 0.0L;
    long double ratio = 0.0L;
};

/// Uniform: tail Σ_{k=j}^{J} k^{-q} and ratio ‖Df_j‖^q / tail (q = ∞: tail 1/j,
/// ratio ‖Df_j‖ j). Harmonic: tail Σ_{k=j}^{J} k^{-n/p}, ratio ‖Df_j‖ / tail.
std::vector<NormRow> norm_table(const CantorParams& params, const LorentzExponents& exp, int j_first,
                                int j_last);

struct SlopeRow {
    int k = 0;
    long double slope = 0.0L;
    long double displayed_bound = 0.0L;
    long double measure = 0.0L;
};

std::vector<SlopeRow> slope_table(const TestFunction& f);

}  // namespace lorcap
