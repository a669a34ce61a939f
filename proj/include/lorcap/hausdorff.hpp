#pragma once

// Covering sums of the generation-k core cubes, mass-distribution ratios and a
// bisection estimate of the critical exponent d.
//
// Sizes follow the half-side convention: the covering sum at depth k is
// 2^{nk} (half_side_k)^d. True Hausdorff content differs by (2√n)^d.

#include "lorcap/cantor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lorcap {

/// 2^{log2_exponent} k^{k_exponent}, exactly.
struct ExactPower {
    Rational log2_exponent;
    Rational k_exponent;
    int k = 1;

    long double value() const;
    bool is_one() const { return log2_exponent == 0 && (k_exponent == 0 || k == 1); }
};

struct CoveringReport {
    double d = 0.0;
    int depth = 0;
    long double count = 0.0L;  // 2^{n k}
    long double half_side = 0.0L;
    long double sum = 0.0L;
    std::optional<ExactPower> exact;  // present when d was given as a rational
};

CoveringReport covering_content(const CantorParams& params, double d, int k);
CoveringReport covering_content(const CantorParams& params, const Rational& d, int k);

/// 2^{kn(n-p-d)/(n-p)} k^{-d}: the growth rate of the Harmonic covering sums below n - p.
long double harmonic_blowup_bound(const CantorParams& params, double d, int k);

struct MassBound {
    double d = 0.0;
    /// (half_side_k)^d / 2^{-nk} for k = 1..depth. The natural measure gives
    /// each generation-k cube mass 2^{-nk}; mass <= size^d / bound holds at the
    /// inspected scales with bound = min of these ratios.
    std::vector<long double> ratios;
    long double bound = 0.0L;
    int argmin = 0;
};

MassBound mass_lower_bound(const CantorParams& params, double d, int depth);

struct TrendSample {
    double d = 0.0;
    /// Fitted geometric rate b in log(sum_k) ≈ a + b k + c ln k over k = 1..depth.
    double rate = 0.0;
    /// Plain least-squares slope of log(sum_k) against k.
    double slope = 0.0;
    std::string verdict;  // "above", "below" or "critical"
};

struct DimensionEstimate {
    bool determinate = true;
    double estimate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<TrendSample> trend;
    std::string message;
};

/// Bisection on d in (0, n). A trial d is "above" when the covering sums decay
/// geometrically in k, "below" when they grow geometrically and "critical"
/// when the fitted rate vanishes. Indeterminate when the sums at the initial
/// bracket ends do not differ by 10x between k = 1 and k = depth.
DimensionEstimate dimension_estimate(const CantorParams& params, int depth, double tol);

}  // namespace lorcap
