#include "lorcap/hausdorff.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace lorcap {

namespace {

void check_depth(int k) {
    if (k < 1) throw std::invalid_argument("covering depth must be >= 1");
}

// log2 of the half-side at depth k, without the 1/k factor.
long double log2_dyadic_half_side(const CantorParams& params, int k) {
    return -static_cast<long double>(k) * (to_long_double(params.beta()) + 1.0L);
}

long double log_sum(const CantorParams& params, long double d, int k) {
    const long double ln2 = std::log(2.0L);
    long double out = ln2 * (static_cast<long double>(params.n()) * k + d * log2_dyadic_half_side(params, k));
    if (params.variant() == Variant::Harmonic) out -= d * std::log(static_cast<long double>(k));
    return out;
}

}  // namespace

long double ExactPower::value() const {
    return std::exp2(to_long_double(log2_exponent)) *
           std::pow(static_cast<long double>(k), to_long_double(k_exponent));
}

CoveringReport covering_content(const CantorParams& params, double d, int k) {
    check_depth(k);
    if (!(d >= 0.0)) throw std::invalid_argument("covering dimension d must be >= 0");
    CoveringReport r;
    r.d = d;
    r.depth = k;
    r.count = std::exp2(static_cast<long double>(params.n()) * k);
    r.half_side = std::exp2(log2_dyadic_half_side(params, k));
    if (params.variant() == Variant::Harmonic) r.half_side /= k;
    r.sum = std::exp(log_sum(params, d, k));
    return r;
}

CoveringReport covering_content(const CantorParams& params, const Rational& d, int k) {
    CoveringReport r = covering_content(params, to_double(d), k);
    ExactPower e;
    e.k = k;
    e.log2_exponent = Rational(params.n() * k) - d * Rational(k) * (params.beta() + 1);
    e.log2_exponent.canonicalize();
    e.k_exponent = params.variant() == Variant::Harmonic ? Rational(-d) : Rational(0);
    r.exact = e;
    return r;
}

long double harmonic_blowup_bound(const CantorParams& params, double d, int k) {
    const long double n = params.n();
    const long double s = n - params.p_value();
    return std::exp2(k * n * (s - d) / s) * std::pow(static_cast<long double>(k), -static_cast<long double>(d));
}

MassBound mass_lower_bound(const CantorParams& params, double d, int depth) {
    if (!(d > 0.0)) throw std::domain_error("mass_lower_bound: d must be > 0");
    check_depth(depth);
    MassBound out;
    out.d = d;
    for (int k = 1; k <= depth; ++k) {
        // size^d / 2^{-nk} = 2^{nk} size^d, the generation-k covering sum.
        long double ratio = std::exp(log_sum(params, d, k));
        out.ratios.push_back(ratio);
        if (k == 1 || ratio < out.bound) {
            out.bound = ratio;
            out.argmin = k;
        }
    }
    return out;
}

namespace {

TrendSample classify(const CantorParams& params, double d, int depth) {
    Eigen::MatrixXd basis(depth, 3);
    Eigen::VectorXd y(depth);
    for (int k = 1; k <= depth; ++k) {
        basis(k - 1, 0) = 1.0;
        basis(k - 1, 1) = k;
        basis(k - 1, 2) = std::log(static_cast<double>(k));
        y(k - 1) = static_cast<double>(log_sum(params, d, k));
    }
    TrendSample s;
    s.d = d;
    if (depth >= 3) {
        s.rate = basis.colPivHouseholderQr().solve(y)(1);
    } else {
        s.rate = depth == 2 ? y(1) - y(0) : 0.0;
    }
    s.slope = basis.leftCols(2).colPivHouseholderQr().solve(y)(1);
    // The sums are exact powers, so the fit is exact up to rounding.
    const double threshold = 1e-9 * (1.0 + std::fabs(y.cwiseAbs().maxCoeff()));
    if (std::fabs(s.rate) <= threshold) {
        s.verdict = "critical";
    } else {
        s.verdict = s.rate < 0 ? "above" : "below";
    }
    return s;
}

}  // namespace

DimensionEstimate dimension_estimate(const CantorParams& params, int depth, double tol) {
    check_depth(depth);
    if (!(tol > 0.0)) throw std::invalid_argument("dimension_estimate: tol must be > 0");
    DimensionEstimate out;
    out.lo = 0.0;
    out.hi = params.n();
    if (tol >= params.n()) {
        out.estimate = 0.5 * (out.lo + out.hi);
        return out;
    }
    if (depth < 2) {
        out.determinate = false;
        out.message = "depth must be >= 2 to observe a trend";
        return out;
    }

    auto spread = [&](double d) { return std::fabs(log_sum(params, d, depth) - log_sum(params, d, 1)); };
    if (spread(out.lo) < std::log(10.0L) || spread(out.hi) < std::log(10.0L)) {
        out.determinate = false;
        out.message = "covering sums at the bracket ends differ by less than 10x; increase depth";
        out.trend.push_back(classify(params, out.lo, depth));
        out.trend.push_back(classify(params, out.hi, depth));
        return out;
    }

    while (out.hi - out.lo > tol) {
        double mid = 0.5 * (out.lo + out.hi);
        TrendSample s = classify(params, mid, depth);
        out.trend.push_back(s);
        if (s.verdict == "critical") {
            out.lo = out.hi = mid;
            break;
        }
        (s.verdict == "above" ? out.hi : out.lo) = mid;
    }
    out.estimate = 0.5 * (out.lo + out.hi);
    return out;
}

}  // namespace lorcap
