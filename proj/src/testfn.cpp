#include "lorcap/testfn.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace lorcap {

RampBounds ramp_bounds(int j) {
    if (j < 1) throw std::invalid_argument("ramp_bounds: j must be >= 1");
    Rational sum(0);
    int k = j;
    for (;; ++k) {
        sum += Rational(1, static_cast<unsigned long>(k));
        if (sum >= 1) break;
    }
    sum.canonicalize();
    return RampBounds{k, sum};
}

long double generation_measure_value(const CantorParams& params, int k) {
    using Key = std::tuple<int, std::string, int>;
    static std::mutex mutex;
    static std::map<Key, std::vector<long double>> cache;

    Key key{params.n(), params.p().get_str(), static_cast<int>(params.variant())};
    {
        std::lock_guard lock(mutex);
        auto& values = cache[key];
        if (static_cast<int>(values.size()) > k && values[static_cast<std::size_t>(k)] >= 0.0L) {
            return values[static_cast<std::size_t>(k)];
        }
    }
    long double value = generation_measure(params, k).to_long_double();
    std::lock_guard lock(mutex);
    auto& values = cache[key];
    if (static_cast<int>(values.size()) <= k) values.resize(static_cast<std::size_t>(k) + 1, -1.0L);
    values[static_cast<std::size_t>(k)] = value;
    return value;
}

// ---------------------------------------------------------------------------

TestFunction::TestFunction(CantorParams params, int j)
    : params_(std::move(params)), j_(j), bounds_(ramp_bounds(j)) {
    const auto size = static_cast<std::size_t>(bounds_.J) + 2;
    offset_.assign(size, 0.0L);
    outer_.assign(size, 0.0L);
    inner_.assign(size, 0.0L);
    for (int k = 1; k <= bounds_.J; ++k) {
        const auto i = static_cast<std::size_t>(k);
        offset_[i] = center_offset(params_, k).to_long_double();
        outer_[i] = outer_half_side(params_, k).to_long_double();
        inner_[i] = inner_half_side(params_, k).to_long_double();
    }
    plateau_.assign(size, 0.0L);
    for (int k = j_; k <= bounds_.J + 1; ++k) plateau_[static_cast<std::size_t>(k)] = to_long_double(plateau(k));
}

Rational TestFunction::plateau(int k) const {
    Rational sum(0);
    const int last = std::min(k, bounds_.J + 1) - 1;
    for (int i = j_; i <= last; ++i) sum += Rational(1, static_cast<unsigned long>(i));
    sum /= bounds_.Cj;
    sum.canonicalize();
    return sum;
}

long double TestFunction::displayed_slope_bound(int k) const {
    if (k < j_ || k > bounds_.J) throw std::out_of_range("slope requested outside [j, J]");
    const auto i = static_cast<std::size_t>(k);
    return 1.0L / (static_cast<long double>(k) * (outer_[i] - inner_[i]));
}

long double TestFunction::slope(int k) const {
    return displayed_slope_bound(k) / to_long_double(bounds_.Cj);
}

double TestFunction::evaluate(std::span<const double> x) const {
    const int n = params_.n();
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("point dimension does not match n");
    for (double xi : x) {
        if (!std::isfinite(xi) || std::fabs(xi) > 1.0) throw std::domain_error("point lies outside Q(0, 1)");
    }
    std::vector<long double> center(static_cast<std::size_t>(n), 0.0L);
    for (int k = 1; k <= bounds_.J; ++k) {
        const auto i = static_cast<std::size_t>(k);
        long double r = 0.0L;
        for (std::size_t a = 0; a < center.size(); ++a) {
            // Points on a quadrant split are equidistant from both children.
            long double sign = x[a] >= center[a] ? 1.0L : -1.0L;
            center[a] += sign * offset_[i];
            r = std::max(r, std::fabs(static_cast<long double>(x[a]) - center[a]));
        }
        if (k < j_) {
            if (r >= inner_[i]) return 0.0;
            continue;
        }
        if (r >= outer_[i]) return static_cast<double>(plateau_[i]);
        if (r >= inner_[i]) return static_cast<double>(plateau_[i] + (outer_[i] - r) * slope(k));
    }
    return 1.0;
}

double TestFunction::evaluate_extended(std::span<const double> x) const {
    for (double xi : x) {
        if (!(std::fabs(xi) <= 1.0)) return 0.0;
    }
    return evaluate(x);
}

// ---------------------------------------------------------------------------

StepProfile gradient_profile(const TestFunction& f) {
    std::vector<Step> steps;
    for (int k = f.j(); k <= f.J(); ++k) steps.push_back({f.slope(k), generation_measure_value(f.params(), k)});
    return StepProfile::from_unsorted(std::move(steps));
}

StepProfile displayed_bound_profile(const TestFunction& f) {
    std::vector<Step> steps;
    for (int k = f.j(); k <= f.J(); ++k) {
        steps.push_back({f.displayed_slope_bound(k), generation_measure_value(f.params(), k)});
    }
    return StepProfile::from_unsorted(std::move(steps));
}

StepProfile value_envelope(const TestFunction& f) {
    std::vector<Step> steps;
    for (int k = f.j(); k <= f.J(); ++k) {
        steps.push_back({to_long_double(f.plateau(k + 1)), generation_measure_value(f.params(), k)});
    }
    steps.push_back({1.0L, core_measure(f.params(), f.J()).to_long_double()});
    return StepProfile::from_unsorted(std::move(steps));
}

long double value_norm(const TestFunction& f, const LorentzExponents& exp) {
    const int n = f.params().n();
    const long double p = exp.p;
    const long double ln2 = std::log(2.0L);

    // On generation k the level sets of f_j are ℓ∞-spheres of radius r around
    // all 2^{nk} centers, so μ = A_k r^n with A_k = 2^{n(k+1)}, and on that
    // band f*(A_k r^n) = P_k + (outer_k - r) σ_k.
    struct Band {
        long double log_a, outer, inner, plateau, slope;
    };
    std::vector<Band> bands;
    for (int k = f.j(); k <= f.J(); ++k) {
        bands.push_back({static_cast<long double>(n) * (k + 1) * ln2, f.outer(k), f.inner(k),
                         to_long_double(f.plateau(k)), f.slope(k)});
    }
    const long double log_core = bands.back().log_a + n * std::log(f.inner(f.J()));

    if (exp.weak()) {
        const long double a = n / p;
        long double best = std::exp(log_core / p);
        for (const Band& b : bands) {
            const long double c0 = b.plateau + b.outer * b.slope;
            auto h = [&](long double r) {
                return std::exp((b.log_a + n * std::log(r)) / p) * (c0 - b.slope * r);
            };
            long double r_star = a * c0 / (b.slope * (a + 1.0L));
            r_star = std::clamp(r_star, b.inner, b.outer);
            best = std::max({best, h(b.inner), h(b.outer), h(r_star)});
        }
        return best;
    }

    const long double q = exp.q;
    long double sum = (p / q) * std::exp((q / p) * log_core);
    using Rule = boost::math::quadrature::gauss<long double, 30>;
    for (const Band& b : bands) {
        auto integrand = [&](long double u) {
            long double r = std::exp(u);
            long double v = b.plateau + (b.outer - r) * b.slope;
            return n * std::exp((q / p) * (b.log_a + n * u)) * std::pow(v, q);
        };
        sum += Rule::integrate(integrand, std::log(b.inner), std::log(b.outer));
    }
    return std::pow(sum, 1.0L / q);
}

long double sobolev_energy(const TestFunction& f, const LorentzExponents& exp) {
    const long double p = exp.p;
    return std::pow(value_norm(f, exp), p) + std::pow(lorentz_norm(gradient_profile(f), exp), p);
}

std::vector<NormRow> norm_table(const CantorParams& params, const LorentzExponents& exp, int j_first,
                                int j_last) {
    if (j_first < 1 || j_last < j_first) throw std::invalid_argument("norm_table: bad j range");
    std::vector<NormRow> rows;
    for (int j = j_first; j <= j_last; ++j) {
        TestFunction f(params, j);
        NormRow row;
        row.j = j;
        row.J = f.J();
        row.Cj = f.Cj();
        row.norm_f = value_norm(f, exp);
        row.norm_Df = lorentz_norm(gradient_profile(f), exp);
        row.norm_Df_bound = lorentz_norm(displayed_bound_profile(f), exp);
        long double tail = 0.0L;
        if (params.variant() == Variant::Harmonic) {
            const long double e = static_cast<long double>(params.n()) / params.p_value();
            for (int k = j; k <= f.J(); ++k) tail += std::pow(static_cast<long double>(k), -e);
            row.ratio = row.norm_Df / tail;
        } else if (exp.weak()) {
            tail = 1.0L / j;
            row.ratio = row.norm_Df / tail;
        } else {
            for (int k = j; k <= f.J(); ++k) tail += std::pow(static_cast<long double>(k), -exp.q);
            row.ratio = std::pow(row.norm_Df, static_cast<long double>(exp.q)) / tail;
        }
        row.reference_tail = tail;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SlopeRow> slope_table(const TestFunction& f) {
    std::vector<SlopeRow> rows;
    for (int k = f.j(); k <= f.J(); ++k) {
        rows.push_back({k, f.slope(k), f.displayed_slope_bound(k), generation_measure_value(f.params(), k)});
    }
    return rows;
}

}  // namespace lorcap
