#include "lorcap/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lorcap {

namespace {

// b^a - c^a for b >= c >= 0 without cancellation when c is close to b.
long double power_difference(long double b, long double c, long double a) {
    if (c <= 0.0L) return std::pow(b, a);
    return std::pow(c, a) * std::expm1(a * std::log1p((b - c) / c));
}

}  // namespace

StepProfile::StepProfile(std::vector<Step> steps) : steps_(std::move(steps)) {
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        const Step& s = steps_[i];
        if (!(s.value >= 0.0L) || !std::isfinite(s.value)) {
            throw std::invalid_argument("step " + std::to_string(i) + ": value must be finite and >= 0");
        }
        if (!(s.mass > 0.0L) || !std::isfinite(s.mass)) {
            throw std::invalid_argument("step " + std::to_string(i) + ": mass must be finite and > 0");
        }
        if (i > 0 && !(s.value < steps_[i - 1].value)) {
            throw std::invalid_argument("step " + std::to_string(i) + ": values must strictly decrease");
        }
    }
    if (!std::isfinite(total_mass())) throw std::invalid_argument("profile has infinite total mass");
}

StepProfile StepProfile::from_unsorted(std::vector<Step> steps) {
    std::erase_if(steps, [](const Step& s) { return s.value == 0.0L || s.mass == 0.0L; });
    std::stable_sort(steps.begin(), steps.end(),
                     [](const Step& a, const Step& b) { return a.value > b.value; });
    std::vector<Step> merged;
    for (const Step& s : steps) {
        if (!merged.empty() && merged.back().value == s.value) {
            merged.back().mass += s.mass;
        } else {
            merged.push_back(s);
        }
    }
    return StepProfile(std::move(merged));
}

long double StepProfile::total_mass() const {
    long double m = 0.0L;
    for (const Step& s : steps_) m += s.mass;
    return m;
}

StepProfile StepProfile::scaled(long double c) const {
    long double a = std::fabs(c);
    if (a == 0.0L) return {};
    std::vector<Step> out = steps_;
    for (Step& s : out) s.value *= a;
    return StepProfile(std::move(out));
}

StepProfile StepProfile::dilated(long double lambda) const {
    if (!(lambda > 0.0L)) throw std::invalid_argument("dilation factor must be positive");
    std::vector<Step> out = steps_;
    for (Step& s : out) s.mass *= lambda;
    return StepProfile(std::move(out));
}

LorentzExponents::LorentzExponents(double p_, double q_) : p(p_), q(q_) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("Lorentz exponent p must lie in (1, inf)");
    if (!(q >= 1.0)) throw std::invalid_argument("Lorentz exponent q must be >= 1 or infinity");
}

// ---------------------------------------------------------------------------

GridGeometry::GridGeometry(std::vector<std::size_t> shape_, double spacing_, std::vector<double> origin_)
    : shape(std::move(shape_)), spacing(spacing_), origin(std::move(origin_)) {
    if (shape.empty()) throw std::invalid_argument("grid dimension must be positive");
    if (origin.size() != shape.size()) throw std::invalid_argument("grid origin has wrong dimension");
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw std::invalid_argument("grid spacing must be > 0");
    for (std::size_t s : shape) {
        if (s == 0) throw std::invalid_argument("grid shape entries must be positive");
    }
}

GridGeometry GridGeometry::centered_box(std::size_t dim, double half_side, double h) {
    double cells = 2.0 * half_side / h;
    auto count = static_cast<std::size_t>(std::llround(cells));
    if (count == 0 || std::fabs(cells - static_cast<double>(count)) > 1e-9 * cells) {
        throw std::invalid_argument("box side must be an integer multiple of the spacing");
    }
    return GridGeometry(std::vector<std::size_t>(dim, count), h, std::vector<double>(dim, -half_side));
}

std::size_t GridGeometry::cell_count() const {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

long double GridGeometry::cell_measure() const {
    return std::pow(static_cast<long double>(spacing), static_cast<long double>(dim()));
}

std::size_t GridGeometry::stride(std::size_t axis) const {
    // Row-major: the last axis is contiguous.
    std::size_t s = 1;
    for (std::size_t a = axis + 1; a < shape.size(); ++a) s *= shape[a];
    return s;
}

std::vector<std::size_t> GridGeometry::unravel(std::size_t flat) const {
    std::vector<std::size_t> index(dim());
    for (std::size_t a = dim(); a-- > 0;) {
        index[a] = flat % shape[a];
        flat /= shape[a];
    }
    return index;
}

std::size_t GridGeometry::ravel(std::span<const std::size_t> index) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < dim(); ++a) flat = flat * shape[a] + index[a];
    return flat;
}

std::vector<double> GridGeometry::cell_center(std::size_t flat) const {
    auto index = unravel(flat);
    std::vector<double> x(dim());
    for (std::size_t a = 0; a < dim(); ++a) {
        x[a] = origin[a] + spacing * (static_cast<double>(index[a]) + 0.5);
    }
    return x;
}

bool GridGeometry::on_boundary(std::size_t flat) const {
    for (std::size_t a = dim(); a-- > 0;) {
        std::size_t i = flat % shape[a];
        if (i == 0 || i + 1 == shape[a]) return true;
        flat /= shape[a];
    }
    return false;
}

GridFunction::GridFunction(GridGeometry g, double fill)
    : geometry(std::move(g)), samples(geometry.cell_count(), fill) {}

GridFunction::GridFunction(GridGeometry g, std::vector<double> values)
    : geometry(std::move(g)), samples(std::move(values)) {
    if (samples.size() != geometry.cell_count()) {
        throw std::invalid_argument("sample count " + std::to_string(samples.size()) +
                                    " does not match grid shape (" +
                                    std::to_string(geometry.cell_count()) + " cells)");
    }
}

// ---------------------------------------------------------------------------

long double distribution(const StepProfile& profile, long double t) {
    if (t < 0.0L) throw std::invalid_argument("distribution: t must be >= 0");
    long double m = 0.0L;
    for (const Step& s : profile.steps()) {
        if (!(s.value > t)) break;
        m += s.mass;
    }
    return m;
}

long double rearrangement(const StepProfile& profile, long double s) {
    if (s < 0.0L) throw std::invalid_argument("rearrangement: s must be >= 0");
    long double cumulative = 0.0L;
    for (const Step& step : profile.steps()) {
        cumulative += step.mass;
        if (s < cumulative) return step.value;
    }
    return 0.0L;
}

StepProfile values_to_profile(std::span<const double> values, long double cell_measure) {
    std::vector<double> mags;
    mags.reserve(values.size());
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("grid sample is not finite");
        if (v != 0.0) mags.push_back(std::fabs(v));
    }
    std::sort(mags.begin(), mags.end(), std::greater<>());
    std::vector<Step> steps;
    for (std::size_t i = 0; i < mags.size();) {
        std::size_t j = i;
        while (j < mags.size() && mags[j] == mags[i]) ++j;
        steps.push_back({mags[i], static_cast<long double>(j - i) * cell_measure});
        i = j;
    }
    return StepProfile(std::move(steps));
}

StepProfile grid_to_profile(const GridFunction& g) {
    return values_to_profile(g.samples, g.geometry.cell_measure());
}

long double lorentz_norm(const StepProfile& profile, const LorentzExponents& exp) {
    const long double p = exp.p;
    if (exp.weak()) {
        long double best = 0.0L, cumulative = 0.0L;
        for (const Step& s : profile.steps()) {
            cumulative += s.mass;
            best = std::max(best, s.value * std::pow(cumulative, 1.0L / p));
        }
        return best;
    }
    const long double q = exp.q;
    const long double a = q / p;
    // ∫_{M_{i-1}}^{M_i} (t^{1/p} v_i)^q dt/t = v_i^q (p/q) (M_i^{q/p} - M_{i-1}^{q/p}).
    // Factor out the largest value so v^q cannot overflow.
    if (profile.empty()) return 0.0L;
    const long double top = profile.steps().front().value;
    long double sum = 0.0L, cumulative = 0.0L;
    for (const Step& s : profile.steps()) {
        long double next = cumulative + s.mass;
        sum += std::pow(s.value / top, q) * power_difference(next, cumulative, a);
        cumulative = next;
    }
    return top * std::pow((p / q) * sum, 1.0L / q);
}

long double weak_norm_from_distribution(const StepProfile& profile, double p) {
    // t μ_f(t)^{1/p} increases on each interval where μ_f is constant, so the
    // sup is the left limit at a jump of μ_f, i.e. at one of the step values.
    const auto& steps = profile.steps();
    long double best = 0.0L;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        long double t = steps[i].value;
        long double below = i + 1 < steps.size() ? steps[i + 1].value : 0.0L;
        long double left_limit = distribution(profile, below);  // μ_f(s) for s in [below, t)
        best = std::max(best, t * std::pow(left_limit, 1.0L / static_cast<long double>(p)));
    }
    return best;
}

long double layercake_p1(const StepProfile& profile, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("layercake_p1: p must exceed 1");
    const auto& steps = profile.steps();
    long double sum = 0.0L, cumulative = 0.0L;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        cumulative += steps[i].mass;
        long double below = i + 1 < steps.size() ? steps[i + 1].value : 0.0L;
        sum += std::pow(cumulative, 1.0L / static_cast<long double>(p)) * (steps[i].value - below);
    }
    return sum;
}

}  // namespace lorcap
