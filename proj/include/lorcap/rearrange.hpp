#pragma once

// Distribution functions, decreasing rearrangements and Lorentz functionals.
//
// A StepProfile is the decreasing rearrangement f* of a simple function,
// stored as (value, mass) pairs with strictly decreasing values. All
// functionals below are evaluated from closed-form antiderivatives of
// t^{q/p - 1}; nothing is integrated numerically.
//
// Values and masses are long double: the test-function profiles of the
// Cantor constructions routinely span 2^{±3000}.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace lorcap {

struct Step {
    long double value = 0.0L;
    long double mass = 0.0L;

    friend bool operator==(const Step&, const Step&) = default;
};

class StepProfile {
public:
    StepProfile() = default;

    /// Validates: values nonnegative and strictly decreasing, masses finite and > 0.
    explicit StepProfile(std::vector<Step> steps);

    /// Sorts by value, merges equal values and drops zero values and zero masses.
    static StepProfile from_unsorted(std::vector<Step> steps);

    const std::vector<Step>& steps() const { return steps_; }
    bool empty() const { return steps_.empty(); }
    std::size_t size() const { return steps_.size(); }
    long double total_mass() const;

    /// Profile of |c| f.
    StepProfile scaled(long double c) const;
    /// Profile of x -> f(x / lambda^{1/n}): every mass multiplied by lambda.
    StepProfile dilated(long double lambda) const;

private:
    std::vector<Step> steps_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Exponent pair (p, q); q may be kInfinity.
struct LorentzExponents {
    double p = 2.0;
    double q = 1.0;

    LorentzExponents() = default;
    LorentzExponents(double p_, double q_);

    bool weak() const { return q == kInfinity; }
};

/// Cells on a uniform axis-aligned lattice. Cell i spans
/// origin + h * [i, i + 1) along every axis.
struct GridGeometry {
    std::vector<std::size_t> shape;
    double spacing = 1.0;
    std::vector<double> origin;

    GridGeometry() = default;
    GridGeometry(std::vector<std::size_t> shape_, double spacing_, std::vector<double> origin_);

    /// Cube [-half_side, half_side]^dim covered by cells of side h; half_side/h must be integral.
    static GridGeometry centered_box(std::size_t dim, double half_side, double h);

    std::size_t dim() const { return shape.size(); }
    std::size_t cell_count() const;
    long double cell_measure() const;
    std::size_t stride(std::size_t axis) const;
    std::vector<std::size_t> unravel(std::size_t flat) const;
    std::size_t ravel(std::span<const std::size_t> index) const;
    std::vector<double> cell_center(std::size_t flat) const;
    bool on_boundary(std::size_t flat) const;

    friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

struct GridFunction {
    GridGeometry geometry;
    std::vector<double> samples;

    GridFunction() = default;
    explicit GridFunction(GridGeometry g, double fill = 0.0);
    GridFunction(GridGeometry g, std::vector<double> values);

    std::size_t dim() const { return geometry.dim(); }
    std::size_t size() const { return samples.size(); }
};

/// μ_f(t): total mass of steps whose value is strictly greater than t.
long double distribution(const StepProfile& profile, long double t);

/// f*(s) = inf{v : μ_f(v) <= s}.
long double rearrangement(const StepProfile& profile, long double s);

/// Decreasing rearrangement of |g| with cell mass h^n.
StepProfile grid_to_profile(const GridFunction& g);
StepProfile values_to_profile(std::span<const double> values, long double cell_measure);

/// ‖f‖_{L^{p,q}} from f*. For q = ∞ this is max over steps of M_i^{1/p} v_i,
/// with M_i the cumulative mass through step i.
long double lorentz_norm(const StepProfile& profile, const LorentzExponents& exp);

/// The q = ∞ functional in its distribution form sup_t t μ_f(t)^{1/p}.
long double weak_norm_from_distribution(const StepProfile& profile, double p);

/// ∫_0^∞ μ_f(s)^{1/p} ds, evaluated exactly over the value gaps.
long double layercake_p1(const StepProfile& profile, double p);

}  // namespace lorcap
