#pragma once

// Grid surrogates of the four Sobolev-Lorentz capacities
//   γ       inf ‖Df‖^p                     f >= 1 on G, f in W¹(R^n)
//   γ(·,Ω)  inf ‖Df‖^p                     f >= 1 on G, f = 0 outside Ω
//   γ⁺      inf ‖f‖^p + ‖Df‖^p             f >= 1 on G
//   γ⁺(·,Ω) inf ‖f‖^p + ‖Df‖^p             f >= 1 on G, f = 0 outside Ω
// R^n is replaced by a box whose outermost ring of cells is held at zero.
// Gradients are forward differences (zero beyond the lattice) with Euclidean
// magnitude; every norm is the Lorentz (p, q) functional of the cell profile.

#include "lorcap/cantor.hpp"
#include "lorcap/rearrange.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lorcap {

enum class CapacityVariant { Variational, VariationalRelative, Plus, PlusRelative };

std::string_view to_string(CapacityVariant v);
CapacityVariant parse_capacity_variant(std::string_view text);
bool is_relative(CapacityVariant v);
bool has_value_term(CapacityVariant v);

using Mask = std::vector<std::uint8_t>;

struct CapacityProblem {
    LorentzExponents exp{1.5, 1.0};
    CapacityVariant variant = CapacityVariant::Variational;
    GridGeometry geometry;
    Mask target;
    Mask domain;  // Ω for the relative variants; ignored otherwise

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    /// Cells the solver may change: allowed by the variant, off the box ring, not in the target.
    Mask free_cells() const;
};

struct SolverOptions {
    int max_iterations = 20000;
    double rel_tol = 1e-6;  // stop once the Polyak level gap is below rel_tol * best
    int patience = 100;     // stalled iterations before the level gap is halved
    std::uint64_t seed = 0;
    double init_noise = 1e-2;
    double init_radius = 0.5;  // length over which the initial guess ramps down from the target
};

struct TraceEntry {
    int iteration = 0;
    double objective = 0.0;
    double best = 0.0;
    double step = 0.0;
    double level_gap = 0.0;
};

struct CapacityResult {
    double value = 0.0;
    GridFunction minimizer;
    std::vector<TraceEntry> trace;
    bool converged = false;
    int iterations = 0;
};

/// |Dg| per cell.
std::vector<double> gradient_magnitude(const GridFunction& g);

/// ‖Dg‖^p_{p,q}, plus ‖g‖^p_{p,q} for the "+" variants.
double objective(const CapacityProblem& problem, const GridFunction& g);

/// Lorentz (p, q) norm of a cell vector and one of its subgradients.
struct NormGradient {
    double norm = 0.0;
    std::vector<double> gradient;
};
NormGradient lorentz_norm_gradient(std::span<const double> values, double cell_measure, const LorentzExponents& exp);

/// Projected subgradient descent with Polyak target-level steps and
/// best-iterate tracking. A warm start is projected and counts as iterate 0.
CapacityResult minimize(const CapacityProblem& problem, const SolverOptions& options = {},
                        const GridFunction* warm_start = nullptr);

struct ChainResult {
    double gamma = 0.0;
    double gamma_relative = 0.0;
    double gamma_plus = 0.0;
    double gamma_plus_relative = 0.0;
    double worst_slack = 0.0;  // min over the four chain inequalities of (larger - smaller)
    bool ordered = true;
    std::vector<CapacityResult> results;  // γ, γ(·,G), γ⁺, γ⁺(·,G)
};

/// Solves all four variants on one lattice. Solves run in inclusion order so
/// each one is warm-started from a feasible point of a smaller problem.
ChainResult chain_check(const GridGeometry& geometry, const Mask& E, const Mask& G, const LorentzExponents& exp,
                        const SolverOptions& options = {}, double tol = 1e-6);

struct CutoffSpec {
    std::vector<double> center;
    double inner_half_side = 0.0;    // η = 1 on Q(center, inner)
    double support_half_side = 0.0;  // η = 0 outside Q(center, support)
    double M = 2.0;
};

struct CutoffReport {
    GridFunction v_tilde;
    GridFunction eta;
    double discrete_lipschitz = 0.0;  // max |Dη| on the lattice
    double norm_v_tilde = 0.0;        // ‖ṽ‖_{p,1}
    double norm_D_v_tilde = 0.0;      // ‖Dṽ‖_{p,1}
    double norm_Dv = 0.0;             // ‖Dv‖_{p,1}
    double ring_term = 0.0;           // M ‖v χ_{ring}‖_{p,1}
    double bound = 0.0;               // norm_Dv + ring_term
};

/// ṽ = ηv for the ℓ∞ ramp η; throws if the lattice ramp is steeper than M.
CutoffReport cutoff_multiply(const GridFunction& v, const CutoffSpec& spec, double p);

/// ‖Df_j‖^p_{p,q} from the exact gradient profile.
long double testfn_upper_bound(const CantorParams& params, int j, const LorentzExponents& exp);

/// Value of the ℓ∞ ramp from 1 on Q(0, r) to 0 outside Q(0, 2r) for q = 1:
/// (p ((4^n - 2^n) r^n)^{1/p} / r)^p.
double ramp_oracle(int n, double p, double r);

// Cell masks.
Mask cube_mask_meeting(const GridGeometry& g, std::span<const double> center, double half_side);
Mask cube_mask_centers(const GridGeometry& g, std::span<const double> center, double half_side);
/// Cells whose open cell meets one of the closed generation-depth core cubes.
Mask cantor_target_mask(const GridGeometry& g, const CantorParams& params, int depth,
                        const Budget& budget = Budget::from_env());
std::size_t mask_count(const Mask& m);

/// Relative γ of E = Q(0, r) inside Ω = Q(0, 2r) on the box Q(0, 3r), q = 1.
/// The ℓ∞ ramp between the two cubes is the comparison competitor.
CapacityProblem cube_annulus_problem(int n, double p, double r, double h);

struct RefinementResult {
    std::vector<double> h_sequence;
    std::vector<double> values;
    std::vector<int> iterations;
    std::vector<bool> converged;
    double extrapolated = 0.0;
    std::string method;  // "aitken" or "richardson"
};

/// Extrapolates h -> 0 from values on h, h/2, h/4: Aitken's Δ² when the
/// successive differences contract geometrically, first-order Richardson otherwise.
double extrapolate(std::span<const double> values, std::string* method = nullptr);

RefinementResult refine(const std::function<CapacityProblem(double)>& make_problem, std::span<const double> hs,
                        const SolverOptions& options = {});

}  // namespace lorcap
