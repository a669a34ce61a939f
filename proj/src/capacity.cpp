#include "lorcap/capacity.hpp"

#include "lorcap/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace lorcap {

std::string_view to_string(CapacityVariant v) {
    switch (v) {
        case CapacityVariant::Variational: return "variational";
        case CapacityVariant::VariationalRelative: return "variational_relative";
        case CapacityVariant::Plus: return "plus";
        case CapacityVariant::PlusRelative: return "plus_relative";
    }
    return "variational";
}

CapacityVariant parse_capacity_variant(std::string_view text) {
    for (auto v : {CapacityVariant::Variational, CapacityVariant::VariationalRelative, CapacityVariant::Plus,
                   CapacityVariant::PlusRelative}) {
        if (text == to_string(v)) return v;
    }
    throw std::invalid_argument("unknown capacity variant '" + std::string(text) +
                                "' (expected variational|variational_relative|plus|plus_relative)");
}

bool is_relative(CapacityVariant v) {
    return v == CapacityVariant::VariationalRelative || v == CapacityVariant::PlusRelative;
}

bool has_value_term(CapacityVariant v) { return v == CapacityVariant::Plus || v == CapacityVariant::PlusRelative; }

std::size_t mask_count(const Mask& m) { return static_cast<std::size_t>(std::count(m.begin(), m.end(), 1)); }

void CapacityProblem::validate() const {
    const std::size_t cells = geometry.cell_count();
    if (target.size() != cells) throw std::invalid_argument("target: mask size does not match the lattice");
    if (mask_count(target) == 0) throw std::invalid_argument("target: mask is empty");
    if (is_relative(variant) && domain.size() != cells) {
        throw std::invalid_argument("domain: mask size does not match the lattice");
    }
    for (std::size_t c = 0; c < cells; ++c) {
        if (!target[c]) continue;
        if (geometry.on_boundary(c)) throw std::invalid_argument("target: touches the zero ring of the box");
        if (is_relative(variant) && !domain[c]) throw std::invalid_argument("target: not contained in domain");
    }
}

Mask CapacityProblem::free_cells() const {
    const std::size_t cells = geometry.cell_count();
    Mask free(cells, 0);
    for (std::size_t c = 0; c < cells; ++c) {
        bool allowed = !is_relative(variant) || domain[c];
        free[c] = allowed && !target[c] && !geometry.on_boundary(c) ? 1 : 0;
    }
    return free;
}

// ---------------------------------------------------------------------------

namespace {

// Forward differences along every axis, zero beyond the lattice.
std::vector<double> differences(const GridFunction& g) {
    const GridGeometry& geo = g.geometry;
    const std::size_t n = geo.dim(), cells = geo.cell_count();
    std::vector<double> d(cells * n);
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t stride = geo.stride(a);
        const std::size_t extent = geo.shape[a];
        for (std::size_t c = 0; c < cells; ++c) {
            std::size_t i = (c / stride) % extent;
            double next = i + 1 < extent ? g.samples[c + stride] : 0.0;
            d[c * n + a] = (next - g.samples[c]) / geo.spacing;
        }
    }
    return d;
}

std::vector<double> magnitudes(const std::vector<double>& d, std::size_t n) {
    std::vector<double> u(d.size() / n);
    for (std::size_t c = 0; c < u.size(); ++c) {
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a) s += d[c * n + a] * d[c * n + a];
        u[c] = std::sqrt(s);
    }
    return u;
}

struct Evaluation {
    double value = 0.0;
    std::vector<double> gradient;  // with respect to the samples
};

Evaluation evaluate(const CapacityProblem& problem, const GridFunction& g, bool want_gradient) {
    const GridGeometry& geo = g.geometry;
    const std::size_t n = geo.dim(), cells = geo.cell_count();
    const double p = problem.exp.p;
    const double m = static_cast<double>(geo.cell_measure());

    auto d = differences(g);
    auto u = magnitudes(d, n);
    NormGradient nd = lorentz_norm_gradient(u, m, problem.exp);
    Evaluation out;
    out.value = std::pow(nd.norm, p);
    if (want_gradient) {
        out.gradient.assign(cells, 0.0);
        const double outer = nd.norm > 0.0 ? p * std::pow(nd.norm, p - 1.0) : 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            const std::size_t stride = geo.stride(a);
            const std::size_t extent = geo.shape[a];
            for (std::size_t c = 0; c < cells; ++c) {
                if (u[c] == 0.0 || nd.gradient[c] == 0.0) continue;
                double w = outer * nd.gradient[c] * d[c * n + a] / (u[c] * geo.spacing);
                out.gradient[c] -= w;
                std::size_t i = (c / stride) % extent;
                if (i + 1 < extent) out.gradient[c + stride] += w;
            }
        }
    }
    if (has_value_term(problem.variant)) {
        std::vector<double> v(cells);
        for (std::size_t c = 0; c < cells; ++c) v[c] = std::fabs(g.samples[c]);
        NormGradient nv = lorentz_norm_gradient(v, m, problem.exp);
        out.value += std::pow(nv.norm, p);
        if (want_gradient && nv.norm > 0.0) {
            const double outer = p * std::pow(nv.norm, p - 1.0);
            for (std::size_t c = 0; c < cells; ++c) {
                double sign = g.samples[c] > 0.0 ? 1.0 : (g.samples[c] < 0.0 ? -1.0 : 0.0);
                out.gradient[c] += outer * nv.gradient[c] * sign;
            }
        }
    }
    return out;
}

void check_lattice(const CapacityProblem& problem, const GridFunction& g) {
    if (!(g.geometry == problem.geometry)) throw std::invalid_argument("grid function lattice does not match problem");
}

}  // namespace

std::vector<double> gradient_magnitude(const GridFunction& g) {
    return magnitudes(differences(g), g.geometry.dim());
}

NormGradient lorentz_norm_gradient(std::span<const double> values, double cell_measure, const LorentzExponents& exp) {
    NormGradient out;
    out.gradient.assign(values.size(), 0.0);
    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < values.size(); ++c) {
        if (values[c] != 0.0) order.push_back(c);
    }
    if (order.empty()) return out;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] != values[b] ? values[a] > values[b] : a < b;
    });
    const double p = exp.p, m = cell_measure;

    if (exp.weak()) {
        std::size_t best = 0;
        for (std::size_t i = 0; i < order.size(); ++i) {
            double v = std::fabs(values[order[i]]) * std::pow(static_cast<double>(i + 1) * m, 1.0 / p);
            if (v > out.norm) {
                out.norm = v;
                best = i;
            }
        }
        out.gradient[order[best]] = std::pow(static_cast<double>(best + 1) * m, 1.0 / p);
        return out;
    }

    const double q = exp.q, a = q / p;
    // Cell i of the sorted order occupies [(i-1)m, im) of the rearrangement.
    std::vector<double> weights(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        weights[i] = std::pow(static_cast<double>(i + 1) * m, a) - std::pow(static_cast<double>(i) * m, a);
    }
    if (q == 1.0) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            out.norm += p * std::fabs(values[order[i]]) * weights[i];
            out.gradient[order[i]] = p * weights[i];
        }
        return out;
    }
    const double top = std::fabs(values[order.front()]);
    double sum = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) sum += std::pow(std::fabs(values[order[i]]) / top, q) * weights[i];
    sum *= p / q;
    out.norm = top * std::pow(sum, 1.0 / q);
    // ∂N/∂v = S^{1/q - 1} (p/q) v^{q-1} W with S = N^q.
    const double scale = std::pow(sum, 1.0 / q - 1.0) * (p / q);
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.gradient[order[i]] = scale * std::pow(std::fabs(values[order[i]]) / top, q - 1.0) * weights[i];
    }
    return out;
}

double objective(const CapacityProblem& problem, const GridFunction& g) {
    check_lattice(problem, g);
    return evaluate(problem, g, false).value;
}

// ---------------------------------------------------------------------------

namespace {

// Chebyshev distance in cells to the nearest target cell.
std::vector<int> distance_to_target(const GridGeometry& geo, const Mask& target) {
    const std::size_t cells = geo.cell_count(), n = geo.dim();
    std::vector<int> dist(cells, std::numeric_limits<int>::max());
    std::deque<std::size_t> queue;
    for (std::size_t c = 0; c < cells; ++c) {
        if (target[c]) {
            dist[c] = 0;
            queue.push_back(c);
        }
    }
    std::vector<int> offset(n);
    while (!queue.empty()) {
        std::size_t c = queue.front();
        queue.pop_front();
        auto index = geo.unravel(c);
        std::fill(offset.begin(), offset.end(), -1);
        for (;;) {
            bool inside = true, centre = true;
            std::vector<std::size_t> nb(n);
            for (std::size_t a = 0; a < n; ++a) {
                long long i = static_cast<long long>(index[a]) + offset[a];
                if (i < 0 || i >= static_cast<long long>(geo.shape[a])) inside = false;
                nb[a] = static_cast<std::size_t>(std::max(i, 0LL));
                if (offset[a] != 0) centre = false;
            }
            if (inside && !centre) {
                std::size_t f = geo.ravel(nb);
                if (dist[f] == std::numeric_limits<int>::max()) {
                    dist[f] = dist[c] + 1;
                    queue.push_back(f);
                }
            }
            std::size_t a = 0;
            while (a < n && offset[a] == 1) offset[a++] = -1;
            if (a == n) break;
            ++offset[a];
        }
    }
    return dist;
}

void project(GridFunction& g, const Mask& target, const Mask& free) {
    for (std::size_t c = 0; c < g.samples.size(); ++c) {
        if (target[c]) {
            g.samples[c] = 1.0;
        } else if (!free[c]) {
            g.samples[c] = 0.0;
        } else {
            g.samples[c] = std::clamp(g.samples[c], 0.0, 1.0);
        }
    }
}

}  // namespace

CapacityResult minimize(const CapacityProblem& problem, const SolverOptions& options, const GridFunction* warm_start) {
    problem.validate();
    const GridGeometry& geo = problem.geometry;
    const Mask free = problem.free_cells();

    GridFunction g(geo);
    if (warm_start != nullptr) {
        check_lattice(problem, *warm_start);
        g = *warm_start;
    } else {
        auto dist = distance_to_target(geo, problem.target);
        const double radius = std::max(options.init_radius / geo.spacing, 1.0);
        std::mt19937_64 rng(options.seed);
        for (std::size_t c = 0; c < g.samples.size(); ++c) {
            double ramp = std::max(0.0, 1.0 - dist[c] / radius);
            double noise = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            g.samples[c] = ramp + options.init_noise * noise;
        }
    }
    project(g, problem.target, free);

    CapacityResult result;
    Evaluation e = evaluate(problem, g, true);
    double best = e.value;
    GridFunction best_g = g;
    double level_ref = best;
    double gap = 0.5 * best;
    int stall = 0;
    result.trace.push_back({0, e.value, best, 0.0, gap});

    for (int it = 1; it <= options.max_iterations; ++it) {
        result.iterations = it;
        if (best == 0.0 || gap <= options.rel_tol * best) {
            result.converged = true;
            break;
        }
        double norm2 = 0.0;
        for (std::size_t c = 0; c < free.size(); ++c) {
            if (!free[c]) e.gradient[c] = 0.0;
            norm2 += e.gradient[c] * e.gradient[c];
        }
        if (norm2 == 0.0) {
            result.converged = true;
            break;
        }
        const double step = (e.value - (level_ref - gap)) / norm2;
        for (std::size_t c = 0; c < free.size(); ++c) g.samples[c] -= step * e.gradient[c];
        project(g, problem.target, free);

        e = evaluate(problem, g, true);
        if (e.value < best) {
            best = e.value;
            best_g = g;
        }
        if (best <= level_ref - 0.5 * gap) {
            level_ref = best;
            stall = 0;
        } else if (++stall >= options.patience) {
            gap *= 0.5;
            level_ref = best;
            stall = 0;
            g = best_g;
            e = evaluate(problem, g, true);
        }
        result.trace.push_back({it, e.value, best, step, gap});
    }
    result.value = best;
    result.minimizer = std::move(best_g);
    return result;
}

ChainResult chain_check(const GridGeometry& geometry, const Mask& E, const Mask& G, const LorentzExponents& exp,
                        const SolverOptions& options, double tol) {
    for (std::size_t c = 0; c < E.size() && c < G.size(); ++c) {
        if (E[c] && !G[c]) throw std::invalid_argument("chain_check: E must be contained in G");
    }
    auto make = [&](CapacityVariant v) {
        CapacityProblem pr;
        pr.exp = exp;
        pr.variant = v;
        pr.geometry = geometry;
        pr.target = E;
        pr.domain = G;
        return pr;
    };
    const auto pv = make(CapacityVariant::Variational), pvr = make(CapacityVariant::VariationalRelative),
               pp = make(CapacityVariant::Plus), ppr = make(CapacityVariant::PlusRelative);

    // Largest infimum first; every later problem has a larger feasible set or a
    // smaller objective, so its warm start already certifies the ordering.
    CapacityResult plus_rel = minimize(ppr, options);
    CapacityResult plus = minimize(pp, options, &plus_rel.minimizer);
    CapacityResult var_rel = minimize(pvr, options, &plus_rel.minimizer);
    const GridFunction& start =
        objective(pv, plus.minimizer) <= objective(pv, var_rel.minimizer) ? plus.minimizer : var_rel.minimizer;
    CapacityResult var = minimize(pv, options, &start);

    ChainResult out;
    out.gamma = var.value;
    out.gamma_relative = var_rel.value;
    out.gamma_plus = plus.value;
    out.gamma_plus_relative = plus_rel.value;
    out.worst_slack = std::min({out.gamma_plus - out.gamma, out.gamma_plus_relative - out.gamma_plus,
                                out.gamma_relative - out.gamma, out.gamma_plus_relative - out.gamma_relative});
    out.ordered = out.worst_slack >= -tol;
    out.results = {std::move(var), std::move(var_rel), std::move(plus), std::move(plus_rel)};
    return out;
}

// ---------------------------------------------------------------------------

CutoffReport cutoff_multiply(const GridFunction& v, const CutoffSpec& spec, double p) {
    const GridGeometry& geo = v.geometry;
    if (spec.center.size() != geo.dim()) throw std::invalid_argument("cutoff: center has wrong dimension");
    if (!(spec.support_half_side > spec.inner_half_side) || !(spec.inner_half_side >= 0.0)) {
        throw std::invalid_argument("cutoff: need 0 <= inner_half_side < support_half_side");
    }
    if (!(spec.M > 1.0)) throw std::invalid_argument("cutoff: M must exceed 1");
    CutoffReport r;
    r.eta = GridFunction(geo);
    const double width = spec.support_half_side - spec.inner_half_side;
    for (std::size_t c = 0; c < geo.cell_count(); ++c) {
        auto x = geo.cell_center(c);
        double dist = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) dist = std::max(dist, std::fabs(x[a] - spec.center[a]));
        r.eta.samples[c] = std::clamp((spec.support_half_side - dist) / width, 0.0, 1.0);
    }
    auto d_eta = gradient_magnitude(r.eta);
    r.discrete_lipschitz = *std::max_element(d_eta.begin(), d_eta.end());
    if (r.discrete_lipschitz > spec.M * (1.0 + 1e-12)) {
        throw std::invalid_argument("cutoff: the lattice ramp has slope " + std::to_string(r.discrete_lipschitz) +
                                    ", exceeding M = " + std::to_string(spec.M));
    }
    r.v_tilde = GridFunction(geo);
    std::vector<double> ring(geo.cell_count(), 0.0);
    for (std::size_t c = 0; c < geo.cell_count(); ++c) {
        r.v_tilde.samples[c] = r.eta.samples[c] * v.samples[c];
        if (d_eta[c] != 0.0) ring[c] = v.samples[c];
    }
    const LorentzExponents exp(p, 1.0);
    const long double m = geo.cell_measure();
    r.norm_v_tilde = static_cast<double>(lorentz_norm(grid_to_profile(r.v_tilde), exp));
    r.norm_D_v_tilde = static_cast<double>(lorentz_norm(values_to_profile(gradient_magnitude(r.v_tilde), m), exp));
    r.norm_Dv = static_cast<double>(lorentz_norm(values_to_profile(gradient_magnitude(v), m), exp));
    r.ring_term = spec.M * static_cast<double>(lorentz_norm(values_to_profile(ring, m), exp));
    r.bound = r.norm_Dv + r.ring_term;
    return r;
}

long double testfn_upper_bound(const CantorParams& params, int j, const LorentzExponents& exp) {
    return std::pow(lorentz_norm(gradient_profile(TestFunction(params, j)), exp), static_cast<long double>(exp.p));
}

double ramp_oracle(int n, double p, double r) {
    double measure = (std::pow(4.0, n) - std::pow(2.0, n)) * std::pow(r, n);
    return std::pow(p * std::pow(measure, 1.0 / p) / r, p);
}

// ---------------------------------------------------------------------------

namespace {

// Index range of cells whose open cell meets [lo, hi] along one axis.
std::pair<long long, long long> meeting_range(double origin, double h, std::size_t extent, double lo, double hi) {
    long long first = static_cast<long long>(std::floor((lo - origin) / h));
    long long last = static_cast<long long>(std::ceil((hi - origin) / h)) - 1;
    first = std::max(first, 0LL);
    last = std::min(last, static_cast<long long>(extent) - 1);
    return {first, last};
}

void mark_box(Mask& mask, const GridGeometry& g, std::span<const double> center, double half_side) {
    const std::size_t n = g.dim();
    std::vector<std::pair<long long, long long>> ranges(n);
    for (std::size_t a = 0; a < n; ++a) {
        ranges[a] = meeting_range(g.origin[a], g.spacing, g.shape[a], center[a] - half_side, center[a] + half_side);
        if (ranges[a].first > ranges[a].second) return;
    }
    std::vector<std::size_t> index(n);
    for (std::size_t a = 0; a < n; ++a) index[a] = static_cast<std::size_t>(ranges[a].first);
    for (;;) {
        mask[g.ravel(index)] = 1;
        std::size_t a = n;
        while (a-- > 0) {
            if (static_cast<long long>(index[a]) < ranges[a].second) {
                ++index[a];
                break;
            }
            index[a] = static_cast<std::size_t>(ranges[a].first);
            if (a == 0) return;
        }
    }
}

}  // namespace

Mask cube_mask_meeting(const GridGeometry& g, std::span<const double> center, double half_side) {
    if (center.size() != g.dim()) throw std::invalid_argument("cube center has wrong dimension");
    Mask mask(g.cell_count(), 0);
    mark_box(mask, g, center, half_side);
    return mask;
}

Mask cube_mask_centers(const GridGeometry& g, std::span<const double> center, double half_side) {
    if (center.size() != g.dim()) throw std::invalid_argument("cube center has wrong dimension");
    Mask mask(g.cell_count(), 0);
    for (std::size_t c = 0; c < mask.size(); ++c) {
        auto x = g.cell_center(c);
        bool inside = true;
        for (std::size_t a = 0; a < x.size(); ++a) inside = inside && std::fabs(x[a] - center[a]) < half_side;
        mask[c] = inside ? 1 : 0;
    }
    return mask;
}

Mask cantor_target_mask(const GridGeometry& g, const CantorParams& params, int depth, const Budget& budget) {
    if (static_cast<int>(g.dim()) != params.n()) throw std::invalid_argument("lattice dimension does not match n");
    Mask mask(g.cell_count(), 0);
    for (const Cube& cube : core_cubes(params, depth, budget)) mark_box(mask, g, cube.center, cube.half_side);
    return mask;
}

CapacityProblem cube_annulus_problem(int n, double p, double r, double h) {
    CapacityProblem pr;
    pr.exp = LorentzExponents(p, 1.0);
    pr.variant = CapacityVariant::VariationalRelative;
    pr.geometry = GridGeometry::centered_box(static_cast<std::size_t>(n), 3.0 * r, h);
    std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
    pr.target = cube_mask_meeting(pr.geometry, origin, r);
    pr.domain = cube_mask_centers(pr.geometry, origin, 2.0 * r);
    return pr;
}

double extrapolate(std::span<const double> values, std::string* method) {
    auto set = [&](const char* m) {
        if (method != nullptr) *method = m;
    };
    if (values.empty()) throw std::invalid_argument("extrapolate: no values");
    if (values.size() == 1) {
        set("none");
        return values[0];
    }
    const std::size_t k = values.size();
    const double v2 = values[k - 1], v1 = values[k - 2];
    if (k >= 3) {
        const double d1 = v1 - values[k - 3], d2 = v2 - v1;
        if (d1 != 0.0) {
            double ratio = d2 / d1;
            if (ratio > 0.0 && ratio < 0.95) {
                set("aitken");
                return v2 + ratio * d2 / (1.0 - ratio);
            }
        }
    }
    set("richardson");
    return 2.0 * v2 - v1;
}

RefinementResult refine(const std::function<CapacityProblem(double)>& make_problem, std::span<const double> hs,
                        const SolverOptions& options) {
    RefinementResult out;
    for (double h : hs) {
        CapacityResult r = minimize(make_problem(h), options);
        out.h_sequence.push_back(h);
        out.values.push_back(r.value);
        out.iterations.push_back(r.iterations);
        out.converged.push_back(r.converged);
    }
    out.extrapolated = extrapolate(out.values, &out.method);
    return out;
}

}  // namespace lorcap
