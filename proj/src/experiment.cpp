#include "lorcap/experiment.hpp"

#include "lorcap/hausdorff.hpp"
#include "lorcap/testfn.hpp"
#include "lorcap/tolerance.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace lorcap {

namespace fs = std::filesystem;

Budget ExperimentConfig::budget() const {
    Budget b = Budget::from_env();
    if (budgets.max_items > 0) b.max_items = static_cast<std::size_t>(budgets.max_items);
    return b;
}

namespace {

const std::set<std::string> kCommands{"norm", "cantor", "testfn", "hausdorff", "capacity", "pipeline"};

json tolerance_json() {
    Tolerance t;
    return json{{"relative", t.relative}, {"absolute", t.absolute}};
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    require_object(j, "");
    ExperimentConfig c;
    c.command = get_string(j, "command", "");
    if (!kCommands.count(c.command)) {
        throw InputError("/command", "unknown command '" + c.command +
                                         "' (expected norm|cantor|testfn|hausdorff|capacity|pipeline)");
    }
    if (has_field(j, "params")) {
        c.params = j.at("params");
        require_object(c.params, "/params");
    }
    c.output = get_string_or(j, "output", "", "");
    if (has_field(j, "seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_integer() || s.get<long long>() < 0) throw InputError("/seed", "expected a nonnegative integer");
        c.seed = s.get<std::uint64_t>();
    }
    if (has_field(j, "budgets")) {
        const json& b = j.at("budgets");
        require_object(b, "/budgets");
        c.budgets.max_iterations = get_int_or(b, "max_iterations", "/budgets", c.budgets.max_iterations);
        c.budgets.scan_limit = get_int_or(b, "scan_limit", "/budgets", c.budgets.scan_limit);
        if (has_field(b, "max_items")) {
            if (!b.at("max_items").is_number_integer()) throw InputError("/budgets/max_items", "expected an integer");
            c.budgets.max_items = b.at("max_items").get<long long>();
        }
        if (c.budgets.max_iterations < 1) throw InputError("/budgets/max_iterations", "must be positive");
        if (c.budgets.scan_limit < 1) throw InputError("/budgets/scan_limit", "must be positive");
        if (c.budgets.max_items < 0) throw InputError("/budgets/max_items", "must be positive");
    }
    return c;
}

json to_json(const ExperimentConfig& c) {
    json budgets{{"max_iterations", c.budgets.max_iterations}, {"scan_limit", c.budgets.scan_limit}};
    if (c.budgets.max_items > 0) budgets["max_items"] = c.budgets.max_items;
    return json{{"command", c.command}, {"params", c.params}, {"output", c.output}, {"seed", c.seed}, {"budgets", budgets}};
}

std::string config_hash(const ExperimentConfig& c) {
    json canonical{{"budgets", {{"max_items", c.budgets.max_items},
                                {"max_iterations", c.budgets.max_iterations},
                                {"scan_limit", c.budgets.scan_limit}}},
                   {"seed", c.seed},
                   {"tolerance", tolerance_json()}};
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : canonical.dump()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return fmt::format("{:016x}", h);
}

// ---------------------------------------------------------------------------

namespace {

const Tolerance kTol;

bool close(long double a, long double b) { return approx_equal(a, b, kTol.relative, kTol.absolute); }

std::string num(long double x) { return format_number(x); }

struct Emitter {
    const ExperimentConfig& config;
    RunOutcome& outcome;

    void meta(const fs::path& artifact, const char* schema, const json& extra = json::object()) {
        json m{{"command", config.command},
               {"config_hash", config_hash(config)},
               {"seed", config.seed},
               {"tolerance", tolerance_json()},
               {"artifact", artifact.filename().string()},
               {"schema", schema == nullptr ? json(nullptr) : json(schema)},
               {"params", config.params},
               {"invariants", outcome.invariants}};
        for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
        write_json_file(fs::path(artifact.string() + ".meta.json"), m);
    }

    void json_artifact(const json& j, const char* schema, const json& extra = json::object()) {
        if (config.output.empty()) return;
        fs::path path(config.output);
        write_json_file(path, j);
        meta(path, schema, extra);
        outcome.artifacts.push_back(path);
    }

    void csv_artifact(const CsvTable& t, const fs::path& path, const json& extra = json::object()) {
        write_csv_file(path, t);
        json e = extra;
        e["csv_header"] = t.header;
        meta(path, nullptr, e);
        outcome.artifacts.push_back(path);
    }
};

void check(RunOutcome& out, const std::string& name, bool ok) {
    out.invariants[name] = ok;
    if (!ok) out.exit_code = kExitInvariantViolation;
}

fs::path sibling(const std::string& output, const std::string& suffix) {
    fs::path p(output);
    return p.parent_path() / (p.stem().string() + suffix);
}

// ---------------------------------------------------------------------------

RunOutcome run_norm(const ExperimentConfig& c) {
    RunOutcome out;
    const json& P = c.params;
    StepProfile profile;
    if (has_field(P, "profile")) {
        profile = profile_from_json(P.at("profile"), "/params/profile");
    } else {
        std::string file = get_string(P, "profile_file", "/params");
        profile = profile_from_json(read_json_file(file), "");
    }
    double p = get_number(P, "p", "/params");
    if (!(p > 1.0)) throw InputError("/params/p", "must be > 1");
    double q = get_q(P, "q", "/params", 1.0);
    std::string functional = get_string_or(P, "functional", "/params", "lorentz");
    LorentzExponents exp(p, q);

    long double lorentz = lorentz_norm(profile, exp);
    long double layer = layercake_p1(profile, p);
    long double weak_f = lorentz_norm(profile, LorentzExponents(p, kInfinity));
    long double weak_mu = weak_norm_from_distribution(profile, p);
    long double lorentz1 = lorentz_norm(profile, LorentzExponents(p, 1.0));
    check(out, "factor_p_layercake", close(lorentz1, static_cast<long double>(p) * layer));
    check(out, "weak_forms_agree", close(weak_f, weak_mu));

    long double value;
    if (functional == "lorentz") {
        value = lorentz;
    } else if (functional == "layercake") {
        value = layer;
    } else if (functional == "weak_distribution") {
        value = weak_mu;
    } else {
        throw InputError("/params/functional", "expected lorentz|layercake|weak_distribution");
    }
    out.printed = num(value) + "\n";
    json j{{"functional", functional},
           {"p", p},
           {"q", std::isinf(q) ? json("inf") : json(q)},
           {"value", static_cast<double>(value)},
           {"lorentz", static_cast<double>(lorentz)},
           {"layercake_p1", static_cast<double>(layer)},
           {"total_mass", static_cast<double>(profile.total_mass())}};
    Emitter{c, out}.json_artifact(j, "norm_result.schema.json");
    return out;
}

RunOutcome run_cantor(const ExperimentConfig& c) {
    RunOutcome out;
    const json& P = c.params;
    CantorParams params = cantor_params_from_json(P, "/params");
    const Budget budget = c.budget();
    check(out, "beta_identity", params.beta_identity_holds());

    if (has_field(P, "locate")) {
        const json& x = P.at("locate");
        if (!x.is_array() || static_cast<int>(x.size()) != params.n()) {
            throw InputError("/params/locate", "expected an array of n coordinates");
        }
        std::vector<double> point;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!x[i].is_number()) throw InputError("/params/locate/" + std::to_string(i), "expected a number");
            point.push_back(x[i].get<double>());
        }
        int depth = get_int_or(P, "depth", "/params", 1);
        if (depth < 1) throw InputError("/params/depth", "must be >= 1");
        Location loc;
        try {
            loc = locate(params, point, depth);
        } catch (const std::domain_error& e) {
            throw InputError("/params/locate", e.what());
        }
        json j = location_json(loc);
        out.printed = j.dump() + "\n";
        Emitter{c, out}.json_artifact(j, "location.schema.json");
        return out;
    }

    int generations = get_int_or(P, "generations", "/params", 3);
    if (generations < 1) throw InputError("/params/generations", "must be >= 1");
    bool axis = P.value("axis", false);

    // Exact tiling and nesting through the dumped depth.
    Surd total(params.root());
    bool nested = true;
    for (int k = 1; k <= generations; ++k) {
        total += generation_measure(params, k);
        if (nesting_margin(params, k).sign() < 0) nested = false;
    }
    total += core_measure(params, generations);
    check(out, "tiling_exact", total == Surd(params.root(), pow2(params.n())));
    check(out, "nesting", nested);

    CsvTable t;
    std::vector<FrameRow> rows;
    const int dims = axis ? 1 : params.n();
    t.header = {"generation", "word"};
    for (int a = 1; a <= dims; ++a) t.header.push_back("c" + std::to_string(a));
    t.header.insert(t.header.end(), {"inner", "outer"});
    rows = axis ? axis_projection_rows(params, generations) : frame_rows(params, generations, budget);
    for (const FrameRow& r : rows) {
        std::vector<std::string> line{std::to_string(r.generation), r.word.to_string()};
        for (double x : r.center) line.push_back(num(x));
        line.push_back(num(r.inner));
        line.push_back(num(r.outer));
        t.rows.push_back(std::move(line));
    }
    if (c.output.empty()) {
        out.printed = to_csv(t);
    } else {
        Emitter{c, out}.csv_artifact(t, c.output);
    }
    return out;
}

RunOutcome run_testfn(const ExperimentConfig& c) {
    RunOutcome out;
    const json& P = c.params;
    CantorParams params = cantor_params_from_json(P, "/params");
    double q = get_q(P, "q", "/params", 1.0);
    auto [j0, j1] = has_field(P, "j") ? get_range(P, "j", "/params") : std::pair<int, int>{2, 10};
    if (j0 < 1) throw InputError("/params/j", "j must be >= 1");
    LorentzExponents exp(params.p_value(), q);

    auto rows = norm_table(params, exp, j0, j1);
    CsvTable t;
    t.header = {"j", "J", "Cj", "norm_f", "norm_Df", "reference_tail", "ratio"};
    bool telescopes = true, slopes_increase = true, bounded = true;
    CsvTable slopes;
    slopes.header = {"j", "k", "implemented_slope", "displayed_slope_bound", "generation_measure"};
    for (const NormRow& r : rows) {
        t.rows.push_back({std::to_string(r.j), std::to_string(r.J), num(to_long_double(r.Cj)), num(r.norm_f),
                          num(r.norm_Df), num(r.reference_tail), num(r.ratio)});
        TestFunction f(params, r.j);
        telescopes = telescopes && f.plateau(f.J() + 1) == 1;
        auto srows = slope_table(f);
        for (std::size_t i = 0; i < srows.size(); ++i) {
            if (i > 0 && !(srows[i].slope > srows[i - 1].slope)) slopes_increase = false;
            slopes.rows.push_back({std::to_string(r.j), std::to_string(srows[i].k), num(srows[i].slope),
                                   num(srows[i].displayed_bound), num(srows[i].measure)});
        }
        bounded = bounded && r.norm_Df <= r.norm_Df_bound * (1.0L + kTol.relative);
    }
    check(out, "plateaus_telescope_to_one", telescopes);
    check(out, "slopes_increase_with_generation", slopes_increase);
    check(out, "norm_below_displayed_bound", bounded);

    if (c.output.empty()) {
        out.printed = to_csv(t);
    } else {
        json cj = json::array();
        for (const NormRow& r : rows) {
            json entry = rational_json(r.Cj);
            entry["j"] = r.j;
            cj.push_back(entry);
        }
        Emitter e{c, out};
        e.csv_artifact(t, c.output, json{{"Cj_exact", cj}});
        if (P.value("slopes", false)) e.csv_artifact(slopes, sibling(c.output, ".slopes.csv"));
    }
    return out;
}

RunOutcome run_hausdorff(const ExperimentConfig& c) {
    RunOutcome out;
    const json& P = c.params;
    CantorParams params = cantor_params_from_json(P, "/params");
    std::string mode = get_string_or(P, "mode", "/params", "covering");
    const Rational critical = Rational(params.n()) - params.p();

    if (mode == "dimension") {
        int depth = get_int_or(P, "depth", "/params", 12);
        double tol = get_number_or(P, "tol", "/params", 0.02);
        if (depth < 1) throw InputError("/params/depth", "must be >= 1");
        if (!(tol > 0.0)) throw InputError("/params/tol", "must be > 0");
        DimensionEstimate d = dimension_estimate(params, depth, tol);
        check(out, "determinate", d.determinate);
        json trend = json::array();
        for (const TrendSample& s : d.trend) {
            trend.push_back(json{{"d", s.d}, {"rate", s.rate}, {"slope", s.slope}, {"verdict", s.verdict}});
        }
        json j{{"estimate", d.determinate ? json(d.estimate) : json(nullptr)},
               {"bracket", {d.lo, d.hi}},
               {"trend_slopes", trend},
               {"determinate", d.determinate},
               {"message", d.message}};
        out.printed = d.determinate ? num(d.estimate) + "\n" : "indeterminate: " + d.message + "\n";
        Emitter{c, out}.json_artifact(j, "dimension_estimate.schema.json");
        return out;
    }

    Rational d = get_rational(P, "d", "/params");
    if (d < 0) throw InputError("/params/d", "must be >= 0");

    if (mode == "mass") {
        if (!(d > 0)) throw InputError("/params/d", "must be > 0");
        int depth = get_int_or(P, "depth", "/params", 12);
        if (depth < 1) throw InputError("/params/depth", "must be >= 1");
        MassBound m = mass_lower_bound(params, to_double(d), depth);
        json ratios = json::array();
        for (long double r : m.ratios) ratios.push_back(static_cast<double>(r));
        json j{{"d", to_double(d)}, {"ratios", ratios}, {"bound", static_cast<double>(m.bound)}, {"argmin", m.argmin}};
        out.printed = num(m.bound) + "\n";
        Emitter{c, out}.json_artifact(j, "mass_bound.schema.json");
        return out;
    }
    if (mode != "covering") throw InputError("/params/mode", "expected covering|mass|dimension");

    std::pair<int, int> ks = has_field(P, "k") ? get_range(P, "k", "/params") : std::pair<int, int>{1, 12};
    if (ks.first < 1) throw InputError("/params/k", "must be >= 1");
    CsvTable t;
    t.header = {"variant", "d", "k", "count", "half_side", "sum"};
    bool identity = true;
    long double last = 0.0L;
    for (int k = ks.first; k <= ks.second; ++k) {
        CoveringReport r = covering_content(params, d, k);
        if (d == critical) {
            const ExactPower& e = *r.exact;
            Rational expected_k = params.variant() == Variant::Harmonic ? Rational(params.p() - params.n()) : Rational(0);
            identity = identity && e.log2_exponent == 0 && e.k_exponent == expected_k;
        }
        t.rows.push_back({std::string(to_string(params.variant())), num(to_long_double(d)), std::to_string(k),
                          num(r.count), num(r.half_side), num(r.sum)});
        last = r.sum;
    }
    if (d == critical) check(out, "critical_covering_identity", identity);
    if (c.output.empty()) {
        out.printed = ks.first == ks.second ? num(last) + "\n" : to_csv(t);
    } else {
        Emitter{c, out}.csv_artifact(t, c.output);
        if (ks.first == ks.second) out.printed = num(last) + "\n";
    }
    return out;
}

json capacity_result_json(const CapacityProblem& pr, const CapacityResult& r) {
    return json{{"variant", std::string(to_string(pr.variant))},
                {"p", pr.exp.p},
                {"q", pr.exp.weak() ? json("inf") : json(pr.exp.q)},
                {"value", r.value},
                {"iterations", r.iterations},
                {"converged", r.converged},
                {"h_sequence", {pr.geometry.spacing}},
                {"extrapolated_value", r.value},
                {"target_cells", mask_count(pr.target)},
                {"scheme", "forward differences, zero beyond the lattice, Euclidean magnitude"}};
}

bool feasible(const CapacityProblem& pr, const GridFunction& g) {
    const Mask free = pr.free_cells();
    for (std::size_t c = 0; c < g.samples.size(); ++c) {
        double v = g.samples[c];
        if (pr.target[c] && v < 1.0) return false;
        if (!pr.target[c] && !free[c] && v != 0.0) return false;
        if (v < 0.0 || v > 1.0) return false;
    }
    return true;
}

RunOutcome run_capacity(const ExperimentConfig& c) {
    RunOutcome out;
    const json& P = c.params;
    const Budget budget = c.budget();
    SolverOptions opt;
    opt.seed = c.seed;
    opt.max_iterations = c.budgets.max_iterations;
    std::string mode = get_string_or(P, "mode", "/params", "minimize");

    if (mode == "cube_annulus") {
        int n = get_int_or(P, "n", "/params", 2);
        double p = get_number_or(P, "p", "/params", 1.5);
        double r = get_number_or(P, "r", "/params", 0.5);
        if (n < 1) throw InputError("/params/n", "must be >= 1");
        if (!(p > 1.0)) throw InputError("/params/p", "must be > 1");
        if (!(r > 0.0)) throw InputError("/params/r", "must be > 0");
        std::vector<double> hs{0.125, 0.0625, 0.03125};
        if (has_field(P, "hs")) {
            hs.clear();
            const json& a = P.at("hs");
            if (!a.is_array() || a.empty()) throw InputError("/params/hs", "expected a nonempty array of spacings");
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (!a[i].is_number() || !(a[i].get<double>() > 0.0)) {
                    throw InputError("/params/hs/" + std::to_string(i), "expected a positive number");
                }
                hs.push_back(a[i].get<double>());
            }
        }
        RefinementResult ref;
        try {
            for (double h : hs) budget.require(GridGeometry::centered_box(n, 3 * r, h).cell_count(), "capacity lattice");
            ref = refine([&](double h) { return cube_annulus_problem(n, p, r, h); }, hs, opt);
        } catch (const ResourceError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw InputError("/params/hs", e.what());
        }
        double oracle = ramp_oracle(n, p, r);
        json j{{"variant", "variational_relative"},
               {"p", p},
               {"q", 1.0},
               {"value", ref.values.back()},
               {"iterations", ref.iterations.back()},
               {"converged", std::all_of(ref.converged.begin(), ref.converged.end(), [](bool b) { return b; })},
               {"h_sequence", ref.h_sequence},
               {"values", ref.values},
               {"extrapolated_value", ref.extrapolated},
               {"extrapolation", ref.method},
               {"oracle", oracle},
               {"oracle_ratio", ref.extrapolated / oracle}};
        out.printed = num(ref.extrapolated) + "\n";
        Emitter{c, out}.json_artifact(j, "capacity_result.schema.json");
        return out;
    }

    CapacityProblem pr = has_field(P, "problem")
                             ? capacity_problem_from_json(P.at("problem"), "/params/problem", budget)
                             : capacity_problem_from_json(read_json_file(get_string(P, "problem_file", "/params")), "",
                                                          budget);
    if (mode == "chain") {
        if (pr.domain.empty()) throw InputError("/params/problem/domain_cells", "chain mode needs a domain G");
        ChainResult ch = chain_check(pr.geometry, pr.target, pr.domain, pr.exp, opt);
        check(out, "chain_ordering", ch.ordered);
        json j{{"gamma", ch.gamma},
               {"gamma_relative", ch.gamma_relative},
               {"gamma_plus", ch.gamma_plus},
               {"gamma_plus_relative", ch.gamma_plus_relative},
               {"worst_slack", ch.worst_slack},
               {"ordered", ch.ordered}};
        out.printed = j.dump() + "\n";
        Emitter{c, out}.json_artifact(j, "chain_result.schema.json");
        return out;
    }
    if (mode != "minimize") throw InputError("/params/mode", "expected minimize|chain|cube_annulus");

    CapacityResult r = minimize(pr, opt);
    check(out, "minimizer_feasible", feasible(pr, r.minimizer));
    out.printed = num(r.value) + "\n";
    Emitter e{c, out};
    e.json_artifact(capacity_result_json(pr, r), "capacity_result.schema.json");
    if (has_field(P, "minimizer_output")) {
        fs::path path(get_string(P, "minimizer_output", "/params"));
        write_json_file(path, to_json(r.minimizer));
        e.meta(path, "grid_function.schema.json");
        out.artifacts.push_back(path);
    }
    return out;
}

RunOutcome run_pipeline_command(const ExperimentConfig& c) {
    RunOutcome out;
    json P = c.params;
    if (!has_field(P, "variant")) P["variant"] = "harmonic";
    if (!has_field(P, "n")) P["n"] = 5;
    if (!has_field(P, "p")) P["p"] = "5/4";
    CantorParams params = cantor_params_from_json(P, "/params");
    int K = get_int_or(P, "K", "/params", 5);
    if (K < 1) throw InputError("/params/K", "must be >= 1");
    double eps = get_number_or(P, "eps", "/params", 0.01);
    if (!(eps > 0.0)) throw InputError("/params/eps", "must be > 0");

    PipelineState st;
    auto go = [&](const PiecewiseDensity& phi) {
        try {
            st = run_pipeline(params, K, phi, c.budgets.scan_limit);
        } catch (const PipelineError& e) {
            throw InputError("/params/K", e.what());
        }
    };
    if (has_field(P, "young")) {
        go(density_from_json(P.at("young"), "/params/young", true));
    } else {
        go(calibrate_family(params.p_value(), eps));
    }

    bool disjoint = true, bounded = true, decreasing = true;
    for (std::size_t i = 0; i < st.rows.size(); ++i) {
        const PipelineRow& r = st.rows[i];
        bounded = bounded && r.energy <= std::exp2(-static_cast<long double>(r.k));
        if (i > 0) disjoint = disjoint && st.rows[i - 1].J < r.j;
    }
    auto seq = st.modular_sequence();
    for (std::size_t i = 1; i < seq.size(); ++i) decreasing = decreasing && seq[i] <= seq[i - 1];
    check(out, "generations_disjoint", disjoint);
    check(out, "energy_below_2^-k", bounded);
    check(out, "modular_nonincreasing", decreasing);

    CsvTable t;
    t.header = {"k", "j_k", "J_k", "norm_p", "modular_Dg", "modular_g", "remainder_bound"};
    for (const PipelineRow& r : st.rows) {
        t.rows.push_back({std::to_string(r.k), std::to_string(r.j), std::to_string(r.J), num(r.energy),
                          num(r.modular_Dg), num(r.modular_g), num(r.remainder_bound)});
    }
    json extra{{"modular_F", static_cast<double>(st.modular_F)}, {"modular_F_exceeds_one", st.modular_F_exceeds_one}};
    if (c.output.empty()) {
        out.printed = to_csv(t);
    } else {
        Emitter{c, out}.csv_artifact(t, c.output, extra);
    }
    return out;
}

}  // namespace

RunOutcome run(const ExperimentConfig& config) {
    if (!kCommands.count(config.command)) throw InputError("/command", "unknown command '" + config.command + "'");
    if (config.command == "norm") return run_norm(config);
    if (config.command == "cantor") return run_cantor(config);
    if (config.command == "testfn") return run_testfn(config);
    if (config.command == "hausdorff") return run_hausdorff(config);
    if (config.command == "capacity") return run_capacity(config);
    return run_pipeline_command(config);
}

// ---------------------------------------------------------------------------

namespace {

json csv_verdicts(const fs::path& path, const std::string& command) {
    json v = json::object();
    if (command != "testfn") return v;
    CsvTable t = read_csv_file(path);
    auto column = [&](const std::string& name) -> std::vector<double> {
        auto it = std::find(t.header.begin(), t.header.end(), name);
        if (it == t.header.end()) return {};
        std::size_t i = static_cast<std::size_t>(it - t.header.begin());
        std::vector<double> out;
        for (const auto& r : t.rows) out.push_back(i < r.size() ? std::stod(r[i]) : std::nan(""));
        return out;
    };
    auto strictly_decreasing = [](const std::vector<double>& xs) {
        for (std::size_t i = 1; i < xs.size(); ++i) {
            if (!(xs[i] < xs[i - 1])) return false;
        }
        return true;
    };
    if (t.header.size() > 1 && t.header[1] == "J") {
        v["norm_Df_strictly_decreasing"] = strictly_decreasing(column("norm_Df"));
        v["norm_f_strictly_decreasing"] = strictly_decreasing(column("norm_f"));
    }
    return v;
}

}  // namespace

ReportOutcome report(const std::vector<fs::path>& artifacts) {
    ReportOutcome out;
    json sections = json::array();
    std::map<std::string, std::vector<std::string>> by_hash;
    bool all_passed = true;
    json missing = json::array();
    for (const fs::path& a : artifacts) {
        fs::path meta(a.string() + ".meta.json");
        if (!fs::exists(a) || !fs::exists(meta)) {
            missing.push_back(a.string());
            continue;
        }
        json m = read_json_file(meta);
        std::string command = m.value("command", "");
        std::string hash = m.value("config_hash", "");
        by_hash[hash].push_back(a.filename().string());
        json inv = m.value("invariants", json::object());
        bool passed = true;
        for (auto it = inv.begin(); it != inv.end(); ++it) passed = passed && it.value().get<bool>();
        all_passed = all_passed && passed;
        json section{{"artifact", a.filename().string()},
                     {"command", command},
                     {"config_hash", hash},
                     {"invariants", inv},
                     {"passed", passed}};
        json verdicts = a.extension() == ".csv" ? csv_verdicts(a, command) : json::object();
        if (!verdicts.empty()) section["verdicts"] = verdicts;
        sections.push_back(section);
    }
    if (!missing.empty()) {
        out.exit_code = kExitInputError;
        out.summary = json{{"error", "missing artifacts"}, {"missing", missing}};
        return out;
    }
    if (by_hash.size() > 1) {
        out.exit_code = kExitInputError;
        json conflicts = json::object();
        for (const auto& [hash, names] : by_hash) conflicts[hash] = names;
        out.summary = json{{"error", "conflicting config hashes"}, {"conflicts", conflicts}};
        return out;
    }
    out.summary = json{{"config_hash", by_hash.empty() ? json(nullptr) : json(by_hash.begin()->first)},
                       {"tolerance", tolerance_json()},
                       {"sections", sections},
                       {"all_invariants_passed", all_passed}};
    return out;
}

// ---------------------------------------------------------------------------

std::vector<ExperimentConfig> suite_configs(std::uint64_t seed, const fs::path& dir) {
    auto make = [&](std::string command, json params, const std::string& file) {
        ExperimentConfig c;
        c.command = std::move(command);
        c.params = std::move(params);
        c.output = (dir / file).string();
        c.seed = seed;
        return c;
    };
    json profile = json::array({json{{"value", 2}, {"mass", 1}}, json{{"value", 1}, {"mass", 3}}});
    return {
        make("norm", json{{"profile", profile}, {"p", 2}, {"q", 1}}, "norm.json"),
        make("cantor", json{{"n", 2}, {"p", "3/2"}, {"variant", "uniform"}, {"generations", 3}}, "frames_uniform.csv"),
        make("cantor", json{{"n", 2}, {"p", "3/2"}, {"variant", "harmonic"}, {"generations", 3}}, "frames_harmonic.csv"),
        make("cantor", json{{"n", 4}, {"p", "2"}, {"generations", 3}, {"axis", true}}, "axis_projection.csv"),
        make("testfn", json{{"n", 2}, {"p", "3/2"}, {"variant", "uniform"}, {"q", 2}, {"j", "2..10"}, {"slopes", true}},
             "norms_uniform_q2.csv"),
        make("testfn", json{{"n", 2}, {"p", "3/2"}, {"variant", "uniform"}, {"q", "inf"}, {"j", "2..12"}},
             "norms_uniform_qinf.csv"),
        make("testfn", json{{"n", 2}, {"p", "3/2"}, {"variant", "uniform"}, {"q", 1}, {"j", "2..10"}},
             "norms_uniform_q1.csv"),
        make("testfn", json{{"n", 2}, {"p", "3/2"}, {"variant", "harmonic"}, {"q", 1}, {"j", "2..10"}},
             "norms_harmonic_q1.csv"),
        make("hausdorff", json{{"n", 2}, {"p", "3/2"}, {"variant", "uniform"}, {"d", "1/2"}, {"k", "1..12"}},
             "covering_uniform.csv"),
        make("hausdorff", json{{"n", 2}, {"p", "3/2"}, {"variant", "harmonic"}, {"d", "1/2"}, {"k", "1..12"}},
             "covering_harmonic.csv"),
        make("hausdorff", json{{"n", 2}, {"p", "3/2"}, {"variant", "harmonic"}, {"mode", "dimension"}, {"depth", 12},
                               {"tol", 0.02}},
             "dimension_harmonic.json"),
        make("capacity", json{{"mode", "cube_annulus"}, {"n", 2}, {"p", 1.5}, {"r", 0.5}, {"hs", {0.125, 0.0625}}},
             "capacity_cube_annulus.json"),
        make("capacity",
             json{{"mode", "chain"},
                  {"problem", {{"dim", 2}, {"p", 1.5}, {"q", 1}, {"box", 1.0}, {"h", 0.125},
                               {"target_cube", {{"half_side", 0.25}}}, {"domain_cube", {{"half_side", 0.75}}}}}},
             "capacity_chain.json"),
        make("pipeline", json{{"n", 5}, {"p", "5/4"}, {"variant", "harmonic"}, {"K", 5}, {"eps", 0.01}}, "pipeline.csv"),
    };
}

RunOutcome run_suite(std::uint64_t seed, const fs::path& dir) {
    RunOutcome out;
    fs::create_directories(dir);
    for (const ExperimentConfig& c : suite_configs(seed, dir)) {
        RunOutcome r = run(c);
        out.exit_code = std::max(out.exit_code, r.exit_code);
        out.artifacts.insert(out.artifacts.end(), r.artifacts.begin(), r.artifacts.end());
    }
    ReportOutcome rep = report(out.artifacts);
    write_json_file(dir / "summary.json", rep.summary);
    out.exit_code = std::max(out.exit_code, rep.exit_code);
    out.printed = (dir / "summary.json").string() + "\n";
    return out;
}

}  // namespace lorcap
