#include "lorcap/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace lorcap {

InputError::InputError(std::string pointer, const std::string& message)
    : std::invalid_argument((pointer.empty() ? std::string("/") : pointer) + ": " + message),
      pointer_(std::move(pointer)) {}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::string s = fmt::format("{}", x);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::string format_number(long double x) {
    const long double a = std::fabs(x);
    const bool fits = a == 0.0L || !std::isfinite(x) ||
                      (a >= static_cast<long double>(std::numeric_limits<double>::min()) &&
                       a <= static_cast<long double>(std::numeric_limits<double>::max()));
    if (fits) return format_number(static_cast<double>(x));
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.20Le", x);
    return buffer;
}

json rational_json(const Rational& r) {
    return json{{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}, {"decimal", format_number(to_long_double(r))}};
}

// ---------------------------------------------------------------------------

namespace {

std::string child(const std::string& ptr, const std::string& key) {
    std::string escaped;
    for (char c : key) {
        if (c == '~') {
            escaped += "~0";
        } else if (c == '/') {
            escaped += "~1";
        } else {
            escaped += c;
        }
    }
    return ptr + "/" + escaped;
}

std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

double as_number(const json& v, const std::string& ptr) {
    if (!v.is_number()) throw InputError(ptr, "expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError(ptr, "expected a finite number");
    return x;
}

}  // namespace

void require_object(const json& obj, const std::string& ptr) {
    if (!obj.is_object()) throw InputError(ptr, "expected an object");
}

bool has_field(const json& obj, const std::string& key) { return obj.is_object() && obj.contains(key); }

const json& require_field(const json& obj, const std::string& key, const std::string& ptr) {
    require_object(obj, ptr);
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError(child(ptr, key), "required field is missing");
    return *it;
}

double get_number(const json& obj, const std::string& key, const std::string& ptr) {
    return as_number(require_field(obj, key, ptr), child(ptr, key));
}

double get_number_or(const json& obj, const std::string& key, const std::string& ptr, double fallback) {
    return has_field(obj, key) ? get_number(obj, key, ptr) : fallback;
}

int get_int(const json& obj, const std::string& key, const std::string& ptr) {
    const json& v = require_field(obj, key, ptr);
    if (!v.is_number_integer()) throw InputError(child(ptr, key), "expected an integer");
    return v.get<int>();
}

int get_int_or(const json& obj, const std::string& key, const std::string& ptr, int fallback) {
    return has_field(obj, key) ? get_int(obj, key, ptr) : fallback;
}

std::string get_string(const json& obj, const std::string& key, const std::string& ptr) {
    const json& v = require_field(obj, key, ptr);
    if (!v.is_string()) throw InputError(child(ptr, key), "expected a string");
    return v.get<std::string>();
}

std::string get_string_or(const json& obj, const std::string& key, const std::string& ptr,
                          const std::string& fallback) {
    return has_field(obj, key) ? get_string(obj, key, ptr) : fallback;
}

Rational get_rational(const json& obj, const std::string& key, const std::string& ptr) {
    const json& v = require_field(obj, key, ptr);
    const std::string where = child(ptr, key);
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long>());
        if (v.is_number()) {
            // Decimal literals are read as written: 1.5 means 3/2, not the nearest double.
            return parse_rational(format_number(as_number(v, where)));
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(where, e.what());
    }
    throw InputError(where, "expected a number or a rational string such as \"3/2\"");
}

double get_q(const json& obj, const std::string& key, const std::string& ptr, double fallback) {
    if (!has_field(obj, key)) return fallback;
    const json& v = obj.at(key);
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity" || s == "Infinity") return kInfinity;
        try {
            return to_double(parse_rational(s));
        } catch (const std::exception&) {
            throw InputError(child(ptr, key), "expected a number >= 1 or \"inf\"");
        }
    }
    double q = as_number(v, child(ptr, key));
    if (!(q >= 1.0)) throw InputError(child(ptr, key), "q must be >= 1");
    return q;
}

std::pair<int, int> parse_range(const std::string& text, const std::string& ptr) {
    try {
        auto dots = text.find("..");
        std::size_t used = 0;
        if (dots == std::string::npos) {
            int a = std::stoi(text, &used);
            if (used != text.size()) throw std::invalid_argument("trailing characters");
            return {a, a};
        }
        std::string lo = text.substr(0, dots), hi = text.substr(dots + 2);
        int a = std::stoi(lo, &used);
        if (used != lo.size()) throw std::invalid_argument("trailing characters");
        int b = std::stoi(hi, &used);
        if (used != hi.size()) throw std::invalid_argument("trailing characters");
        if (b < a) throw std::invalid_argument("empty range");
        return {a, b};
    } catch (const std::exception&) {
        throw InputError(ptr, "expected a range such as \"2..10\"");
    }
}

std::pair<int, int> get_range(const json& obj, const std::string& key, const std::string& ptr) {
    const json& v = require_field(obj, key, ptr);
    const std::string where = child(ptr, key);
    if (v.is_string()) return parse_range(v.get<std::string>(), where);
    if (v.is_number_integer()) return {v.get<int>(), v.get<int>()};
    if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
        if (v[1].get<int>() < v[0].get<int>()) throw InputError(where, "empty range");
        return {v[0].get<int>(), v[1].get<int>()};
    }
    throw InputError(where, "expected \"a..b\", an integer or [a, b]");
}

// ---------------------------------------------------------------------------

json to_json(const StepProfile& profile) {
    json out = json::array();
    for (const Step& s : profile.steps()) {
        out.push_back(json{{"value", static_cast<double>(s.value)}, {"mass", static_cast<double>(s.mass)}});
    }
    return out;
}

StepProfile profile_from_json(const json& j, const std::string& ptr) {
    if (!j.is_array()) throw InputError(ptr, "expected an array of {value, mass} steps");
    std::vector<Step> steps;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = child(ptr, i);
        double v = get_number(j[i], "value", where);
        double m = get_number(j[i], "mass", where);
        if (v < 0.0) throw InputError(child(where, "value"), "must be >= 0");
        if (!(m > 0.0)) throw InputError(child(where, "mass"), "must be > 0");
        if (i > 0 && !(v < steps.back().value)) throw InputError(child(where, "value"), "values must strictly decrease");
        steps.push_back({v, m});
    }
    return StepProfile(std::move(steps));
}

json to_json(const GridGeometry& g) {
    return json{{"dim", g.dim()}, {"shape", g.shape}, {"spacing", g.spacing}, {"origin", g.origin}};
}

json to_json(const GridFunction& g) {
    json out = to_json(g.geometry);
    out["samples"] = g.samples;
    return out;
}

GridFunction grid_from_json(const json& j, const std::string& ptr) {
    require_object(j, ptr);
    int dim = get_int(j, "dim", ptr);
    if (dim < 1) throw InputError(child(ptr, "dim"), "must be >= 1");
    const json& shape = require_field(j, "shape", ptr);
    if (!shape.is_array() || static_cast<int>(shape.size()) != dim) {
        throw InputError(child(ptr, "shape"), "expected an array of dim positive integers");
    }
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (!shape[i].is_number_integer() || shape[i].get<long>() < 1) {
            throw InputError(child(child(ptr, "shape"), i), "expected a positive integer");
        }
        s.push_back(shape[i].get<std::size_t>());
    }
    double h = get_number(j, "spacing", ptr);
    if (!(h > 0.0)) throw InputError(child(ptr, "spacing"), "must be > 0");
    std::vector<double> origin(static_cast<std::size_t>(dim), 0.0);
    if (has_field(j, "origin")) {
        const json& o = j.at("origin");
        if (!o.is_array() || static_cast<int>(o.size()) != dim) {
            throw InputError(child(ptr, "origin"), "expected an array of dim numbers");
        }
        for (std::size_t i = 0; i < o.size(); ++i) origin[i] = as_number(o[i], child(child(ptr, "origin"), i));
    }
    GridGeometry geo(s, h, origin);
    const json& samples = require_field(j, "samples", ptr);
    if (!samples.is_array()) throw InputError(child(ptr, "samples"), "expected an array of numbers");
    if (samples.size() != geo.cell_count()) {
        throw InputError(child(ptr, "samples"), "has " + std::to_string(samples.size()) + " entries; shape needs " +
                                                    std::to_string(geo.cell_count()));
    }
    std::vector<double> values(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) values[i] = as_number(samples[i], child(child(ptr, "samples"), i));
    return GridFunction(std::move(geo), std::move(values));
}

json to_json(const CantorParams& params) {
    return json{{"n", params.n()}, {"p", params.p().get_str()}, {"variant", std::string(to_string(params.variant()))},
                {"beta", rational_json(params.beta())}};
}

CantorParams cantor_params_from_json(const json& j, const std::string& ptr) {
    require_object(j, ptr);
    int n = get_int(j, "n", ptr);
    Rational p = get_rational(j, "p", ptr);
    Variant v = Variant::Uniform;
    if (has_field(j, "variant")) {
        try {
            v = parse_variant(get_string(j, "variant", ptr));
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            throw InputError(child(ptr, "variant"), e.what());
        }
    }
    if (n < 2) throw InputError(child(ptr, "n"), "must be >= 2");
    if (!(p > 1) || !(p < n)) throw InputError(child(ptr, "p"), "must satisfy 1 < p < n");
    try {
        return CantorParams(n, p, v);
    } catch (const std::exception& e) {
        throw InputError(ptr, e.what());
    }
}

json to_json(const PiecewiseDensity& phi) {
    json segs = json::array();
    for (const PowerSegment& s : phi.segments()) {
        json t_hi = std::isfinite(s.t_hi) ? json(static_cast<double>(s.t_hi)) : json(nullptr);
        segs.push_back(json{{"t_lo", static_cast<double>(s.t_lo)},
                            {"t_hi", t_hi},
                            {"c", static_cast<double>(s.c)},
                            {"alpha", static_cast<double>(s.alpha)},
                            {"offset", static_cast<double>(s.offset)}});
    }
    return json{{"segments", segs}};
}

PiecewiseDensity density_from_json(const json& j, const std::string& ptr, bool young) {
    const json& segs = require_field(j, "segments", ptr);
    const std::string base = child(ptr, "segments");
    if (!segs.is_array() || segs.empty()) throw InputError(base, "expected a nonempty array of segments");
    std::vector<PowerSegment> out;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const std::string where = child(base, i);
        require_object(segs[i], where);
        PowerSegment s;
        s.t_lo = get_number(segs[i], "t_lo", where);
        const json& hi = require_field(segs[i], "t_hi", where);
        s.t_hi = hi.is_null() ? kUnbounded : as_number(hi, child(where, "t_hi"));
        s.c = get_number(segs[i], "c", where);
        s.alpha = get_number(segs[i], "alpha", where);
        s.offset = get_number_or(segs[i], "offset", where, 1.0);
        out.push_back(s);
    }
    try {
        if (young) return YoungFunction(std::move(out));
        return PiecewiseDensity(std::move(out));
    } catch (const std::invalid_argument& e) {
        throw InputError(base, e.what());
    }
}

namespace {

Mask mask_from_json(const json& obj, const std::string& prefix, const std::string& ptr, const GridGeometry& geo,
                    const Budget& budget, bool required) {
    const std::string cells_key = prefix + "_cells", cube_key = prefix + "_cube", cantor_key = prefix + "_from_cantor";
    int given = has_field(obj, cells_key) + has_field(obj, cube_key) + has_field(obj, cantor_key);
    if (given == 0) {
        if (required) throw InputError(child(ptr, cells_key), "one of " + cells_key + ", " + cube_key + ", " + cantor_key + " is required");
        return {};
    }
    if (given > 1) throw InputError(ptr, "give only one of " + cells_key + ", " + cube_key + ", " + cantor_key);

    if (has_field(obj, cells_key)) {
        const json& cells = obj.at(cells_key);
        const std::string where = child(ptr, cells_key);
        if (!cells.is_array()) throw InputError(where, "expected an array of flat cell indices");
        Mask m(geo.cell_count(), 0);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (!cells[i].is_number_integer() || cells[i].get<long long>() < 0 ||
                cells[i].get<unsigned long long>() >= geo.cell_count()) {
                throw InputError(child(where, i), "expected a cell index in [0, " + std::to_string(geo.cell_count()) + ")");
            }
            m[cells[i].get<std::size_t>()] = 1;
        }
        return m;
    }
    if (has_field(obj, cube_key)) {
        const json& cube = obj.at(cube_key);
        const std::string where = child(ptr, cube_key);
        double half = get_number(cube, "half_side", where);
        if (!(half > 0.0)) throw InputError(child(where, "half_side"), "must be > 0");
        std::vector<double> center(geo.dim(), 0.0);
        if (has_field(cube, "center")) {
            const json& c = cube.at("center");
            if (!c.is_array() || c.size() != geo.dim()) throw InputError(child(where, "center"), "expected dim numbers");
            for (std::size_t a = 0; a < c.size(); ++a) center[a] = as_number(c[a], child(child(where, "center"), a));
        }
        std::string rule = get_string_or(cube, "rule", where, prefix == "target" ? "meeting" : "centers");
        if (rule == "meeting") return cube_mask_meeting(geo, center, half);
        if (rule == "centers") return cube_mask_centers(geo, center, half);
        throw InputError(child(where, "rule"), "expected \"meeting\" or \"centers\"");
    }
    const json& spec = obj.at(cantor_key);
    const std::string where = child(ptr, cantor_key);
    CantorParams params = cantor_params_from_json(require_field(spec, "params", where), child(where, "params"));
    int depth = get_int(spec, "depth", where);
    if (depth < 1) throw InputError(child(where, "depth"), "must be >= 1");
    if (static_cast<int>(geo.dim()) != params.n()) throw InputError(child(child(where, "params"), "n"), "does not match the lattice dimension");
    return cantor_target_mask(geo, params, depth, budget);
}

}  // namespace

CapacityProblem capacity_problem_from_json(const json& j, const std::string& ptr, const Budget& budget) {
    require_object(j, ptr);
    CapacityProblem pr;
    double p = get_number(j, "p", ptr);
    if (!(p > 1.0)) throw InputError(child(ptr, "p"), "must be > 1");
    double q = get_q(j, "q", ptr, 1.0);
    pr.exp = LorentzExponents(p, q);
    try {
        pr.variant = parse_capacity_variant(get_string_or(j, "variant", ptr, "variational"));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(child(ptr, "variant"), e.what());
    }
    int dim = 0;
    if (has_field(j, "dim")) {
        dim = get_int(j, "dim", ptr);
    } else if (has_field(j, "target_from_cantor")) {
        const std::string where = child(ptr, "target_from_cantor");
        dim = get_int(require_field(j.at("target_from_cantor"), "params", where), "n", child(where, "params"));
    } else {
        throw InputError(child(ptr, "dim"), "required field is missing");
    }
    if (dim < 1) throw InputError(child(ptr, "dim"), "must be >= 1");
    double box = get_number(j, "box", ptr);
    double h = get_number(j, "h", ptr);
    if (!(box > 0.0)) throw InputError(child(ptr, "box"), "half-side must be > 0");
    if (!(h > 0.0)) throw InputError(child(ptr, "h"), "must be > 0");
    try {
        pr.geometry = GridGeometry::centered_box(static_cast<std::size_t>(dim), box, h);
    } catch (const std::exception& e) {
        throw InputError(child(ptr, "h"), e.what());
    }
    budget.require(pr.geometry.cell_count(), "capacity lattice");
    pr.target = mask_from_json(j, "target", ptr, pr.geometry, budget, true);
    pr.domain = mask_from_json(j, "domain", ptr, pr.geometry, budget, is_relative(pr.variant));
    try {
        pr.validate();
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        std::string field = msg.substr(0, msg.find(':'));
        throw InputError(child(ptr, field == "domain" ? "domain_cells" : "target_cells"), msg);
    }
    return pr;
}

json location_json(const Location& loc) {
    json out{{"kind", std::string(to_string(loc.kind))}, {"generation", loc.generation}};
    out["word"] = loc.word ? json(loc.word->to_string()) : json(nullptr);
    return out;
}

// ---------------------------------------------------------------------------

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("", "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("", path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json_file(const std::filesystem::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::string to_csv(const CsvTable& table) {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
    return out.str();
}

void write_csv_file(const std::filesystem::path& path, const CsvTable& table) { write_text_file(path, to_csv(table)); }

CsvTable read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("", "cannot open " + path.string());
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

}  // namespace lorcap
