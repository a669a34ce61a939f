#pragma once

// JSON and CSV serialization, input validation with JSON-pointer error paths,
// and number rendering shared by the CLI and the experiment runner.

#include "lorcap/cantor.hpp"
#include "lorcap/capacity.hpp"
#include "lorcap/orlicz.hpp"
#include "lorcap/rearrange.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lorcap {

using json = nlohmann::ordered_json;

/// Malformed input; pointer is the JSON pointer of the offending value.
class InputError : public std::invalid_argument {
public:
    InputError(std::string pointer, const std::string& message);
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

/// Shortest round-trip decimal; integral values keep a trailing ".0".
/// Values outside the double range fall back to 21 significant digits.
std::string format_number(long double x);
std::string format_number(double x);

json rational_json(const Rational& r);

// Field access. `ptr` is the pointer of `obj`.
const json& require_field(const json& obj, const std::string& key, const std::string& ptr);
bool has_field(const json& obj, const std::string& key);
void require_object(const json& obj, const std::string& ptr);
double get_number(const json& obj, const std::string& key, const std::string& ptr);
double get_number_or(const json& obj, const std::string& key, const std::string& ptr, double fallback);
int get_int(const json& obj, const std::string& key, const std::string& ptr);
int get_int_or(const json& obj, const std::string& key, const std::string& ptr, int fallback);
std::string get_string(const json& obj, const std::string& key, const std::string& ptr);
std::string get_string_or(const json& obj, const std::string& key, const std::string& ptr, const std::string& fallback);
/// Number or string ("3/2", "1.25").
Rational get_rational(const json& obj, const std::string& key, const std::string& ptr);
/// Number >= 1, or one of "inf", "infinity".
double get_q(const json& obj, const std::string& key, const std::string& ptr, double fallback = 1.0);
/// "a..b", "a" or [a, b].
std::pair<int, int> get_range(const json& obj, const std::string& key, const std::string& ptr);
std::pair<int, int> parse_range(const std::string& text, const std::string& ptr);

json to_json(const StepProfile& profile);
StepProfile profile_from_json(const json& j, const std::string& ptr = "");

json to_json(const GridGeometry& g);
json to_json(const GridFunction& g);
GridFunction grid_from_json(const json& j, const std::string& ptr = "");

json to_json(const CantorParams& params);
CantorParams cantor_params_from_json(const json& j, const std::string& ptr = "");

json to_json(const PiecewiseDensity& phi);
/// Builds a YoungFunction, or a bare density when `young` is false.
PiecewiseDensity density_from_json(const json& j, const std::string& ptr = "", bool young = true);

/// Problem JSON: {p, q, variant, box, h, target_cells | target_cube | target_from_cantor, domain_cells | domain_cube}.
CapacityProblem capacity_problem_from_json(const json& j, const std::string& ptr = "",
                                           const Budget& budget = Budget::from_env());

json location_json(const Location& loc);

json read_json_file(const std::filesystem::path& path);
/// Pretty-printed, trailing newline.
void write_json_file(const std::filesystem::path& path, const json& j);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const CsvTable& table);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace lorcap
