#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace laxlab::cli {

struct RunReport {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json summary = nlohmann::json::object();
    double max_abs_residual = 0;
    double self_reported_error = 0;
    std::uint64_t seed = 0;
    std::optional<double> wall_time;  // only with --timing, keeps reports reproducible otherwise
    std::optional<double> tolerance;  // set in --check mode
    bool passed = true;

    nlohmann::json to_json() const;
};

// sorted keys, floats as %.17g, non-finite as null, two-space indent
std::string canonical_json(const nlohmann::json& j);
std::string emit_json(const RunReport& r);
// header line with the column names, then one line per row
std::string emit_csv(const RunReport& r);

// "start:stop:step", stop included when it lands on the grid
std::vector<double> parse_grid(const std::string& text);
// "1,2,3"
std::vector<double> parse_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

// uniform doubles in [0, 1) from (seed, index), independent of the platform's <random>
double counter_uniform(std::uint64_t seed, std::uint64_t index);

// names within edit distance 2 of a mistyped flag, closest first
std::vector<std::string> suggest(const std::string& given, const std::vector<std::string>& known);

} // namespace laxlab::cli
