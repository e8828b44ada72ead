#include "report.hpp"

#include "laxlab/ensembles.hpp"
#include "laxlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace laxlab::cli {

namespace {

std::string number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool flat(const nlohmann::json& j) {
    return std::none_of(j.begin(), j.end(), [](const nlohmann::json& e) { return e.is_structured(); });
}

void write(std::string& out, const nlohmann::json& j, int indent) {
    const std::string pad(2 * (indent + 1), ' '), close(2 * indent, ' ');
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + nlohmann::json(it.key()).dump() + ": ";
            write(out, it.value(), indent + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (flat(j)) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                write(out, j[i], indent + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            write(out, j[i], indent + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case nlohmann::json::value_t::number_float:
        out += number(j.get<double>());
        return;
    default:
        out += j.dump();
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw Error(ErrorKind::usage, "bad number '" + s + "'");
    }
    if (used != s.size()) throw Error(ErrorKind::usage, "bad number '" + s + "'");
    return v;
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        int diag = row[0];
        row[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

} // namespace

nlohmann::json RunReport::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["columns"] = columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) j["rows"].push_back(r);
    j["summary"] = summary;
    j["max_abs_residual"] = max_abs_residual;
    j["self_reported_error"] = self_reported_error;
    j["seed"] = seed;
    j["wall_time"] = wall_time ? nlohmann::json(*wall_time) : nlohmann::json();
    if (tolerance) j["check"] = {{"tolerance", *tolerance}, {"passed", passed}};
    return j;
}

std::string canonical_json(const nlohmann::json& j) {
    std::string out;
    write(out, j, 0);
    out += "\n";
    return out;
}

std::string emit_json(const RunReport& r) { return canonical_json(r.to_json()); }

std::string emit_csv(const RunReport& r) {
    std::string out;
    for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? "," : "") + r.columns[i];
    out += "\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + number(row[i]);
        out += "\n";
    }
    return out;
}

std::vector<double> parse_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw Error(ErrorKind::usage, "grid '" + text + "' is not start:stop:step");
    const double a = to_double(parts[0]), b = to_double(parts[1]), h = to_double(parts[2]);
    if (!(h > 0) || b < a) throw Error(ErrorKind::usage, "grid '" + text + "' needs step > 0 and stop >= start");
    const long count = static_cast<long>(std::floor((b - a) / h + 1e-9)) + 1;
    if (count > 1000000) throw Error(ErrorKind::usage, "grid '" + text + "' is too long");
    std::vector<double> g;
    for (long i = 0; i < count; ++i) g.push_back(a + static_cast<double>(i) * h);
    return g;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& s : split(text, ','))
        if (!s.empty()) out.push_back(to_double(s));
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_list(text)) {
        if (v != std::round(v)) throw Error(ErrorKind::usage, "expected integers in '" + text + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(splitmix64(seed ^ splitmix64(index + 0x51ed27ULL)) >> 11) * 0x1p-53;
}

std::vector<std::string> suggest(const std::string& given, const std::vector<std::string>& known) {
    std::vector<std::pair<int, std::string>> scored;
    for (const auto& k : known) {
        const int d = edit_distance(given, k);
        if (d <= 2) scored.push_back({d, k});
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::string> out;
    for (const auto& [d, k] : scored) out.push_back(k);
    return out;
}

} // namespace laxlab::cli
