#pragma once

#include "laxlab/error.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace laxlab::text {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

inline double number(const std::string& s) {
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

} // namespace laxlab::text
