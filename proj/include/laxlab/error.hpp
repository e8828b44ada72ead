#pragma once

#include <stdexcept>
#include <string>

namespace laxlab {

enum class ErrorKind {
    dimension,
    symmetry,
    not_positive_definite,
    degenerate_flag,
    singular,
    unsupported_domain,
    empty_domain,
    divergence,
    depth,
    singular_tau,
    stability,
    domain,
    precision,
    unsupported,
    underflow,
    degeneracy,
    usage
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace laxlab
