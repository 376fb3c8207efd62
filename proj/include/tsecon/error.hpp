#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsecon {

enum class ErrorKind {
    insufficient_data,
    domain,
    alignment,
    degrees_of_freedom,
    singularity,
    invalid_restriction,
    parameter,
    degenerate_input,
    normalization,
    empty_result,
    schema,
    continuity,
    parse,
    validation,
    io,
};

inline std::string_view to_string(ErrorKind k) noexcept {
    switch (k) {
        case ErrorKind::insufficient_data: return "insufficient-data";
        case ErrorKind::domain: return "domain";
        case ErrorKind::alignment: return "alignment";
        case ErrorKind::degrees_of_freedom: return "degrees-of-freedom";
        case ErrorKind::singularity: return "singularity";
        case ErrorKind::invalid_restriction: return "invalid-restriction";
        case ErrorKind::parameter: return "parameter";
        case ErrorKind::degenerate_input: return "degenerate-input";
        case ErrorKind::normalization: return "normalization";
        case ErrorKind::empty_result: return "empty-result";
        case ErrorKind::schema: return "schema";
        case ErrorKind::continuity: return "continuity";
        case ErrorKind::parse: return "parse";
        case ErrorKind::validation: return "validation";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace tsecon
