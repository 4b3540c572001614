#pragma once

#include <stdexcept>
#include <string>

namespace vkl {

enum class errc {
    invalid_basis,
    resolution_too_large,
    out_of_range,
    undefined_mean,
    invalid_exponent,
    incompatible_operands,
    oracle_cutoff_exceeded,
    insufficient_resolution,
    invalid_atom,
    invalid_config,
    identity_violation,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::invalid_basis: return "invalid-basis";
        case errc::resolution_too_large: return "resolution-too-large";
        case errc::out_of_range: return "out-of-range";
        case errc::undefined_mean: return "undefined-mean";
        case errc::invalid_exponent: return "invalid-exponent";
        case errc::incompatible_operands: return "incompatible-operands";
        case errc::oracle_cutoff_exceeded: return "oracle-cutoff-exceeded";
        case errc::insufficient_resolution: return "insufficient-resolution";
        case errc::invalid_atom: return "invalid-atom";
        case errc::invalid_config: return "invalid-config";
        case errc::identity_violation: return "identity-violation";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace vkl
