#pragma once

#include <stdexcept>
#include <string>

namespace sprank {

/// Machine-readable error codes surfaced by the CLI as `error = <name>`.
enum class Errc {
    NON_PRIME,
    REDUCIBLE_MODULUS,
    UNSUPPORTED,
    DIV_BY_ZERO,
    FIELD_MISMATCH,
    NOT_AN_EXTENSION,
    VAR_MISMATCH,
    BAD_INDEX,
    BAD_SUBSET,
    SHAPE_MISMATCH,
    NOT_CUBICAL,
    INFINITE_FIELD,
    NOT_A_DECOMPOSITION,
    UNSOLVABLE,
    CAP_EXCEEDED,
    VERIFICATION_FAILED,
    NBOUND_UNMET,
    CHAR_TWO_UNSUPPORTED,
    NOT_QUADRATIC,
    IE_MISMATCH,
    PARSE_ERROR,
    IO_ERROR,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NON_PRIME: return "NON_PRIME";
        case Errc::REDUCIBLE_MODULUS: return "REDUCIBLE_MODULUS";
        case Errc::UNSUPPORTED: return "UNSUPPORTED";
        case Errc::DIV_BY_ZERO: return "DIV_BY_ZERO";
        case Errc::FIELD_MISMATCH: return "FIELD_MISMATCH";
        case Errc::NOT_AN_EXTENSION: return "NOT_AN_EXTENSION";
        case Errc::VAR_MISMATCH: return "VAR_MISMATCH";
        case Errc::BAD_INDEX: return "BAD_INDEX";
        case Errc::BAD_SUBSET: return "BAD_SUBSET";
        case Errc::SHAPE_MISMATCH: return "SHAPE_MISMATCH";
        case Errc::NOT_CUBICAL: return "NOT_CUBICAL";
        case Errc::INFINITE_FIELD: return "INFINITE_FIELD";
        case Errc::NOT_A_DECOMPOSITION: return "NOT_A_DECOMPOSITION";
        case Errc::UNSOLVABLE: return "UNSOLVABLE";
        case Errc::CAP_EXCEEDED: return "CAP_EXCEEDED";
        case Errc::VERIFICATION_FAILED: return "VERIFICATION_FAILED";
        case Errc::NBOUND_UNMET: return "NBOUND_UNMET";
        case Errc::CHAR_TWO_UNSUPPORTED: return "CHAR_TWO_UNSUPPORTED";
        case Errc::NOT_QUADRATIC: return "NOT_QUADRATIC";
        case Errc::IE_MISMATCH: return "IE_MISMATCH";
        case Errc::PARSE_ERROR: return "PARSE_ERROR";
        case Errc::IO_ERROR: return "IO_ERROR";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }
    const char* name() const { return errc_name(code_); }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace sprank
