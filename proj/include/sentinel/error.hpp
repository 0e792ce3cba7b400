#pragma once

#include <stdexcept>
#include <string>

namespace sentinel {

/// Base of every error the library raises. `kind()` names the category
/// (e.g. "parse", "argument") so callers can map errors to exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define SENTINEL_DEFINE_ERROR(Name, tag)                                   \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& message) : Error(tag, message) {} \
    }

SENTINEL_DEFINE_ERROR(ParseError, "parse");
SENTINEL_DEFINE_ERROR(StructuralError, "structural");
SENTINEL_DEFINE_ERROR(SchemaError, "schema");
SENTINEL_DEFINE_ERROR(ArgumentError, "argument");
SENTINEL_DEFINE_ERROR(ImputationError, "imputation");
SENTINEL_DEFINE_ERROR(EncodingError, "encoding");
SENTINEL_DEFINE_ERROR(FitError, "fit");
SENTINEL_DEFINE_ERROR(DivergenceError, "divergence");
SENTINEL_DEFINE_ERROR(UnsupportedOperation, "unsupported");
SENTINEL_DEFINE_ERROR(BootstrapError, "bootstrap");
SENTINEL_DEFINE_ERROR(ConfigError, "config");
SENTINEL_DEFINE_ERROR(IoError, "io");
SENTINEL_DEFINE_ERROR(VersionError, "version");
SENTINEL_DEFINE_ERROR(UsageError, "usage");

#undef SENTINEL_DEFINE_ERROR

}  // namespace sentinel
