#pragma once

#include <stdexcept>
#include <string>

namespace mdlgraph {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct CycleError : Error { using Error::Error; };
struct SizeError : Error { using Error::Error; };
struct SpanError : Error { using Error::Error; };
struct InfeasibleSelectionError : Error { using Error::Error; };
struct TimeoutError : Error { using Error::Error; };
struct NetworkError : Error { using Error::Error; };
struct AuthError : Error { using Error::Error; };

} // namespace mdlgraph
