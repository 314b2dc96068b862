#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gente {

// Base for all project errors. The CLI maps validation failures to exit
// code 1 and I/O or network failures to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Structured validation error for spec parsing and compilation. `path`
// points at the offending element, e.g. "calls[3].args.step_height".
class SpecError : public Error {
public:
    enum class Kind { Parse, UnknownTool, Schema, Range, Capacity, EmptyResponse };

    SpecError(Kind kind, std::string path, const std::string& msg)
        : Error(path.empty() ? msg : path + ": " + msg),
          kind_(kind),
          path_(std::move(path)) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& path() const noexcept { return path_; }

private:
    Kind kind_;
    std::string path_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class NetworkError : public Error {
public:
    using Error::Error;
};

// Buoyancy plus added mass drove the effective mass to zero or below.
// Surfaced instead of clamping so callers can decide what to do.
class SaturationError : public Error {
public:
    using Error::Error;
};

}  // namespace gente
