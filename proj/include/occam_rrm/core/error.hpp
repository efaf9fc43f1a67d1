#pragma once

#include <stdexcept>
#include <string>

namespace occam_rrm {

/// Violated operation precondition (bad argument, bad config value).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Action rejected by an environment.
class InvalidAction : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The environment has no finite, enumerable MDP.
class NotTractable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linear-algebra failure (singular or indefinite systems).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration document error; `path()` is a JSON pointer to the
/// offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw PreconditionError(msg);
}

} // namespace occam_rrm
