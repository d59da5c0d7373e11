#pragma once

#include <stdexcept>
#include <string>

namespace toricstab {

/// Malformed or inconsistent input: bad fan, bad filtration, bad polarization.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The filtrations admit no compatible splitting on some maximal cone.
class IncompatibleBundle : public std::runtime_error {
public:
    IncompatibleBundle(std::size_t cone, const std::string& reason)
        : std::runtime_error("incompatible filtrations on cone " + std::to_string(cone) + ": " + reason),
          cone_(cone) {}
    std::size_t cone() const noexcept { return cone_; }

private:
    std::size_t cone_;
};

/// A post-hoc consistency check on a computed object failed.
class VerificationFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace toricstab
