#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corrsim {

// Exact ties make concomitant ranks ill-defined, so they are reported as
// errors instead of being absorbed by a tie correction.
class TieError : public std::runtime_error {
public:
    TieError(const std::string& what, std::size_t first, std::size_t second)
        : std::runtime_error(what), first_(first), second_(second) {}

    // Indices of the two colliding observations.
    std::size_t first_index() const noexcept { return first_; }
    std::size_t second_index() const noexcept { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

// A coordinate with exactly zero sample variance.
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid family/parameter combination or malformed configuration.
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Grid refinement exhausted without meeting the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable or unparseable input file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace corrsim
