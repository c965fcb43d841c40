#ifndef BWTORDER_ERRORS_HPP
#define BWTORDER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bwtorder {

/// Base class of every error thrown by the library. The CLI maps these to
/// exit code 3 (domain error); parse errors map to 2.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A text symbol is not part of the alphabet the ordering was built for.
class alphabet_mismatch : public error {
public:
    using error::error;
};

/// Structurally invalid input (duplicate sentinel, empty collection, ...).
class invalid_input : public error {
public:
    using error::error;
};

/// The string handed to the inverse transform is not the BWT of any text.
class malformed_bwt : public error {
public:
    using error::error;
};

/// An exhaustive search was asked to enumerate more than it is allowed to.
class limit_exceeded : public error {
public:
    using error::error;
};

class precondition_error : public error {
public:
    using error::error;
};

/// The graph is outside the class the algorithm supports (e.g. not a forest).
class unsupported_shape : public error {
public:
    using error::error;
};

/// User-facing syntax error (ordering specs, input files). Carries a line
/// number when it comes from a file.
class parse_error : public error {
public:
    explicit parse_error(const std::string& what, std::size_t line = 0)
        : error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Broken internal invariant. Seeing one of these is a bug.
class internal_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace bwtorder

#endif
