#ifndef THICKSUM_ERRORS_HPP
#define THICKSUM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thicksum {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was handed an empty point set where a nonempty one is required.
class EmptySetError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the domain of a function (e.g. a negative abscissa).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A precondition of an operation does not hold, so it refuses to run.
class RefusedError : public Error {
public:
    using Error::Error;
};

/// Malformed textual or JSON input.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace thicksum

#endif
