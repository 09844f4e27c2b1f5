#pragma once

#include <stdexcept>
#include <string>

namespace lpcorr {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on user input was violated (non-prime, duplicate shift,
// overflow of the integer width, malformed literal, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// A configured hard cap was hit: prime budget, polynomial degree cap,
// recursion depth cap.
class ResourceLimit : public Error {
public:
    explicit ResourceLimit(const std::string& what) : Error(what) {}
};

} // namespace lpcorr
