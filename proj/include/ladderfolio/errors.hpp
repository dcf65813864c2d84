#pragma once

#include <stdexcept>
#include <string>

namespace ladderfolio {

// Malformed or inconsistent input data (files, histories, CPI series).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A (security, date) or month that the caller asked for is not present.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// A numeric argument outside the function's domain (e.g. nonpositive cap).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Bad command-line usage or invalid configuration value.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace ladderfolio
