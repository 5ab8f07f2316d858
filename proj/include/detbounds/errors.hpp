#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace detbounds {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ZeroPolynomial : public Error {
public:
    ZeroPolynomial() : Error("polynomial is identically zero") {}
};

class NonConvergent : public Error {
public:
    using Error::Error;
};

class NotNonnegative : public Error {
public:
    using Error::Error;
};

class OrderTooLarge : public Error {
public:
    OrderTooLarge(std::size_t n, std::size_t limit)
        : Error("order " + std::to_string(n) + " exceeds the limit " + std::to_string(limit)) {}
};

class NotDiagonallyDominant : public Error {
public:
    using Error::Error;
};

/// A stated precondition of a bound or check does not hold for the input.
class HypothesisViolated : public Error {
public:
    using Error::Error;
};

class InvalidOrder : public Error {
public:
    using Error::Error;
};

class Unconstructible : public Error {
public:
    using Error::Error;
};

class NotPolynomial : public Error {
public:
    using Error::Error;
};

/// The search ran past its deadline; whatever it had collected is unusable.
class Timeout : public Error {
public:
    Timeout(std::uint64_t scanned, std::uint64_t total)
        : Error("search timed out after " + std::to_string(scanned) + " of " + std::to_string(total) + " patterns"),
          scanned(scanned),
          total(total) {}
    std::uint64_t scanned;
    std::uint64_t total;
};

}  // namespace detbounds
