#pragma once

#include <stdexcept>
#include <string>

namespace ajscc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration value violates its documented invariants.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// The modulated tone frequency falls outside (0, bandwidth).
class ModulationRangeError : public Error {
public:
    using Error::Error;
};

/// Shapes or sizes of cooperating arguments disagree.
class ContractError : public Error {
public:
    using Error::Error;
};

namespace detail {

template <class E>
inline void require(bool ok, const std::string& what) {
    if (!ok) throw E(what);
}

}  // namespace detail
}  // namespace ajscc
