#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace noveltree {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An action was applied in a state that does not satisfy its preconditions.
class PreconditionViolation : public Error {
public:
    using Error::Error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string &what, std::size_t line, std::size_t col)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
          line_(line), col_(col) {}
    std::size_t line() const { return line_; }
    std::size_t col() const { return col_; }

private:
    std::size_t line_;
    std::size_t col_;
};

class ArityError : public Error {
public:
    using Error::Error;
};

class UnsupportedFeature : public Error {
public:
    explicit UnsupportedFeature(std::string feature)
        : Error("unsupported PDDL feature: " + feature), feature_(std::move(feature)) {}
    const std::string &feature() const { return feature_; }

private:
    std::string feature_;
};

class TypeMismatch : public Error {
public:
    using Error::Error;
};

class MissingTemplate : public Error {
public:
    using Error::Error;
};

class NoMatch : public Error {
public:
    using Error::Error;
};

class AmbiguousMatch : public Error {
public:
    using Error::Error;
};

class GeneratorExhausted : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class EmptyFeatureSet : public Error {
public:
    EmptyFeatureSet() : Error("a state must have at least one feature") {}
};

class MissingSlot : public Error {
public:
    using Error::Error;
};

// Transport-level failure after all retries were spent.
class OracleUnavailable : public Error {
public:
    using Error::Error;
};

class AuthError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace noveltree
