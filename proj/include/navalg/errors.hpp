#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace navalg {

/// Input text (graph file, expression, body file) failed to parse.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t position)
        : std::runtime_error(std::move(message)), position_(position) {}

    /// Byte offset (expressions) or 1-based line number (files).
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Structurally well-formed input that violates a schema rule.
class SchemaError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expression rejected before evaluation: unknown label or operator
/// outside the configured profile.
class EvalError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A rewrite could not reach the requested target feature set.
class UnreachableTargetError : public std::runtime_error {
public:
    UnreachableTargetError(std::string message, std::string missing_feature)
        : std::runtime_error(std::move(message)),
          missing_feature_(std::move(missing_feature)) {}

    const std::string& missing_feature() const { return missing_feature_; }

private:
    std::string missing_feature_;
};

/// Precondition of a rewrite or engine operation does not hold.
class PreconditionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The brute-force closure exceeded its pair budget. Never a silent
/// verdict: callers must treat this as "unknown", not "indistinguishable".
class BudgetExceededError : public std::runtime_error {
public:
    BudgetExceededError(std::string message, std::uint64_t pairs_stored)
        : std::runtime_error(std::move(message)), pairs_stored_(pairs_stored) {}

    std::uint64_t pairs_stored() const { return pairs_stored_; }

private:
    std::uint64_t pairs_stored_;
};

/// A built-in fixture failed one of its published property checks.
class FixtureValidationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace navalg
