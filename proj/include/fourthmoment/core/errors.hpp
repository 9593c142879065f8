#pragma once

#include <stdexcept>
#include <string>

namespace fourthmoment {

/// Broad failure classes; the CLI maps each one to an exit status.
enum class ErrorKind {
    usage,      ///< bad arguments or parameters outside an operation's domain
    input,      ///< coverage gaps, unreadable or malformed files
    numerical,  ///< error budgets or conditioning limits that cannot be met
};

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

class DomainError : public Error {
   public:
    explicit DomainError(const std::string& msg) : Error(ErrorKind::usage, msg) {}
};

class CoverageError : public Error {
   public:
    explicit CoverageError(const std::string& msg) : Error(ErrorKind::input, msg) {}
};

class ParseError : public Error {
   public:
    ParseError(const std::string& msg, std::size_t line)
        : Error(ErrorKind::input, "line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

   private:
    std::size_t line_;
};

class BudgetError : public Error {
   public:
    explicit BudgetError(const std::string& msg) : Error(ErrorKind::numerical, msg) {}
};

class ConditioningError : public Error {
   public:
    ConditioningError(const std::string& msg, double condition)
        : Error(ErrorKind::numerical, msg), condition_(condition) {}
    double condition() const noexcept { return condition_; }

   private:
    double condition_;
};

}  // namespace fourthmoment
