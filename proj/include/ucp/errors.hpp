#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ucp {

/// One rule violation: which object, which field, and what is wrong with it.
struct Issue {
    std::string subject;
    std::string field;
    std::string reason;

    std::string to_string() const {
        std::string out = subject;
        if (!field.empty()) out += ": " + field;
        out += ": " + reason;
        return out;
    }
};

inline std::string join_issues(const std::vector<Issue>& issues) {
    std::string out;
    for (const auto& i : issues) {
        if (!out.empty()) out += "\n";
        out += i.to_string();
    }
    return out;
}

/// Input that violates a domain invariant. Carries every violation found.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Issue> issues)
        : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}
    ValidationError(std::string subject, std::string field, std::string reason)
        : ValidationError(std::vector<Issue>{{std::move(subject), std::move(field), std::move(reason)}}) {}

    const std::vector<Issue>& issues() const noexcept { return issues_; }

private:
    std::vector<Issue> issues_;
};

/// Malformed file content. Line and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite value or failed numerical procedure.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Schneider's count reached the at-risk band; no effort rate is assigned.
class TeamRiskError : public std::runtime_error {
public:
    explicit TeamRiskError(int risk_count)
        : std::runtime_error("team restructure recommended (Schneider count " + std::to_string(risk_count) + " >= 5)"),
          risk_count_(risk_count) {}

    int risk_count() const noexcept { return risk_count_; }

private:
    int risk_count_;
};

}  // namespace ucp
