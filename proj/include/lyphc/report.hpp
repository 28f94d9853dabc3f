#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lyphc {

enum class Severity { None = 0, Warning = 1, Error = 2 };

/// One validation finding. `location` is "file#/json/pointer" (file may be
/// empty for in-memory documents).
struct Issue {
    Severity severity = Severity::Warning;
    std::string code;
    std::string message;
    std::optional<std::string> resource;
    std::string location;

    friend bool operator==(const Issue&, const Issue&) = default;
};

class ValidationReport {
public:
    void add(Issue issue) { issues_.push_back(std::move(issue)); }
    void warn(std::string code, std::string message, std::optional<std::string> resource = {},
              std::string location = {});
    void error(std::string code, std::string message, std::optional<std::string> resource = {},
               std::string location = {});
    void merge(const ValidationReport& other);

    const std::vector<Issue>& issues() const noexcept { return issues_; }
    bool empty() const noexcept { return issues_.empty(); }
    Severity max_severity() const noexcept;
    bool has_errors() const noexcept { return max_severity() == Severity::Error; }
    std::size_t count(Severity s) const noexcept;
    std::size_t count(std::string_view code) const noexcept;

    /// One issue per line, errors first, then by code/resource/location/message.
    /// An empty report renders as "OK".
    std::string render() const;

private:
    std::vector<Issue> issues_;
};

/// Process exit code for a severity: 0 clean, 1 warnings, 2 errors.
int exit_code(Severity s) noexcept;

}  // namespace lyphc
