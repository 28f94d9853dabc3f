#include "lyphc/report.hpp"

#include <algorithm>
#include <tuple>

namespace lyphc {

void ValidationReport::warn(std::string code, std::string message,
                            std::optional<std::string> resource, std::string location) {
    issues_.push_back({Severity::Warning, std::move(code), std::move(message), std::move(resource),
                       std::move(location)});
}

void ValidationReport::error(std::string code, std::string message,
                             std::optional<std::string> resource, std::string location) {
    issues_.push_back({Severity::Error, std::move(code), std::move(message), std::move(resource),
                       std::move(location)});
}

void ValidationReport::merge(const ValidationReport& other) {
    issues_.insert(issues_.end(), other.issues_.begin(), other.issues_.end());
}

Severity ValidationReport::max_severity() const noexcept {
    Severity out = Severity::None;
    for (const auto& i : issues_) out = std::max(out, i.severity);
    return out;
}

std::size_t ValidationReport::count(Severity s) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(issues_.begin(), issues_.end(), [s](const Issue& i) { return i.severity == s; }));
}

std::size_t ValidationReport::count(std::string_view code) const noexcept {
    return static_cast<std::size_t>(std::count_if(
        issues_.begin(), issues_.end(), [code](const Issue& i) { return i.code == code; }));
}

std::string ValidationReport::render() const {
    if (issues_.empty()) return "OK\n";
    std::vector<const Issue*> sorted;
    sorted.reserve(issues_.size());
    for (const auto& i : issues_) sorted.push_back(&i);
    std::stable_sort(sorted.begin(), sorted.end(), [](const Issue* a, const Issue* b) {
        auto key = [](const Issue* i) {
            return std::tie(i->code, i->resource, i->location, i->message);
        };
        if (a->severity != b->severity) return a->severity > b->severity;
        return key(a) < key(b);
    });
    std::string out;
    for (const Issue* i : sorted) {
        out += i->severity == Severity::Error ? "E " : "W ";
        out += i->code;
        out += ' ';
        out += i->resource.value_or("-");
        out += ' ';
        out += i->location.empty() ? "-" : i->location;
        out += ' ';
        for (char c : i->message) out += (c == '\n' ? ' ' : c);
        out += '\n';
    }
    return out;
}

int exit_code(Severity s) noexcept {
    return static_cast<int>(s);
}

}  // namespace lyphc
