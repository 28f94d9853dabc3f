#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lyphc {

/// Raised when an identifier string is malformed. `position` is the byte
/// offset of the first offending character.
class IdentifierError : public std::runtime_error {
public:
    IdentifierError(const std::string& what, std::size_t position)
        : std::runtime_error(what), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A possibly namespace-qualified resource identifier, rendered as
/// "prefix:local" or plain "local".
class Identifier {
public:
    Identifier() = default;
    Identifier(std::string prefix, std::string local);

    /// Parses "local" or "prefix:local". Throws IdentifierError.
    static Identifier parse(std::string_view text);

    /// True when `text` parses as an identifier.
    static bool valid(std::string_view text) noexcept;

    /// True when `name` is a legal namespace name ([A-Za-z0-9_-]+).
    static bool valid_namespace(std::string_view name) noexcept;

    const std::string& prefix() const noexcept { return prefix_; }
    const std::string& local() const noexcept { return local_; }
    bool has_prefix() const noexcept { return !prefix_.empty(); }

    std::string str() const;

    /// Qualified key "ns:local", resolving an absent prefix to `home`.
    std::string qualified(std::string_view home) const;

    friend bool operator==(const Identifier&, const Identifier&) = default;
    friend auto operator<=>(const Identifier&, const Identifier&) = default;

private:
    std::string prefix_;
    std::string local_;
};

/// True when `text` looks like a CURIE "source:identifier".
bool is_curie(std::string_view text) noexcept;

}  // namespace lyphc
