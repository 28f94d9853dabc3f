#include "lyphc/identifier.hpp"

#include <cctype>

namespace lyphc {

namespace {

bool namespace_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

bool blank(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

Identifier::Identifier(std::string prefix, std::string local)
    : prefix_(std::move(prefix)), local_(std::move(local)) {
    if (local_.empty()) throw IdentifierError("empty local identifier", 0);
    for (std::size_t i = 0; i < local_.size(); ++i) {
        if (blank(local_[i]) || local_[i] == ':')
            throw IdentifierError("illegal character in identifier '" + local_ + "'", i);
    }
    if (!prefix_.empty() && !valid_namespace(prefix_))
        throw IdentifierError("illegal namespace '" + prefix_ + "'", 0);
}

Identifier Identifier::parse(std::string_view text) {
    if (text.empty()) throw IdentifierError("empty identifier", 0);
    std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) {
        for (std::size_t i = 0; i < text.size(); ++i)
            if (blank(text[i])) throw IdentifierError("whitespace in identifier", i);
        return Identifier({}, std::string(text));
    }
    if (colon == 0) throw IdentifierError("empty namespace before ':'", 0);
    for (std::size_t i = 0; i < colon; ++i)
        if (!namespace_char(text[i])) throw IdentifierError("illegal namespace character", i);
    if (colon + 1 == text.size()) throw IdentifierError("empty local part after ':'", colon + 1);
    for (std::size_t i = colon + 1; i < text.size(); ++i) {
        if (text[i] == ':') throw IdentifierError("more than one ':' separator", i);
        if (blank(text[i])) throw IdentifierError("whitespace in identifier", i);
    }
    return Identifier(std::string(text.substr(0, colon)), std::string(text.substr(colon + 1)));
}

bool Identifier::valid(std::string_view text) noexcept {
    try {
        parse(text);
        return true;
    } catch (const IdentifierError&) {
        return false;
    }
}

bool Identifier::valid_namespace(std::string_view name) noexcept {
    if (name.empty()) return false;
    for (char c : name)
        if (!namespace_char(c)) return false;
    return true;
}

std::string Identifier::str() const {
    return prefix_.empty() ? local_ : prefix_ + ":" + local_;
}

std::string Identifier::qualified(std::string_view home) const {
    std::string out(prefix_.empty() ? home : std::string_view(prefix_));
    out += ':';
    out += local_;
    return out;
}

bool is_curie(std::string_view text) noexcept {
    std::size_t colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) return false;
    for (std::size_t i = 0; i < colon; ++i) {
        char c = text[i];
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
            return false;
    }
    for (std::size_t i = colon + 1; i < text.size(); ++i)
        if (blank(text[i])) return false;
    return true;
}

}  // namespace lyphc
