#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lyphc/model.hpp"
#include "lyphc/report.hpp"

namespace lyphc {

enum class CachePolicy { AlwaysFetch, CacheOk };

struct ImportSource {
    std::string url;  // absolute URL or filesystem path
    std::string ns;   // expected namespace, may be empty
    CachePolicy cache = CachePolicy::CacheOk;
};

struct FetchResult {
    bool ok = false;
    std::string body;
    std::string error;
};

using Fetcher = std::function<FetchResult(const ImportSource&)>;

struct ComposeResult {
    Model model;
    ValidationReport report;
};

/// Mixes `other` into `base`'s namespace. Colliding ids produce one WARNING
/// each; both definitions are kept and the first one wins on lookup.
ComposeResult merge(const Model& base, const Model& other);

/// Adds `other` under its own namespace and wraps its nodes, links, lyphs and
/// groups in a new group named after that namespace.
ComposeResult join(const Model& base, const Model& other);

struct LinkResult {
    Model model;                      // base plus imported resources (imported=true)
    std::vector<std::string> order;   // fetched URLs, sorted
    std::set<std::string> linked;     // namespaces brought in by imports
    ValidationReport report;
};

/// Fetches imports transitively and adds their resources to the model.
/// Relative import locations resolve against the importing document's
/// location (`base_url` for the spec itself).
LinkResult resolve_imports(const Model& spec, const Fetcher& fetcher, const std::string& base_url = {},
                           CachePolicy policy = CachePolicy::CacheOk);

/// Resolves `ref` against the location of the document that mentions it.
std::string resolve_location(const std::string& base, const std::string& ref);

struct FetcherOptions {
    std::optional<std::filesystem::path> cache_dir;  // HTTP responses only
};

/// Reads local files and fetches http(s) URLs (redirects followed). With a
/// cache directory, responses are stored by content hash and revalidated by
/// ETag unless the source asks for ALWAYS_FETCH.
Fetcher default_fetcher(const FetcherOptions& options = {});

/// Cache directory from the LYPHC_IMPORT_CACHE environment variable.
std::optional<std::filesystem::path> cache_dir_from_env();

}  // namespace lyphc
