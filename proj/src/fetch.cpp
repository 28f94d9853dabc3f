#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "httplib.h"

#include "lyphc/composer.hpp"

namespace lyphc {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p, bool& ok) {
    std::ifstream in(p, std::ios::binary);
    ok = static_cast<bool>(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// index.json: url -> {etag, blob}
class Cache {
public:
    explicit Cache(fs::path dir) : dir_(std::move(dir)) {
        bool ok = false;
        std::string text = read_file(dir_ / "index.json", ok);
        if (ok) index_ = json::parse(text, nullptr, false);
        if (!index_.is_object()) index_ = json::object();
    }

    std::optional<std::pair<std::string, std::string>> lookup(const std::string& url) const {
        auto it = index_.find(url);
        if (it == index_.end() || !it->is_object()) return std::nullopt;
        bool ok = false;
        std::string body = read_file(dir_ / "blobs" / it->value("blob", std::string()), ok);
        if (!ok) return std::nullopt;
        return std::make_pair(it->value("etag", std::string()), body);
    }

    void store(const std::string& url, const std::string& etag, const std::string& body) {
        std::error_code ec;
        fs::create_directories(dir_ / "blobs", ec);
        std::string blob = fnv1a(body);
        std::ofstream(dir_ / "blobs" / blob, std::ios::binary) << body;
        index_[url] = {{"etag", etag}, {"blob", blob}};
        std::ofstream(dir_ / "index.json", std::ios::binary) << index_.dump(2) << "\n";
    }

private:
    fs::path dir_;
    json index_;
};

bool is_http(const std::string& url) {
    return url.rfind("http://", 0) == 0 || url.rfind("https://", 0) == 0;
}

std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    auto path_start = url.find('/', scheme_end + 3);
    return {url.substr(0, path_start), path_start == std::string::npos ? "/" : url.substr(path_start)};
}

FetchResult http_get(const std::string& url, const std::optional<fs::path>& cache_dir, CachePolicy policy) {
    std::optional<Cache> cache;
    std::optional<std::pair<std::string, std::string>> cached;
    if (cache_dir) {
        cache.emplace(*cache_dir);
        cached = cache->lookup(url);
        if (cached && policy == CachePolicy::CacheOk && cached->first.empty()) return {true, cached->second, {}};
    }

    httplib::Headers headers;
    if (cached && policy == CachePolicy::CacheOk) headers.emplace("If-None-Match", cached->first);

    FetchResult out;
    try {
        std::string current = url;
        for (int hop = 0; hop < 10; ++hop) {
            auto [origin, path] = split_url(current);
            httplib::Client client(origin);
            client.set_connection_timeout(10);
            client.set_read_timeout(30);
            auto res = client.Get(path, headers);
            if (!res) {
                out.error = httplib::to_string(res.error());
                return out;
            }
            if (res->status == 304 && cached) return {true, cached->second, {}};
            if (res->status >= 300 && res->status < 400 && res->has_header("Location")) {
                std::string loc = res->get_header_value("Location");
                current = loc.find("://") != std::string::npos ? loc
                          : loc.starts_with("/")                ? origin + loc
                                                                : origin + path.substr(0, path.rfind('/') + 1) + loc;
                continue;
            }
            if (res->status != 200) {
                out.error = "HTTP status " + std::to_string(res->status);
                return out;
            }
            if (cache) cache->store(url, res->get_header_value("ETag"), res->body);
            return {true, res->body, {}};
        }
        out.error = "too many redirects";
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace

std::optional<fs::path> cache_dir_from_env() {
    if (const char* v = std::getenv("LYPHC_IMPORT_CACHE"); v && *v) return fs::path(v);
    return std::nullopt;
}

Fetcher default_fetcher(const FetcherOptions& options) {
    return [options](const ImportSource& src) -> FetchResult {
        if (is_http(src.url)) return http_get(src.url, options.cache_dir, src.cache);
        std::string path = src.url.rfind("file://", 0) == 0 ? src.url.substr(7) : src.url;
        bool ok = false;
        std::string body = read_file(path, ok);
        if (!ok) return {false, {}, "cannot read file"};
        return {true, std::move(body), {}};
    };
}

}  // namespace lyphc
