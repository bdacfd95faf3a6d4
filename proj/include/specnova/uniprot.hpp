#pragma once

// Optional UniProt proteome retrieval. Every pipeline also accepts a local
// FASTA path, so nothing here is required for offline use.

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "specnova/msio.hpp"

namespace specnova::msio {

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Minimal GET interface so tests can substitute a fake network.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    /// Throws FetchError on transport-level failure (DNS, TLS, timeout).
    virtual HttpResponse get(const std::string& url) = 0;
};

/// libcurl-backed HTTPS transport.
std::unique_ptr<HttpTransport> make_curl_transport();

struct FetchOptions {
    std::string endpoint = "https://rest.uniprot.org/uniprotkb/stream";
    std::filesystem::path cache_dir = ".";
    /// Cache key date as YYYYMMDD; empty means today's UTC date.
    std::string date;
};

struct FetchResult {
    std::vector<ProteinRecord> proteins;
    std::vector<std::string> warnings;
    std::filesystem::path cache_file;
    bool from_cache = false;
};

std::string proteome_query_url(const std::string& endpoint, int taxonomy_id, bool reviewed_only);

std::filesystem::path proteome_cache_path(const FetchOptions& options, int taxonomy_id, bool reviewed_only);

/// Returns the cached FASTA when present, otherwise downloads it, stores it
/// atomically in the cache and parses it. Throws FetchError on network
/// failure or non-2xx status; no records and no cache file are produced then.
FetchResult fetch_proteome(int taxonomy_id, bool reviewed_only, HttpTransport& transport,
                           const FetchOptions& options = {});

}  // namespace specnova::msio
