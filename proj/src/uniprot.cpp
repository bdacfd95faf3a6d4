#include "specnova/uniprot.hpp"

#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <curl/curl.h>
#include <fmt/format.h>

#include "specnova/errors.hpp"

namespace specnova::msio {

namespace {

class CurlTransport final : public HttpTransport {
public:
    CurlTransport() { curl_global_init(CURL_GLOBAL_DEFAULT); }
    ~CurlTransport() override { curl_global_cleanup(); }

    HttpResponse get(const std::string& url) override {
        std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> handle(curl_easy_init(), curl_easy_cleanup);
        if (!handle) throw FetchError("could not initialise libcurl");
        HttpResponse response;
        curl_easy_setopt(handle.get(), CURLOPT_URL, url.c_str());
        curl_easy_setopt(handle.get(), CURLOPT_FOLLOWLOCATION, 1L);
        curl_easy_setopt(handle.get(), CURLOPT_CONNECTTIMEOUT, 30L);
        curl_easy_setopt(handle.get(), CURLOPT_WRITEFUNCTION, &CurlTransport::append);
        curl_easy_setopt(handle.get(), CURLOPT_WRITEDATA, &response.body);
        const auto rc = curl_easy_perform(handle.get());
        if (rc != CURLE_OK) {
            throw FetchError(std::string("network error: ") + curl_easy_strerror(rc) +
                             "; retry later or pass a local FASTA with --fasta");
        }
        long status = 0;
        curl_easy_getinfo(handle.get(), CURLINFO_RESPONSE_CODE, &status);
        response.status = static_cast<int>(status);
        return response;
    }

private:
    static std::size_t append(char* data, std::size_t size, std::size_t n, void* user) {
        static_cast<std::string*>(user)->append(data, size * n);
        return size * n;
    }
};

std::string today_utc() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[16];
    std::strftime(buf, sizeof buf, "%Y%m%d", &tm);
    return buf;
}

std::string url_encode(std::string_view s) {
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += fmt::format("%{:02X}", c);
        }
    }
    return out;
}

}  // namespace

std::unique_ptr<HttpTransport> make_curl_transport() { return std::make_unique<CurlTransport>(); }

std::string proteome_query_url(const std::string& endpoint, int taxonomy_id, bool reviewed_only) {
    auto query = fmt::format("(taxonomy_id:{})", taxonomy_id);
    if (reviewed_only) query += " AND (reviewed:true)";
    return endpoint + "?format=fasta&query=" + url_encode(query);
}

std::filesystem::path proteome_cache_path(const FetchOptions& options, int taxonomy_id, bool reviewed_only) {
    const auto date = options.date.empty() ? today_utc() : options.date;
    return options.cache_dir /
           fmt::format("uniprot_tax{}_{}_{}.fasta", taxonomy_id, reviewed_only ? "reviewed" : "all", date);
}

FetchResult fetch_proteome(int taxonomy_id, bool reviewed_only, HttpTransport& transport,
                           const FetchOptions& options) {
    if (taxonomy_id <= 0) throw InvalidInput("taxonomy id must be positive");
    FetchResult result;
    result.cache_file = proteome_cache_path(options, taxonomy_id, reviewed_only);

    std::string body;
    if (std::filesystem::exists(result.cache_file)) {
        std::ifstream in(result.cache_file, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        body = ss.str();
        result.from_cache = true;
    } else {
        const auto response = transport.get(proteome_query_url(options.endpoint, taxonomy_id, reviewed_only));
        if (response.status < 200 || response.status >= 300) {
            throw FetchError(fmt::format("UniProt returned HTTP {} for taxonomy {}; retry later or pass a "
                                         "local FASTA with --fasta",
                                         response.status, taxonomy_id));
        }
        body = response.body;
    }

    std::istringstream in(body);
    auto parsed = parse_fasta(in);
    for (const auto& e : parsed.errors) {
        result.warnings.push_back(fmt::format("{}: {}", e.record.empty() ? "fasta" : e.record, e.message));
    }
    result.proteins = std::move(parsed.proteins);
    if (result.proteins.empty()) {
        result.warnings.push_back(fmt::format("taxonomy {} returned no {}protein entries", taxonomy_id,
                                              reviewed_only ? "reviewed " : ""));
        return result;
    }

    if (!result.from_cache) {
        std::filesystem::create_directories(result.cache_file.parent_path().empty()
                                                ? std::filesystem::path(".")
                                                : result.cache_file.parent_path());
        auto tmp = result.cache_file;
        tmp += ".part";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << body;
            if (!out) throw FetchError("could not write proteome cache " + tmp.string());
        }
        std::filesystem::rename(tmp, result.cache_file);
    }
    return result;
}

}  // namespace specnova::msio
