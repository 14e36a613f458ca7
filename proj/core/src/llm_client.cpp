#include <causalfair/report.hpp>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>

using nlohmann::json;

namespace causalfair {

LlmReply parse_reply_sections(const std::string& content) {
    LlmReply out;
    out.raw = content;
    auto at_line_start = [&](std::size_t pos) {
        return pos == 0 || content[pos - 1] == '\n';
    };
    std::size_t text_pos = std::string::npos;
    for (std::size_t p = content.find("TEXT:"); p != std::string::npos;
         p = content.find("TEXT:", p + 1)) {
        if (at_line_start(p)) {
            text_pos = p;
            break;
        }
    }
    std::size_t latex_pos = std::string::npos;
    if (text_pos != std::string::npos) {
        for (std::size_t p = content.find("LATEX:", text_pos); p != std::string::npos;
             p = content.find("LATEX:", p + 1)) {
            if (at_line_start(p)) {
                latex_pos = p;
                break;
            }
        }
    }
    if (text_pos == std::string::npos || latex_pos == std::string::npos) {
        out.structure_ok = false;
        return out;
    }
    auto trim = [](std::string s) {
        std::size_t b = s.find_first_not_of(" \t\n\r");
        if (b == std::string::npos) return std::string();
        std::size_t e = s.find_last_not_of(" \t\n\r");
        return s.substr(b, e - b + 1);
    };
    out.text_section = trim(content.substr(text_pos + 5, latex_pos - (text_pos + 5)));
    out.latex_section = trim(content.substr(latex_pos + 6));
    out.structure_ok = !out.text_section.empty() && !out.latex_section.empty();
    return out;
}

std::string build_request_body(const LlmConfig& cfg, const PromptPair& p) {
    json body;
    body["model"] = cfg.model;
    body["messages"] = json::array();
    body["messages"].push_back({{"role", "system"}, {"content", p.system}});
    body["messages"].push_back({{"role", "user"}, {"content", p.user}});
    if (!cfg.reasoning_effort.empty()) body["reasoning_effort"] = cfg.reasoning_effort;
    return body.dump();
}

std::string extract_reply_content(const std::string& response_body) {
    json j;
    try {
        j = json::parse(response_body);
    } catch (const json::exception& ex) {
        throw NetworkError(std::string("response is not valid JSON: ") + ex.what());
    }
    try {
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw NetworkError("response lacks choices[0].message.content");
    }
}

namespace {

struct UrlParts {
    std::string scheme_host;   // scheme://host[:port]
    std::string path;
};

UrlParts split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint URL needs a scheme: '" + url + "'");
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace

LlmReply request_report(const LlmConfig& cfg, const PromptPair& p) {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (!key || std::string(key).empty())
        throw MissingCredential("credential environment variable '" + cfg.api_key_env +
                                "' is unset or empty");
    UrlParts url = split_url(cfg.endpoint);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (url.scheme_host.rfind("https", 0) == 0)
        throw ConnectFailure("built without TLS support; use an http endpoint");
#endif
    httplib::Client client(url.scheme_host);
    client.set_connection_timeout(cfg.timeout_s, 0);
    client.set_read_timeout(cfg.timeout_s, 0);
    client.set_write_timeout(cfg.timeout_s, 0);
    httplib::Headers headers{{"Authorization", std::string("Bearer ") + key}};
    auto res = client.Post(url.path, headers, build_request_body(cfg, p),
                           "application/json");
    if (!res) {
        auto err = res.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
            err == httplib::Error::Write)
            throw RequestTimeout("request timed out after " +
                                 std::to_string(cfg.timeout_s) + "s");
        throw ConnectFailure("connection failed: " + httplib::to_string(err));
    }
    if (res->status < 200 || res->status >= 300)
        throw HttpStatusError(res->status, "endpoint returned status " +
                                               std::to_string(res->status) + ": " +
                                               res->body.substr(0, 512));
    return parse_reply_sections(extract_reply_content(res->body));
}

} // namespace causalfair
