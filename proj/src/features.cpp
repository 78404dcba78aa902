#include "aipse/features.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>

#include "aipse/errors.hpp"

namespace aipse::url {

namespace {

bool is_ipv4_literal(const std::string& host) {
    int parts = 0;
    std::size_t pos = 0;
    while (pos <= host.size()) {
        auto dot = host.find('.', pos);
        auto part = host.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (part.empty() || part.size() > 3 ||
            !std::all_of(part.begin(), part.end(),
                         [](unsigned char c) { return std::isdigit(c) != 0; }))
            return false;
        if (std::stoi(part) > 255) return false;
        ++parts;
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return parts == 4;
}

bool is_ipv6_literal(const std::string& host) {
    if (host.size() < 3 || host.front() != '[' || host.back() != ']') return false;
    unsigned char buf[16];
    return inet_pton(AF_INET6, host.substr(1, host.size() - 2).c_str(), buf) == 1;
}

bool is_ip_literal(const std::string& host) {
    return is_ipv4_literal(host) || is_ipv6_literal(host);
}

// "//" anywhere past the scheme separator (past index 7 for http://,
// index 8 for https://).
bool has_late_double_slash(const std::string& raw) {
    auto sep = raw.find("://");
    std::size_t from = sep == std::string::npos ? 0 : sep + 4;
    return raw.find("//", from) != std::string::npos;
}

bool ifind(const std::string& haystack, std::string_view needle, std::size_t from,
           std::size_t* at) {
    auto it = std::search(haystack.begin() + static_cast<std::ptrdiff_t>(from), haystack.end(),
                          needle.begin(), needle.end(), [](char a, char b) {
                              return std::tolower(static_cast<unsigned char>(a)) ==
                                     std::tolower(static_cast<unsigned char>(b));
                          });
    if (it == haystack.end()) return false;
    *at = static_cast<std::size_t>(it - haystack.begin());
    return true;
}

bool has_hidden_iframe(const std::string& html) {
    static const std::regex hidden(R"((frameborder|width|height)\s*=\s*["']?0)",
                                   std::regex::icase);
    std::size_t pos = 0, at = 0;
    while (ifind(html, "<iframe", pos, &at)) {
        auto end = html.find('>', at);
        auto tag = html.substr(at, end == std::string::npos ? std::string::npos : end - at);
        if (std::regex_search(tag, hidden)) return true;
        pos = at + 7;
    }
    return false;
}

bool has_status_bar_mouseover(const std::string& html) {
    static const std::regex re(R"(onmouseover[^>]*window\.status\s*=)", std::regex::icase);
    return std::regex_search(html, re);
}

bool has_right_click_guard(const std::string& html) {
    static const std::regex re(R"(event\.button\s*===?\s*2)", std::regex::icase);
    return std::regex_search(html, re);
}

}  // namespace

std::set<std::string> FeatureConfig::default_shorteners() {
    return {"bit.ly", "tinyurl.com", "t.co", "goo.gl", "is.gd", "ow.ly"};
}

std::set<std::string> FeatureConfig::load_shorteners(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open shortener list: " + path);
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        auto end = line.find_last_not_of(" \t\r");
        out.insert(line.substr(begin, end - begin + 1));
    }
    return out;
}

FeatureVector extract_addressbar_features(const UrlRecord& u, const FeatureConfig& cfg) {
    FeatureVector v;
    v.domain_key = u.registered_domain;
    v.f[kHaveIp] = is_ip_literal(u.host) ? 1 : 0;
    v.f[kHaveAt] = u.raw.find('@') != std::string::npos ? 1 : 0;
    v.f[kUrlLength] = u.raw.size() >= cfg.length_threshold ? 1 : 0;
    v.f[kUrlDepth] = static_cast<int>(u.path_segments.size());
    v.f[kRedirection] = has_late_double_slash(u.raw) ? 1 : 0;
    v.f[kHttpsDomain] = u.host.find("https") != std::string::npos ? 1 : 0;
    v.f[kTinyUrl] = cfg.shorteners.count(u.registered_domain) ? 1 : 0;
    v.f[kPrefixSuffix] = u.host.find('-') != std::string::npos ? 1 : 0;
    return v;
}

void extract_domain_features(const UrlRecord&, const Evidence& e, FeatureVector& out,
                             const FeatureConfig& cfg) {
    out.f[kDnsRecord] = (e.dns_resolves && *e.dns_resolves) ? 0 : 1;
    out.f[kDomainAge] =
        (!e.creation_date ||
         e.fetched_at < dates::add_months(*e.creation_date, cfg.age_threshold_months))
            ? 1
            : 0;
    out.f[kDomainEnd] =
        (!e.expiration_date ||
         *e.expiration_date <= dates::add_months(e.fetched_at, cfg.end_threshold_months))
            ? 1
            : 0;
}

void extract_html_features(const Evidence& e, FeatureVector& out, const FeatureConfig& cfg) {
    if (!e.html) {
        out.f[kIFrame] = out.f[kMouseOver] = out.f[kRightClick] = out.f[kWebForwards] = 1;
        return;
    }
    out.f[kIFrame] = has_hidden_iframe(*e.html) ? 1 : 0;
    out.f[kMouseOver] = has_status_bar_mouseover(*e.html) ? 1 : 0;
    out.f[kRightClick] = has_right_click_guard(*e.html) ? 1 : 0;
    out.f[kWebForwards] =
        (!e.redirect_count || *e.redirect_count > cfg.forwards_threshold) ? 1 : 0;
}

FeatureVector extract_all(const UrlRecord& u, const Evidence& e, const FeatureConfig& cfg) {
    FeatureVector v = extract_addressbar_features(u, cfg);
    extract_domain_features(u, e, v, cfg);
    extract_html_features(e, v, cfg);
    return v;
}

}  // namespace aipse::url
