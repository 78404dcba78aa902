#include "aipse/url_record.hpp"

#include <algorithm>
#include <cctype>

#include "aipse/errors.hpp"

namespace aipse::url {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool valid_host_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_';
}

bool plausible_host(const std::string& host) {
    if (host.empty()) return false;
    if (host.front() == '[' && host.back() == ']' && host.size() > 2) {
        // IPv6 literal; charset check only, the IP feature does the real parse.
        return std::all_of(host.begin() + 1, host.end() - 1, [](char c) {
            return std::isxdigit(static_cast<unsigned char>(c)) || c == ':' || c == '.';
        });
    }
    if (!std::all_of(host.begin(), host.end(), valid_host_char)) return false;
    // A bare word is not a host; require a dot (localhost excepted).
    return host.find('.') != std::string::npos || host == "localhost";
}

}  // namespace

UrlRecord parse_url(const std::string& raw) {
    if (raw.empty()) throw MalformedUrl("empty URL");

    UrlRecord rec;
    rec.raw = raw;

    std::string rest = raw;
    if (auto sep = raw.find("://"); sep != std::string::npos) {
        rec.scheme = to_lower(raw.substr(0, sep));
        rest = raw.substr(sep + 3);
    }

    auto authority_end = rest.find_first_of("/?#");
    std::string authority = rest.substr(0, authority_end);
    std::string path =
        authority_end == std::string::npos ? std::string{} : rest.substr(authority_end);

    // Userinfo ends at the last '@' of the authority.
    if (auto at = authority.rfind('@'); at != std::string::npos) {
        authority = authority.substr(at + 1);
    }

    // Strip a trailing :port (IPv6 literals keep their brackets).
    std::string host = authority;
    if (!host.empty() && host.front() == '[') {
        if (auto close = host.find(']'); close != std::string::npos) {
            host = host.substr(0, close + 1);
        }
    } else if (auto colon = host.rfind(':'); colon != std::string::npos) {
        auto port = host.substr(colon + 1);
        if (!port.empty() && std::all_of(port.begin(), port.end(), [](unsigned char c) {
                return std::isdigit(c) != 0;
            })) {
            host = host.substr(0, colon);
        }
    }

    host = to_lower(host);
    if (!plausible_host(host)) throw MalformedUrl("no host in '" + raw + "'");
    rec.host = host;

    rec.registered_domain = host.rfind("www.", 0) == 0 ? host.substr(4) : host;

    if (auto q = path.find_first_of("?#"); q != std::string::npos) path = path.substr(0, q);
    std::size_t pos = 0;
    while (pos < path.size()) {
        auto next = path.find('/', pos);
        auto seg = path.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (!seg.empty()) rec.path_segments.push_back(seg);
        if (next == std::string::npos) break;
        pos = next + 1;
    }

    return rec;
}

}  // namespace aipse::url
