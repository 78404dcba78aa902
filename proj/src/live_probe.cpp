#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "aipse/live_probe.hpp"

#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cctype>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>

#include <httplib.h>

namespace aipse::url {

namespace {

dates::Date today_utc() {
    auto now = std::chrono::system_clock::now();
    return dates::Date{std::chrono::floor<std::chrono::days>(now)};
}

std::string whois_query(const std::string& server, const std::string& query,
                        int timeout_seconds) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (getaddrinfo(server.c_str(), "43", &hints, &res) != 0 || !res) return {};

    int fd = -1;
    for (auto* it = res; it; it = it->ai_next) {
        fd = socket(it->ai_family, it->ai_socktype, it->ai_protocol);
        if (fd < 0) continue;
        timeval tv{timeout_seconds, 0};
        setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
        setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
        if (connect(fd, it->ai_addr, it->ai_addrlen) == 0) break;
        close(fd);
        fd = -1;
    }
    freeaddrinfo(res);
    if (fd < 0) return {};

    auto line = query + "\r\n";
    if (send(fd, line.data(), line.size(), 0) < 0) {
        close(fd);
        return {};
    }
    std::string reply;
    char buf[4096];
    ssize_t n;
    while ((n = recv(fd, buf, sizeof(buf), 0)) > 0) reply.append(buf, static_cast<size_t>(n));
    close(fd);
    return reply;
}

std::optional<dates::Date> scan_whois_date(const std::string& reply,
                                           std::initializer_list<const char*> keys) {
    std::istringstream in(reply);
    std::string line;
    while (std::getline(in, line)) {
        for (const char* key : keys) {
            auto at = line.find(key);
            if (at == std::string::npos) continue;
            auto colon = line.find(':', at);
            if (colon == std::string::npos) continue;
            auto rest = line.substr(colon + 1);
            auto begin = rest.find_first_not_of(" \t");
            if (begin == std::string::npos || rest.size() - begin < 10) continue;
            if (auto d = dates::parse_iso(rest.substr(begin, 10))) return d;
        }
    }
    return std::nullopt;
}

std::string referral_server(const std::string& iana_reply) {
    std::istringstream in(iana_reply);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("whois:", 0) != 0 && line.rfind("refer:", 0) != 0) continue;
        auto rest = line.substr(line.find(':') + 1);
        auto begin = rest.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        auto end = rest.find_last_not_of(" \t\r");
        return rest.substr(begin, end - begin + 1);
    }
    return {};
}

}  // namespace

bool dns_resolves(const std::string& host, int) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    int rc = getaddrinfo(host.c_str(), nullptr, &hints, &res);
    if (res) freeaddrinfo(res);
    return rc == 0;
}

WhoisDates whois_dates(const std::string& domain, int timeout_seconds) {
    auto dot = domain.rfind('.');
    if (dot == std::string::npos) return {};
    auto tld = domain.substr(dot + 1);

    auto server = referral_server(whois_query("whois.iana.org", tld, timeout_seconds));
    if (server.empty()) server = "whois." + tld;

    auto reply = whois_query(server, domain, timeout_seconds);
    if (reply.empty()) return {};

    WhoisDates out;
    out.creation = scan_whois_date(reply, {"Creation Date", "created", "Created On",
                                           "Registered on", "registered"});
    out.expiration = scan_whois_date(
        reply, {"Registry Expiry Date", "Expiration Date", "Expiry date", "paid-till",
                "expires"});
    return out;
}

FetchResult fetch_with_redirects(const std::string& host, int timeout_seconds,
                                 int max_redirects) {
    FetchResult result;
    std::string scheme = "https";
    std::string current_host = host;
    std::string path = "/";

    for (int hop = 0; hop <= max_redirects; ++hop) {
        httplib::Client client((scheme + "://" + current_host).c_str());
        client.set_connection_timeout(timeout_seconds);
        client.set_read_timeout(timeout_seconds);
        client.enable_server_certificate_verification(false);

        auto res = client.Get(path);
        if (!res) {
            if (scheme == "https" && hop == 0) {
                scheme = "http";  // retry plain http once before giving up
                --hop;
                continue;
            }
            return result;
        }
        result.final_status = res->status;
        if (res->status >= 300 && res->status < 400 && res->has_header("Location")) {
            ++result.redirect_count;
            auto loc = res->get_header_value("Location");
            if (loc.rfind("http://", 0) == 0 || loc.rfind("https://", 0) == 0) {
                auto scheme_end = loc.find("://");
                scheme = loc.substr(0, scheme_end);
                auto rest = loc.substr(scheme_end + 3);
                auto slash = rest.find('/');
                current_host = rest.substr(0, slash);
                path = slash == std::string::npos ? "/" : rest.substr(slash);
            } else {
                path = loc.empty() ? "/" : loc;
            }
            continue;
        }
        result.body = res->body;
        return result;
    }
    return result;
}

ProbeOutcome probe_site(const std::string& host, int timeout_seconds) {
    ProbeOutcome out;
    {
        httplib::Client https(("https://" + host).c_str());
        https.set_connection_timeout(timeout_seconds);
        https.set_read_timeout(timeout_seconds);
        https.enable_server_certificate_verification(true);
        if (std::ifstream("/etc/ssl/certs/ca-certificates.crt").good())
            https.set_ca_cert_path("/etc/ssl/certs/ca-certificates.crt");
        if (auto res = https.Get("/")) {
            out.status = res->status;
            out.cert_valid = true;
            out.body = res->body;
            return out;
        }
    }
    httplib::Client http(("http://" + host).c_str());
    http.set_connection_timeout(timeout_seconds);
    http.set_read_timeout(timeout_seconds);
    if (auto res = http.Get("/")) {
        out.status = res->status;
        out.body = res->body;
    }
    return out;
}

LiveEvidenceProvider::LiveEvidenceProvider(Options options) : options_(std::move(options)) {}

Evidence LiveEvidenceProvider::lookup(const std::string& host) {
    Evidence e;
    e.fetched_at = options_.as_of ? *options_.as_of : today_utc();
    e.dns_resolves = dns_resolves(host, options_.timeout_seconds);
    if (*e.dns_resolves) {
        auto fetched =
            fetch_with_redirects(host, options_.timeout_seconds, options_.max_redirects);
        e.html = fetched.body;
        e.redirect_count = fetched.redirect_count;
    }
    auto registered = host.rfind("www.", 0) == 0 ? host.substr(4) : host;
    auto dates = whois_dates(registered, options_.timeout_seconds);
    e.creation_date = dates.creation;
    e.expiration_date = dates.expiration;
    return e;
}

}  // namespace aipse::url
