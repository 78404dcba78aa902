#pragma once

#include <optional>
#include <string>

#include "aipse/evidence.hpp"

namespace aipse::url {

// Network-backed Evidence producer: DNS resolution via the system resolver,
// WHOIS dates over port 43 (IANA referral first), and an HTTP fetch that
// counts redirect hops and keeps the final body. Strictly opt-in; offline
// runs use fixtures instead.
class LiveEvidenceProvider : public EvidenceProvider {
public:
    struct Options {
        int timeout_seconds = 10;
        int max_redirects = 10;
        // The fetch date recorded in the evidence; defaults to today (UTC)
        // when unset.
        std::optional<dates::Date> as_of;
    };

    LiveEvidenceProvider() : LiveEvidenceProvider(Options{}) {}
    explicit LiveEvidenceProvider(Options options);

    Evidence lookup(const std::string& host) override;

private:
    Options options_;
};

// Building blocks, exposed for the CLI's probe subcommand.
bool dns_resolves(const std::string& host, int timeout_seconds);

struct WhoisDates {
    std::optional<dates::Date> creation;
    std::optional<dates::Date> expiration;
};
WhoisDates whois_dates(const std::string& domain, int timeout_seconds);

struct FetchResult {
    std::optional<std::string> body;
    int redirect_count = 0;
    int final_status = 0;
};
FetchResult fetch_with_redirects(const std::string& host, int timeout_seconds, int max_redirects);

// Candidate probe for the corpus pipeline: HTTPS with certificate
// verification first, plain HTTP as the fallback (cert_valid stays false).
struct ProbeOutcome {
    int status = 0;
    bool cert_valid = false;
    std::optional<std::string> body;
};
ProbeOutcome probe_site(const std::string& host, int timeout_seconds);

}  // namespace aipse::url
