#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "aipse/dates.hpp"

namespace aipse::url {

// Fetched facts about a host. Everything except fetched_at is optional;
// extractors map a missing field to the suspicious value. fetched_at is the
// reference "now" for all age math, never the wall clock.
struct Evidence {
    std::optional<std::string> html;
    std::optional<bool> dns_resolves;
    std::optional<dates::Date> creation_date;
    std::optional<dates::Date> expiration_date;
    std::optional<int> redirect_count;
    dates::Date fetched_at{};
};

// Throws InvalidConfig when creation_date > expiration_date.
void validate_evidence(const Evidence& e);

// Source of Evidence keyed by host. Implementations: fixture directory
// (offline, deterministic) and live probes (DNS/WHOIS/HTTP, opt-in).
class EvidenceProvider {
public:
    virtual ~EvidenceProvider() = default;
    virtual Evidence lookup(const std::string& host) = 0;
};

// Reads <dir>/<host>.txt files of "key=value" lines. Recognized keys:
// html_path (relative to dir), dns_resolves (true/false), creation_date,
// expiration_date (ISO-8601), redirect_count, fetched_at. A host with no
// fixture file yields empty Evidence (all fields suspicious).
class FixtureEvidenceProvider : public EvidenceProvider {
public:
    FixtureEvidenceProvider(std::filesystem::path dir,
                            std::optional<dates::Date> default_fetched_at = std::nullopt);

    Evidence lookup(const std::string& host) override;

private:
    std::filesystem::path dir_;
    std::optional<dates::Date> default_fetched_at_;
};

// Produces Evidence with every field absent; feature extraction then falls
// back to the missing-evidence policy uniformly.
class AbsentEvidenceProvider : public EvidenceProvider {
public:
    explicit AbsentEvidenceProvider(dates::Date fetched_at) : fetched_at_(fetched_at) {}

    Evidence lookup(const std::string&) override { return Evidence{.fetched_at = fetched_at_}; }

private:
    dates::Date fetched_at_;
};

}  // namespace aipse::url
