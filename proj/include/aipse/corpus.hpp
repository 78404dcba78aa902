#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace aipse::corpus {

enum class SiteCategory { CloudStorage, UrlShortener, DomainMarketplace, Other };

std::string_view to_string(SiteCategory c);
std::optional<SiteCategory> category_from_string(std::string_view text);

struct ProbeResult {
    int status_code = 0;
    bool cert_valid = false;
};

struct CandidateSite {
    std::string url;
    ProbeResult probe;
    std::optional<SiteCategory> category;
    std::optional<std::string> html;
    std::optional<std::vector<std::string>> keywords;  // exactly 5 when present
};

// Keep/Drop with the reason recorded for the output CSV.
struct FilterDecision {
    bool kept = false;
    std::string reason;  // empty when kept

    static FilterDecision keep() { return {true, {}}; }
    static FilterDecision drop(std::string why) { return {false, std::move(why)}; }
};

// The irrelevant-keyword list plus the excluded site categories. The
// default keyword set is the shipped blocklist asset; matching is
// exact-token and case-insensitive.
struct BlocklistConfig {
    std::set<std::string> irrelevant_keywords;
    std::set<SiteCategory> excluded_categories{
        SiteCategory::CloudStorage, SiteCategory::UrlShortener, SiteCategory::DomainMarketplace};

    static BlocklistConfig defaults();
    // One keyword per line, '#' comments, stored lowercase.
    static std::set<std::string> load_keywords(const std::string& path);
};

// Drop unless status 200, certificate valid, and category not excluded
// (checked in that order).
FilterDecision filter_candidate(const CandidateSite& site,
                                const BlocklistConfig& cfg = BlocklistConfig::defaults());

// Drop when any keyword, lowercased and trimmed, is a blocklist member.
// The reason carries the matched blocklist term. Throws ArityError unless
// exactly 5 keywords.
FilterDecision filter_keywords(const std::vector<std::string>& keywords,
                               const BlocklistConfig& cfg = BlocklistConfig::defaults());

// Text of <title>/<h1>/<h2>/<h3> and the name/content of <meta> tags, in
// document order, newline-separated. Lexical scan; tolerates broken HTML.
std::string extract_site_fields(const std::string& html);

// Maps a host onto a category using configurable domain lists.
struct CategoryConfig {
    std::set<std::string> cloud_storage;
    std::set<std::string> url_shorteners;
    std::set<std::string> domain_marketplaces;

    static CategoryConfig defaults();
};

SiteCategory classify_category(const std::string& host,
                               const CategoryConfig& cfg = CategoryConfig::defaults());

}  // namespace aipse::corpus
