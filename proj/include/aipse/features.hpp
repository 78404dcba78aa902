#pragma once

#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "aipse/evidence.hpp"
#include "aipse/url_record.hpp"

namespace aipse::url {

// Canonical feature order. The domain itself travels separately as
// domain_key and is never part of the numeric vector.
inline constexpr std::size_t kFeatureCount = 15;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "Have_IP",     "Have_At",    "URL_Length", "URL_Depth",  "Redirection",
    "https_Domain", "TinyURL",   "Prefix_Suffix", "DNS_Record", "Domain_Age",
    "Domain_End",  "iFrame",     "Mouse_Over", "Right_Click", "Web_Forwards",
};

enum Feature : std::size_t {
    kHaveIp = 0,
    kHaveAt,
    kUrlLength,
    kUrlDepth,
    kRedirection,
    kHttpsDomain,
    kTinyUrl,
    kPrefixSuffix,
    kDnsRecord,
    kDomainAge,
    kDomainEnd,
    kIFrame,
    kMouseOver,
    kRightClick,
    kWebForwards,
};

// All values are 0/1 except URL_Depth, which counts path segments.
struct FeatureVector {
    std::string domain_key;
    std::array<int, kFeatureCount> f{};

    std::vector<double> to_doubles() const { return {f.begin(), f.end()}; }
};

// Tunable cutoffs. Defaults follow the conventional URL feature set: 54-char
// length flag, 6-month age/expiry windows, >2 redirects.
struct FeatureConfig {
    std::size_t length_threshold = 54;
    int age_threshold_months = 6;
    int end_threshold_months = 6;
    int forwards_threshold = 2;  // Web_Forwards fires strictly above this
    std::set<std::string> shorteners = default_shorteners();

    static std::set<std::string> default_shorteners();
    // One domain per line, '#' comments.
    static std::set<std::string> load_shorteners(const std::string& path);
};

// The 9 address-bar rules (fills domain_key and features 0..7).
FeatureVector extract_addressbar_features(const UrlRecord& u,
                                          const FeatureConfig& cfg = FeatureConfig{});

// DNS_Record / Domain_Age / Domain_End from WHOIS-style evidence. Missing
// evidence maps to 1.
void extract_domain_features(const UrlRecord& u, const Evidence& e, FeatureVector& out,
                             const FeatureConfig& cfg = FeatureConfig{});

// iFrame / Mouse_Over / Right_Click / Web_Forwards. A missing HTML body
// forces all four to 1.
void extract_html_features(const Evidence& e, FeatureVector& out,
                           const FeatureConfig& cfg = FeatureConfig{});

// All 15 features in canonical order; pure function of (u, e).
FeatureVector extract_all(const UrlRecord& u, const Evidence& e,
                          const FeatureConfig& cfg = FeatureConfig{});

}  // namespace aipse::url
