#pragma once

#include <string>
#include <vector>

namespace aipse::url {

// A URL decomposed into the pieces the feature rules look at. Construction
// goes through parse_url(); a record always has a non-empty host.
struct UrlRecord {
    std::string raw;
    std::string scheme;             // lowercased; empty when the input had none
    std::string host;               // lowercased; brackets kept for IPv6 literals
    std::vector<std::string> path_segments;  // non-empty segments only
    std::string registered_domain;  // host minus a leading "www."
};

// Splits raw into scheme/host/path. Throws MalformedUrl when no plausible
// host can be extracted. Empty path segments ("a//b") are dropped from
// path_segments; the raw string keeps them for the redirection rule.
UrlRecord parse_url(const std::string& raw);

}  // namespace aipse::url
