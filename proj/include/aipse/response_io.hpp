#pragma once

#include <map>
#include <string>

#include "aipse/risk.hpp"

namespace aipse::risk {

struct UrlLabel {
    bool malicious = false;
    bool warned = false;
};

// A response together with its query and per-URL ground-truth labels, as
// stored in labeled-response files.
struct LabeledResponse {
    Query query;
    AipseResponse response;
    std::map<std::string, UrlLabel> labels;
};

// JSON schema:
// {
//   "query": {"kind": "keyword|url|natural", "text": "...", "keywords": [...]},
//   "response": {"answer": "...", "references": [...], "sources": [...],
//                "warnings": [...]},
//   "labels": {"<url>": {"malicious": true, "warned": false}, ...}
// }
// "query" and "labels" are optional; a bare {"answer": ...} object is also
// accepted for plain response files.
LabeledResponse load_labeled_response(const std::string& path);

void save_labeled_response(const LabeledResponse& lr, const std::string& path);

// Highest per-URL risk across the labeled URLs, per the classification
// rules (flags derived from the response).
RiskLevel labeled_query_risk(const LabeledResponse& lr);

}  // namespace aipse::risk
