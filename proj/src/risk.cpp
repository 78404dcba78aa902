#include "aipse/risk.hpp"

#include <algorithm>
#include <stdexcept>

#include "aipse/errors.hpp"

namespace aipse::risk {

std::string_view to_string(RiskLevel level) {
    switch (level) {
        case RiskLevel::None: return "None";
        case RiskLevel::Low: return "Low";
        case RiskLevel::Medium: return "Medium";
        case RiskLevel::High: return "High";
    }
    return "None";
}

std::string_view to_string(RiskCase c) {
    switch (c) {
        case RiskCase::Phishing: return "Phishing";
        case RiskCase::Malware: return "Malware";
        case RiskCase::Scam: return "Scam";
        case RiskCase::Adware: return "Adware";
        case RiskCase::FakeNews: return "Fake News";
        case RiskCase::IllegalContent: return "Illegal Content";
        case RiskCase::Piracy: return "Piracy";
    }
    return "Phishing";
}

std::optional<RiskLevel> risk_level_from_string(std::string_view text) {
    if (text == "None" || text == "none") return RiskLevel::None;
    if (text == "Low" || text == "low") return RiskLevel::Low;
    if (text == "Medium" || text == "medium") return RiskLevel::Medium;
    if (text == "High" || text == "high") return RiskLevel::High;
    return std::nullopt;
}

RiskLevel classify_url_risk(const std::string& url, bool malicious, bool cited_in_answer,
                            bool warned, bool in_sources) {
    if (warned && !cited_in_answer)
        throw InconsistentFlags("URL '" + url + "' marked warned but not cited");
    if (!malicious) return RiskLevel::None;
    if (cited_in_answer) return warned ? RiskLevel::Medium : RiskLevel::High;
    return in_sources ? RiskLevel::Low : RiskLevel::None;
}

RiskLevel classify_response_url(const std::string& url, const AipseResponse& response,
                                bool malicious) {
    bool cited = std::find(response.references.begin(), response.references.end(), url) !=
                 response.references.end();
    bool in_sources = std::find(response.sources.begin(), response.sources.end(), url) !=
                      response.sources.end();
    bool warned = cited && response.warnings.count(url) > 0;
    return classify_url_risk(url, malicious, cited, warned, in_sources);
}

RiskLevel aggregate_query_risk(const std::vector<RiskLevel>& levels) {
    RiskLevel out = RiskLevel::None;
    for (auto level : levels) out = std::max(out, level);
    return out;
}

Transition risk_transition(RiskLevel initial, std::optional<RiskLevel> followup) {
    if (initial == RiskLevel::None)
        throw std::invalid_argument("risk_transition requires an initial risk of Low or above");
    if (!followup) return Transition::Inaccessible;
    if (*followup > initial) return Transition::Up;
    if (*followup < initial) return Transition::Down;
    return Transition::Same;
}

}  // namespace aipse::risk
