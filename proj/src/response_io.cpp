#include "aipse/response_io.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "aipse/errors.hpp"
#include "aipse/url_record.hpp"

namespace aipse::risk {

namespace {

QueryKind query_kind_from(const std::string& text) {
    if (text == "url") return QueryKind::Url;
    if (text == "natural") return QueryKind::NaturalLanguage;
    return QueryKind::KeywordList;
}

std::string query_kind_to(QueryKind kind) {
    switch (kind) {
        case QueryKind::Url: return "url";
        case QueryKind::NaturalLanguage: return "natural";
        case QueryKind::KeywordList: return "keyword";
    }
    return "keyword";
}

}  // namespace

LabeledResponse load_labeled_response(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open response file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw Error("response file is not a JSON object: " + path);

    LabeledResponse lr;
    const nlohmann::json& resp = doc.contains("response") ? doc["response"] : doc;
    lr.response.answer = resp.value("answer", "");
    for (const auto& u : resp.value("references", nlohmann::json::array()))
        lr.response.references.push_back(u.get<std::string>());
    for (const auto& u : resp.value("sources", nlohmann::json::array()))
        lr.response.sources.push_back(u.get<std::string>());
    for (const auto& u : resp.value("warnings", nlohmann::json::array()))
        lr.response.warnings.insert(u.get<std::string>());

    if (doc.contains("query")) {
        const auto& q = doc["query"];
        lr.query.kind = query_kind_from(q.value("kind", "keyword"));
        lr.query.text = q.value("text", "");
        if (q.contains("keywords")) {
            std::vector<std::string> kws;
            for (const auto& k : q["keywords"]) kws.push_back(k.get<std::string>());
            lr.query.keywords = std::move(kws);
        }
    }
    if (lr.query.keywords && lr.query.keywords->size() != 5)
        throw Error("keyword query must carry exactly 5 keywords: " + path);
    if (lr.query.kind == QueryKind::Url) url::parse_url(lr.query.text);

    if (doc.contains("labels")) {
        for (const auto& [u, label] : doc["labels"].items()) {
            lr.labels[u] = {label.value("malicious", false), label.value("warned", false)};
        }
    }
    return lr;
}

void save_labeled_response(const LabeledResponse& lr, const std::string& path) {
    nlohmann::json doc;
    doc["query"] = {{"kind", query_kind_to(lr.query.kind)}, {"text", lr.query.text}};
    if (lr.query.keywords) doc["query"]["keywords"] = *lr.query.keywords;
    doc["response"] = {{"answer", lr.response.answer},
                       {"references", lr.response.references},
                       {"sources", lr.response.sources},
                       {"warnings", std::vector<std::string>(lr.response.warnings.begin(),
                                                             lr.response.warnings.end())}};
    doc["labels"] = nlohmann::json::object();
    for (const auto& [u, label] : lr.labels)
        doc["labels"][u] = {{"malicious", label.malicious}, {"warned", label.warned}};

    std::ofstream out(path);
    if (!out) throw Error("cannot write response file: " + path);
    out << doc.dump(2) << "\n";
}

RiskLevel labeled_query_risk(const LabeledResponse& lr) {
    const auto& r = lr.response;
    std::vector<RiskLevel> levels;
    for (const auto& [u, label] : lr.labels) {
        bool cited = std::find(r.references.begin(), r.references.end(), u) != r.references.end();
        bool in_sources = std::find(r.sources.begin(), r.sources.end(), u) != r.sources.end();
        bool warned = label.warned || r.warnings.count(u) > 0;
        levels.push_back(classify_url_risk(u, label.malicious, cited, warned, in_sources));
    }
    return aggregate_query_risk(levels);
}

}  // namespace aipse::risk
