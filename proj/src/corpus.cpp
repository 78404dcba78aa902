#include "aipse/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>

#include "aipse/errors.hpp"

namespace aipse::corpus {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string collapse_ws(const std::string& s) {
    std::string out;
    bool pending = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending = !out.empty();
            continue;
        }
        if (pending) out += ' ';
        pending = false;
        out += c;
    }
    return out;
}

std::size_t ifind(const std::string& text, std::string_view needle, std::size_t from = 0) {
    auto it = std::search(text.begin() + static_cast<std::ptrdiff_t>(std::min(from, text.size())),
                          text.end(), needle.begin(), needle.end(), [](char a, char b) {
                              return std::tolower(static_cast<unsigned char>(a)) ==
                                     std::tolower(static_cast<unsigned char>(b));
                          });
    return it == text.end() ? std::string::npos : static_cast<std::size_t>(it - text.begin());
}

std::string strip_tags(const std::string& s) {
    std::string out;
    bool in_tag = false;
    for (char c : s) {
        if (c == '<')
            in_tag = true;
        else if (c == '>')
            in_tag = false;
        else if (!in_tag)
            out += c;
    }
    return out;
}

// Value of attr="..." / attr='...' / attr=bare inside a tag body.
std::optional<std::string> attr_value(const std::string& tag, std::string_view attr) {
    std::size_t from = 0;
    while (true) {
        auto at = ifind(tag, attr, from);
        if (at == std::string::npos) return std::nullopt;
        // Must be a standalone attribute name.
        bool word_start = at == 0 || !std::isalnum(static_cast<unsigned char>(tag[at - 1]));
        auto after = at + attr.size();
        auto eq = tag.find_first_not_of(" \t\r\n", after);
        if (!word_start || eq == std::string::npos || tag[eq] != '=') {
            from = at + 1;
            continue;
        }
        auto vstart = tag.find_first_not_of(" \t\r\n", eq + 1);
        if (vstart == std::string::npos) return std::nullopt;
        if (tag[vstart] == '"' || tag[vstart] == '\'') {
            auto close = tag.find(tag[vstart], vstart + 1);
            if (close == std::string::npos) return tag.substr(vstart + 1);
            return tag.substr(vstart + 1, close - vstart - 1);
        }
        auto vend = tag.find_first_of(" \t\r\n>", vstart);
        return tag.substr(vstart, vend == std::string::npos ? std::string::npos : vend - vstart);
    }
}

}  // namespace

std::string_view to_string(SiteCategory c) {
    switch (c) {
        case SiteCategory::CloudStorage: return "CloudStorage";
        case SiteCategory::UrlShortener: return "UrlShortener";
        case SiteCategory::DomainMarketplace: return "DomainMarketplace";
        case SiteCategory::Other: return "Other";
    }
    return "Other";
}

std::optional<SiteCategory> category_from_string(std::string_view text) {
    if (text == "CloudStorage") return SiteCategory::CloudStorage;
    if (text == "UrlShortener") return SiteCategory::UrlShortener;
    if (text == "DomainMarketplace") return SiteCategory::DomainMarketplace;
    if (text == "Other") return SiteCategory::Other;
    return std::nullopt;
}

BlocklistConfig BlocklistConfig::defaults() {
    BlocklistConfig cfg;
    // Keep in sync with assets/config/irrelevant_keywords.txt; a test pins
    // both against the recorded checksum.
    cfg.irrelevant_keywords = {
        "check", "com", "come", "congratulations", "default", "description", "domain", "en",
        "enter", "error", "expired", "found", "google", "hello", "hello world", "here", "host",
        "http", "index", "keywords", "license", "loading", "lost modified", "meta", "missing",
        "name", "nan", "net", "newtab", "nginx", "not", "ok", "our", "page", "portal", "print",
        "redirect", "see", "site", "site created successfully", "soon", "this", "url", "webpage",
        "website", "welcome",
    };
    return cfg;
}

std::set<std::string> BlocklistConfig::load_keywords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open keyword blocklist: " + path);
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        auto term = to_lower(trim(line));
        if (!term.empty()) out.insert(term);
    }
    return out;
}

FilterDecision filter_candidate(const CandidateSite& site, const BlocklistConfig& cfg) {
    if (site.probe.status_code != 200)
        return FilterDecision::drop("status:" + std::to_string(site.probe.status_code));
    if (!site.probe.cert_valid) return FilterDecision::drop("certificate");
    if (site.category && cfg.excluded_categories.count(*site.category))
        return FilterDecision::drop("category:" + std::string(to_string(*site.category)));
    return FilterDecision::keep();
}

FilterDecision filter_keywords(const std::vector<std::string>& keywords,
                               const BlocklistConfig& cfg) {
    if (keywords.size() != 5)
        throw ArityError("keyword list must have exactly 5 entries, got " +
                         std::to_string(keywords.size()));
    for (const auto& kw : keywords) {
        auto token = to_lower(trim(kw));
        if (cfg.irrelevant_keywords.count(token)) return FilterDecision::drop(token);
    }
    return FilterDecision::keep();
}

std::string extract_site_fields(const std::string& html) {
    static constexpr std::array<std::string_view, 4> kTextTags{"title", "h1", "h2", "h3"};

    std::string out;
    auto append = [&](const std::string& piece) {
        auto cleaned = collapse_ws(piece);
        if (cleaned.empty()) return;
        if (!out.empty()) out += '\n';
        out += cleaned;
    };

    std::size_t pos = 0;
    while (pos < html.size()) {
        auto lt = html.find('<', pos);
        if (lt == std::string::npos) break;
        auto gt = html.find('>', lt);
        if (gt == std::string::npos) break;
        auto tag = html.substr(lt + 1, gt - lt - 1);
        auto name_end = tag.find_first_of(" \t\r\n/");
        auto name = to_lower(tag.substr(0, name_end));

        bool matched = false;
        for (auto t : kTextTags) {
            if (name != t) continue;
            matched = true;
            auto close = ifind(html, "</" + std::string(t), gt + 1);
            if (close == std::string::npos) {
                pos = gt + 1;
                break;
            }
            append(strip_tags(html.substr(gt + 1, close - gt - 1)));
            pos = close + 1;
            break;
        }
        if (matched) continue;

        if (name == "meta") {
            auto content = attr_value(tag, "content");
            if (content) {
                auto key = attr_value(tag, "name");
                append(key ? *key + ": " + *content : *content);
            }
        }
        pos = gt + 1;
    }
    return out;
}

CategoryConfig CategoryConfig::defaults() {
    return {
        {"drive.google.com", "dropbox.com", "mega.nz", "onedrive.live.com", "box.com",
         "mediafire.com"},
        {"bit.ly", "tinyurl.com", "t.co", "goo.gl", "is.gd", "ow.ly"},
        {"sedo.com", "afternic.com", "dan.com", "hugedomains.com", "godaddy.com"},
    };
}

namespace {

bool in_domain_set(const std::string& host, const std::set<std::string>& domains) {
    auto h = host.rfind("www.", 0) == 0 ? host.substr(4) : host;
    if (domains.count(h)) return true;
    for (const auto& d : domains)
        if (h.size() > d.size() && h.compare(h.size() - d.size() - 1, 1, ".") == 0 &&
            h.compare(h.size() - d.size(), d.size(), d) == 0)
            return true;
    return false;
}

}  // namespace

SiteCategory classify_category(const std::string& host, const CategoryConfig& cfg) {
    auto h = to_lower(host);
    if (in_domain_set(h, cfg.cloud_storage)) return SiteCategory::CloudStorage;
    if (in_domain_set(h, cfg.url_shorteners)) return SiteCategory::UrlShortener;
    if (in_domain_set(h, cfg.domain_marketplaces)) return SiteCategory::DomainMarketplace;
    return SiteCategory::Other;
}

}  // namespace aipse::corpus
