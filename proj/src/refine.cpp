#include "aipse/refine.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "aipse/errors.hpp"
#include "aipse/prompts.hpp"

namespace aipse::refine {

namespace {

std::size_t ifind(const std::string& text, std::string_view needle, std::size_t from = 0) {
    auto it = std::search(text.begin() + static_cast<std::ptrdiff_t>(std::min(from, text.size())),
                          text.end(), needle.begin(), needle.end(), [](char a, char b) {
                              return std::tolower(static_cast<unsigned char>(a)) ==
                                     std::tolower(static_cast<unsigned char>(b));
                          });
    return it == text.end() ? std::string::npos : static_cast<std::size_t>(it - text.begin());
}

// Body of the section introduced by `heading`, ending at the nearest of the
// other known headings. npos start means the section is absent.
std::string section(const std::string& reply, std::string_view heading) {
    static constexpr std::array<std::string_view, 4> kHeadings{
        "definition matching", "indicator matching", "level matching", "output"};
    auto start = ifind(reply, heading);
    if (start == std::string::npos) return {};
    start += heading.size();
    auto end = reply.size();
    for (auto other : kHeadings) {
        if (other == heading) continue;
        auto at = ifind(reply, other, start);
        if (at != std::string::npos) end = std::min(end, at);
    }
    return reply.substr(start, end - start);
}

bool word_at(const std::string& text, std::size_t pos, std::size_t len) {
    auto alpha = [&](std::size_t i) {
        return i < text.size() && std::isalpha(static_cast<unsigned char>(text[i])) != 0;
    };
    return !(pos > 0 && alpha(pos - 1)) && !alpha(pos + len);
}

std::optional<risk::RiskCase> first_case_name(const std::string& text) {
    static constexpr std::array<std::pair<std::string_view, risk::RiskCase>, 7> kCases{{
        {"phishing", risk::RiskCase::Phishing},
        {"malware", risk::RiskCase::Malware},
        {"scam", risk::RiskCase::Scam},
        {"adware", risk::RiskCase::Adware},
        {"fake news", risk::RiskCase::FakeNews},
        {"illegal content", risk::RiskCase::IllegalContent},
        {"piracy", risk::RiskCase::Piracy},
    }};
    std::size_t best = std::string::npos;
    std::optional<risk::RiskCase> out;
    for (const auto& [name, value] : kCases) {
        auto at = ifind(text, name);
        if (at != std::string::npos && at < best) {
            best = at;
            out = value;
        }
    }
    return out;
}

std::optional<risk::RiskLevel> first_level_keyword(const std::string& text) {
    static constexpr std::array<std::pair<std::string_view, risk::RiskLevel>, 4> kLevels{{
        {"high", risk::RiskLevel::High},
        {"medium", risk::RiskLevel::Medium},
        {"low", risk::RiskLevel::Low},
        {"none", risk::RiskLevel::None},
    }};
    std::size_t best = std::string::npos;
    std::optional<risk::RiskLevel> out;
    for (const auto& [word, value] : kLevels) {
        std::size_t from = 0;
        while (true) {
            auto at = ifind(text, word, from);
            if (at == std::string::npos) break;
            if (word_at(text, at, word.size())) {
                if (at < best) {
                    best = at;
                    out = value;
                }
                break;
            }
            from = at + 1;
        }
    }
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Fenced block after the last "Output" heading; falls back to the raw tail
// when the reply skipped the fences.
std::string output_block(const std::string& reply) {
    std::size_t heading = std::string::npos;
    for (auto at = ifind(reply, "output"); at != std::string::npos;
         at = ifind(reply, "output", at + 1))
        heading = at;
    if (heading == std::string::npos) return {};

    auto open = reply.find("```", heading);
    if (open == std::string::npos) {
        auto line_end = reply.find('\n', heading);
        return line_end == std::string::npos ? std::string{} : trim(reply.substr(line_end + 1));
    }
    auto body = open + 3;
    auto close = reply.find("```", body);
    return trim(close == std::string::npos ? reply.substr(body)
                                           : reply.substr(body, close - body));
}

Action action_for(risk::RiskLevel level) {
    switch (level) {
        case risk::RiskLevel::High: return Action::Removed;
        case risk::RiskLevel::Medium: return Action::Warned;
        default: return Action::Retained;
    }
}

}  // namespace

std::string_view to_string(Action a) {
    switch (a) {
        case Action::Removed: return "Removed";
        case Action::Warned: return "Warned";
        case Action::Retained: return "Retained";
    }
    return "Retained";
}

std::string render_refine_prompt(const RefineRequest& req) {
    return prompts::render_slots(prompts::kRefineTemplate,
                                 {{"url", req.url}, {"content", req.content}});
}

RefineResult parse_refine_reply(const std::string& reply) {
    RefineResult result;
    result.raw_response = reply;

    auto level = first_level_keyword(section(reply, "level matching"));
    if (!level) level = first_level_keyword(reply);
    if (!level) throw ParseFailure("no risk-level keyword in reply");
    result.level = *level;

    result.risk_case = first_case_name(section(reply, "definition matching"));
    result.refined_text = output_block(reply);
    result.action_taken = action_for(result.level);
    return result;
}

RefineResult refine(const RefineRequest& req, llm::LlmBackend& backend) {
    if (req.url.empty() || req.content.empty())
        throw ToolFailure("refine request needs both url and content");
    std::string reply;
    try {
        reply = backend.send(render_refine_prompt(req));
    } catch (const Error& e) {
        throw ToolFailure(std::string("refinement backend failed: ") + e.what());
    }
    return parse_refine_reply(reply);
}

}  // namespace aipse::refine
