#include "aipse/prompts.hpp"

#include "aipse/errors.hpp"

namespace aipse::prompts {

std::string render_slots(std::string_view tpl, const std::map<std::string, std::string>& slots) {
    std::string out;
    out.reserve(tpl.size());
    std::size_t pos = 0;
    while (pos < tpl.size()) {
        if (tpl[pos] != '{') {
            out += tpl[pos++];
            continue;
        }
        auto close = tpl.find('}', pos + 1);
        if (close == std::string_view::npos) {
            out += tpl.substr(pos);
            break;
        }
        auto name = std::string(tpl.substr(pos + 1, close - pos - 1));
        auto it = slots.find(name);
        if (it == slots.end()) {
            out += '{';
            ++pos;
            continue;
        }
        out += it->second;
        pos = close + 1;
    }
    return out;
}

ChatPrompt render_keyword_extraction_prompt(const std::string& website_info) {
    return {std::string(kKeywordExtractionSystem),
            render_slots(kKeywordExtractionUserTemplate, {{"website_info", website_info}})};
}

std::string render_nl_query_prompt(const std::vector<std::string>& keywords) {
    if (keywords.size() != 5)
        throw ArityError("natural-language query needs exactly 5 keywords, got " +
                         std::to_string(keywords.size()));
    std::string joined;
    for (std::size_t i = 0; i < keywords.size(); ++i) {
        if (i) joined += ", ";
        joined += keywords[i];
    }
    return render_slots(kNlQueryTemplate, {{"keywords list", joined}});
}

}  // namespace aipse::prompts
