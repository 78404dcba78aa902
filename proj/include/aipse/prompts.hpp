#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace aipse::prompts {

inline constexpr int kTemplateVersion = 1;

// Raw template assets (see prompt_assets.cpp). Slots use {name} syntax.
extern const std::string_view kReactTemplate;            // {tools} {tool_names} {input} {agent_scratchpad}
extern const std::string_view kAgentInstructionTemplate; // {query} {reponse}  (slot spelling is part of the asset)
extern const std::string_view kRefineTemplate;           // {url} {content}
extern const std::string_view kKeywordExtractionSystem;
extern const std::string_view kKeywordExtractionUserTemplate;  // {website_info}
extern const std::string_view kNlQueryTemplate;                // {keywords list}

// Single-pass slot substitution: every "{name}" with a mapping is replaced
// once; unknown braces (including the literal "{{" in the react template)
// pass through untouched. Substituted values are never rescanned.
std::string render_slots(std::string_view tpl, const std::map<std::string, std::string>& slots);

struct ChatPrompt {
    std::string system;
    std::string user;
};

ChatPrompt render_keyword_extraction_prompt(const std::string& website_info);

// Comma-joins the keywords into the query-generation template.
// Throws ArityError unless exactly 5 keywords are given.
std::string render_nl_query_prompt(const std::vector<std::string>& keywords);

}  // namespace aipse::prompts
