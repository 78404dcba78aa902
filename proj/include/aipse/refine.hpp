#pragma once

#include <optional>
#include <string>

#include "aipse/llm_backend.hpp"
#include "aipse/risk.hpp"

namespace aipse::refine {

struct RefineRequest {
    std::string url;
    std::string content;
};

enum class Action { Removed, Warned, Retained };

std::string_view to_string(Action a);

struct RefineResult {
    std::optional<risk::RiskCase> risk_case;  // empty when no category matched
    risk::RiskLevel level = risk::RiskLevel::None;
    Action action_taken = Action::Retained;
    std::string refined_text;
    std::string raw_response;
};

// Fills the {url}/{content} slots of the refinement template. Each slot is
// substituted exactly once; the result is byte-stable for equal inputs.
std::string render_refine_prompt(const RefineRequest& req);

// Keyword/section parse of a refinement reply:
//   risk case  = first of the 7 case names in the "Definition Matching" section
//   level      = first level keyword in the "Level Matching" section,
//                falling back to the whole reply
//   refined_text = contents of the fenced block after "Output"
//   action     = Removed for High, Warned for Medium, Retained otherwise
// Throws ParseFailure when no level keyword occurs anywhere; the parser
// never substitutes a default verdict.
RefineResult parse_refine_reply(const std::string& reply);

// Renders the prompt, queries the backend, parses the reply. Backend errors
// surface as ToolFailure so the agent's retry logic can react.
RefineResult refine(const RefineRequest& req, llm::LlmBackend& backend);

}  // namespace aipse::refine
