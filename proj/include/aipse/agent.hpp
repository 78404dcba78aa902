#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aipse/features.hpp"
#include "aipse/gbdt.hpp"
#include "aipse/llm_backend.hpp"
#include "aipse/risk.hpp"

namespace aipse::agent {

inline constexpr std::string_view kRefineToolName = "Content Refinement";
inline constexpr std::string_view kUrlDetectorToolName = "URL Detector";

struct ToolDescriptor {
    std::string name;
    std::string description;
    // Receives the parsed action_input; returns the observation text.
    // Failures are reported by throwing (ToolFailure, ParseFailure, ...).
    std::function<std::string(const nlohmann::json&)> invoke;
};

class ToolRegistry {
public:
    void add(ToolDescriptor tool);  // names must be unique
    const ToolDescriptor* find(const std::string& name) const;
    bool empty() const { return tools_.empty(); }

    // "Name: description" lines for the {tools} slot, registration order.
    std::string tools_block() const;
    // Comma-joined names for {tool_names}.
    std::string names_csv() const;

private:
    std::vector<ToolDescriptor> tools_;
};

struct AgentAction {
    std::string name;
    nlohmann::json input;
};

// One thought/action/observation turn. Terminal replies set the
// transcript's final_answer instead of appending a step.
struct AgentStep {
    std::string thought;
    std::optional<AgentAction> action;
    std::optional<std::string> observation;
};

struct AgentTranscript {
    std::string instruction;
    std::vector<AgentStep> steps;
    std::optional<std::string> final_answer;
    std::map<std::string, int> tool_failures;
    std::vector<std::string> safe_urls;  // detector verdicts of "legitimate"
};

struct AgentConfig {
    int max_iterations = 8;
    int max_tool_failures = 3;
};

// Result of parsing one LLM reply: either a dispatchable action or the
// final answer.
struct ParsedReply {
    std::string thought;
    std::optional<AgentAction> action;
    std::optional<std::string> final_answer;
};

// Extracts the first JSON action blob, or the "Final Answer:" text.
// Throws BadAction for an unregistered tool name or a list of actions,
// BadFormat when the reply has neither a blob nor a final answer.
ParsedReply parse_llm_step(const std::string& reply, const ToolRegistry& registry);

// {tools}/{tool_names}/{input}/{agent_scratchpad} into the loop template.
std::string render_react_prompt(const ToolRegistry& registry, const std::string& input,
                                const std::string& scratchpad);

// Stable text form of a response for the {reponse} slot.
std::string format_response(const risk::AipseResponse& response);

// Fills the agent-instruction template with the query and formatted response.
std::string render_instruction(const std::string& query, const risk::AipseResponse& response);

// The thought/action/observation loop. Stops on a final answer; after
// max_iterations LLM calls, or once any tool has failed max_tool_failures
// times, a directive observation asks for a final answer from known
// knowledge (with the accumulated safe-URL list) and exactly one more LLM
// call is made. Never exceeds max_iterations + 1 calls.
AgentTranscript run_agent(const std::string& query, const risk::AipseResponse& response,
                          llm::LlmBackend& backend, const ToolRegistry& registry,
                          const AgentConfig& cfg = AgentConfig{});

void write_transcript(const AgentTranscript& t, std::ostream& out);

// Default tools. The refine tool shares the agent's backend in live use;
// tests may hand it a separate scripted backend.
ToolDescriptor make_refine_tool(llm::LlmBackend& backend);
ToolDescriptor make_url_detector_tool(std::shared_ptr<const gbdt::GbdtModel> model,
                                      std::shared_ptr<url::EvidenceProvider> evidence,
                                      url::FeatureConfig cfg = url::FeatureConfig{});

}  // namespace aipse::agent
