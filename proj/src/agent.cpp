#include "aipse/agent.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

#include "aipse/errors.hpp"
#include "aipse/prompts.hpp"
#include "aipse/refine.hpp"
#include "aipse/url_record.hpp"

namespace aipse::agent {

namespace {

constexpr std::string_view kFinalAnswerMarker = "Final Answer:";

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Balanced JSON value starting at `open` ('{' or '['), respecting strings.
std::optional<std::string> balanced_json(const std::string& text, std::size_t open) {
    char open_ch = text[open];
    char close_ch = open_ch == '{' ? '}' : ']';
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\')
                ++i;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == open_ch) {
            ++depth;
        } else if (c == close_ch) {
            if (--depth == 0) return text.substr(open, i - open + 1);
        }
    }
    return std::nullopt;
}

bool looks_like_action_list(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) return false;
    return std::all_of(j.begin(), j.end(),
                       [](const auto& e) { return e.is_object() && e.contains("action"); });
}

std::string thought_before(const std::string& reply, std::size_t cut) {
    auto text = reply.substr(0, cut);
    if (auto at = text.find("Thought:"); at != std::string::npos) text = text.substr(at + 8);
    if (auto at = text.find("Action:"); at != std::string::npos) text = text.substr(0, at);
    while (!text.empty() && (text.back() == '"' || text.back() == '`')) text.pop_back();
    return trim(text);
}

}  // namespace

void ToolRegistry::add(ToolDescriptor tool) {
    if (find(tool.name)) throw InvalidConfig("duplicate tool name: " + tool.name);
    tools_.push_back(std::move(tool));
}

const ToolDescriptor* ToolRegistry::find(const std::string& name) const {
    for (const auto& t : tools_)
        if (t.name == name) return &t;
    return nullptr;
}

std::string ToolRegistry::tools_block() const {
    std::string out;
    for (const auto& t : tools_) {
        if (!out.empty()) out += "\n";
        out += t.name + ": " + t.description;
    }
    return out;
}

std::string ToolRegistry::names_csv() const {
    std::string out;
    for (const auto& t : tools_) {
        if (!out.empty()) out += ", ";
        out += t.name;
    }
    return out;
}

ParsedReply parse_llm_step(const std::string& reply, const ToolRegistry& registry) {
    auto final_at = reply.find(kFinalAnswerMarker);

    // The first parseable blob wins, unless a final-answer marker comes
    // before it.
    for (std::size_t i = 0; i < reply.size(); ++i) {
        if (reply[i] != '{' && reply[i] != '[') continue;
        if (final_at != std::string::npos && final_at < i) break;
        auto blob = balanced_json(reply, i);
        if (!blob) continue;
        nlohmann::json parsed = nlohmann::json::parse(*blob, nullptr, false);
        if (parsed.is_discarded()) continue;

        if (looks_like_action_list(parsed))
            throw BadAction("blob contains a list of actions; a single action is required");
        if (!parsed.is_object() || !parsed.contains("action")) continue;

        auto name = parsed["action"].is_string() ? parsed["action"].get<std::string>()
                                                 : parsed["action"].dump();
        if (!registry.find(name)) throw BadAction("unknown tool name: " + name);

        ParsedReply out;
        out.thought = thought_before(reply, i);
        out.action = AgentAction{name, parsed.value("action_input", nlohmann::json::object())};
        return out;
    }

    if (final_at != std::string::npos) {
        ParsedReply out;
        out.thought = thought_before(reply, final_at);
        out.final_answer = trim(reply.substr(final_at + kFinalAnswerMarker.size()));
        return out;
    }
    throw BadFormat("reply has neither an action blob nor a final answer");
}

std::string render_react_prompt(const ToolRegistry& registry, const std::string& input,
                                const std::string& scratchpad) {
    return prompts::render_slots(prompts::kReactTemplate,
                                 {{"tools", registry.tools_block()},
                                  {"tool_names", registry.names_csv()},
                                  {"input", input},
                                  {"agent_scratchpad", scratchpad}});
}

std::string format_response(const risk::AipseResponse& response) {
    auto join = [](const std::vector<std::string>& urls) {
        if (urls.empty()) return std::string("(none)");
        std::string out;
        for (std::size_t i = 0; i < urls.size(); ++i) {
            if (i) out += ", ";
            out += urls[i];
        }
        return out;
    };
    return "Answer: " + response.answer + "\nReferences: " + join(response.references) +
           "\nSources: " + join(response.sources);
}

std::string render_instruction(const std::string& query, const risk::AipseResponse& response) {
    return prompts::render_slots(prompts::kAgentInstructionTemplate,
                                 {{"query", query}, {"reponse", format_response(response)}});
}

namespace {

void collect_safe_urls(const std::string& observation, std::vector<std::string>& safe) {
    auto parsed = nlohmann::json::parse(observation, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_array()) return;
    for (const auto& entry : parsed) {
        if (!entry.is_object() || entry.value("verdict", "") != "legitimate") continue;
        auto u = entry.value("url", "");
        if (!u.empty() && std::find(safe.begin(), safe.end(), u) == safe.end())
            safe.push_back(u);
    }
}

std::string forced_final_directive(const std::vector<std::string>& safe_urls) {
    std::string list = safe_urls.empty() ? "(none)" : "";
    for (std::size_t i = 0; i < safe_urls.size(); ++i) {
        if (i) list += ", ";
        list += safe_urls[i];
    }
    return "Tools are no longer available. Based on the known knowledge collected so far, "
           "produce the final answer now, starting with \"Final Answer:\". "
           "List out all safe URLs. Known safe URLs: " +
           list;
}

}  // namespace

AgentTranscript run_agent(const std::string& query, const risk::AipseResponse& response,
                          llm::LlmBackend& backend, const ToolRegistry& registry,
                          const AgentConfig& cfg) {
    if (!registry.find(std::string(kRefineToolName)) ||
        !registry.find(std::string(kUrlDetectorToolName)))
        throw InvalidConfig("registry must contain the two default tools");

    AgentTranscript t;
    t.instruction = render_instruction(query, response);

    std::string scratchpad;
    int llm_calls = 0;
    bool force_final = false;

    while (!force_final && llm_calls < cfg.max_iterations) {
        auto prompt = render_react_prompt(registry, t.instruction, scratchpad);
        auto reply = backend.send(prompt);
        ++llm_calls;

        ParsedReply parsed;
        try {
            parsed = parse_llm_step(reply, registry);
        } catch (const Error& e) {
            scratchpad += reply + "\nObservation: Invalid action: " + e.what() +
                          ". Respond with a single valid $JSON_BLOB or a Final Answer." +
                          "\nThought: ";
            continue;
        }

        if (parsed.final_answer) {
            t.final_answer = parsed.final_answer;
            return t;
        }

        AgentStep step;
        step.thought = parsed.thought;
        step.action = parsed.action;

        const auto* tool = registry.find(parsed.action->name);
        std::string observation;
        try {
            observation = tool->invoke(parsed.action->input);
            if (parsed.action->name == kUrlDetectorToolName)
                collect_safe_urls(observation, t.safe_urls);
        } catch (const Error& e) {
            observation = std::string("Error: ") + e.what();
            if (++t.tool_failures[parsed.action->name] >= cfg.max_tool_failures)
                force_final = true;
        }
        step.observation = observation;
        t.steps.push_back(std::move(step));

        scratchpad += reply + "\nObservation: " + observation + "\nThought: ";
    }

    // Out of iterations or a tool kept failing: one closing call with the
    // known-knowledge directive injected as an observation.
    scratchpad += "Observation: " + forced_final_directive(t.safe_urls) + "\nThought: ";
    auto reply = backend.send(render_react_prompt(registry, t.instruction, scratchpad));
    if (auto at = reply.find(kFinalAnswerMarker); at != std::string::npos)
        t.final_answer = trim(reply.substr(at + kFinalAnswerMarker.size()));
    return t;
}

void write_transcript(const AgentTranscript& t, std::ostream& out) {
    out << "=== instruction ===\n" << t.instruction << "\n";
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto& s = t.steps[i];
        out << "=== step " << (i + 1) << " ===\n";
        out << "Thought: " << s.thought << "\n";
        if (s.action) {
            out << "Action: " << s.action->name << "\n";
            out << "Action input: " << s.action->input.dump() << "\n";
        }
        if (s.observation) out << "Observation: " << *s.observation << "\n";
    }
    for (const auto& [name, count] : t.tool_failures)
        out << "=== tool failures: " << name << " x" << count << " ===\n";
    out << "=== final ===\n";
    out << (t.final_answer ? *t.final_answer : "(no final answer)") << "\n";
}

ToolDescriptor make_refine_tool(llm::LlmBackend& backend) {
    ToolDescriptor tool;
    tool.name = std::string(kRefineToolName);
    tool.description =
        "Refines answer text against the seven predefined risk cases and returns "
        "risk-annotated, safer content. action_input keys: url (string), content (string).";
    tool.invoke = [&backend](const nlohmann::json& input) {
        if (!input.is_object() || !input.contains("content"))
            throw ToolFailure("Content Refinement needs a 'content' parameter");
        refine::RefineRequest req;
        req.content = input["content"].is_string() ? input["content"].get<std::string>()
                                                   : input["content"].dump();
        req.url = input.value("url", std::string{});
        if (req.url.empty()) req.url = "(none)";
        auto result = refine::refine(req, backend);
        return result.raw_response;
    };
    return tool;
}

ToolDescriptor make_url_detector_tool(std::shared_ptr<const gbdt::GbdtModel> model,
                                      std::shared_ptr<url::EvidenceProvider> evidence,
                                      url::FeatureConfig cfg) {
    ToolDescriptor tool;
    tool.name = std::string(kUrlDetectorToolName);
    tool.description =
        "Classifies each URL in a list as phishing or legitimate with a trained URL-feature "
        "model. action_input keys: urls (list of URL strings).";
    tool.invoke = [model = std::move(model), evidence = std::move(evidence),
                   cfg = std::move(cfg)](const nlohmann::json& input) {
        nlohmann::json urls;
        if (input.is_array())
            urls = input;
        else if (input.is_object() && input.contains("urls"))
            urls = input["urls"];
        else if (input.is_object() && input.contains("url"))
            urls = nlohmann::json::array({input["url"]});
        else
            throw ToolFailure("URL Detector needs a 'urls' list");

        nlohmann::json results = nlohmann::json::array();
        for (const auto& item : urls) {
            auto raw = item.is_string() ? item.get<std::string>() : item.dump();
            nlohmann::json entry{{"url", raw}};
            try {
                auto rec = url::parse_url(raw);
                auto ev = evidence->lookup(rec.host);
                auto proba = gbdt::predict_proba(*model, url::extract_all(rec, ev, cfg).to_doubles());
                char buf[16];
                std::snprintf(buf, sizeof(buf), "%.4f", proba);
                entry["probability"] = std::string(buf);
                entry["verdict"] = proba >= 0.5 ? "phishing" : "legitimate";
            } catch (const MalformedUrl&) {
                entry["verdict"] = "malformed";
            }
            results.push_back(std::move(entry));
        }
        return results.dump();
    };
    return tool;
}

}  // namespace aipse::agent
