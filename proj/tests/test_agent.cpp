#include <doctest.h>

#include <memory>
#include <sstream>

#include "aipse/agent.hpp"
#include "aipse/errors.hpp"
#include "aipse/prompts.hpp"
#include "test_support.hpp"

using namespace aipse;
using namespace aipse::agent;

namespace {

std::string example_reply(int n) {
    std::string tpl(prompts::kRefineTemplate);
    auto heading = " Example " + std::to_string(n) + ":";
    auto at = tpl.find(heading);
    auto response = tpl.find("**Response:**", at);
    auto begin = response + std::string("**Response:**").size();
    auto end = tpl.find("---", begin);
    if (auto turn = tpl.find("It's your turn:", begin);
        turn != std::string::npos && (end == std::string::npos || turn < end))
        end = turn;
    return tpl.substr(begin, end - begin);
}

std::shared_ptr<const gbdt::GbdtModel> ip_stump_model() {
    auto m = std::make_shared<gbdt::GbdtModel>();
    m->feature_names.assign(url::kFeatureNames.begin(), url::kFeatureNames.end());
    m->base_score = 0.0;
    m->learning_rate = 1.0;
    m->n_rounds = 1;
    gbdt::Tree t;
    t.nodes.push_back({0, 0.5, 0.0, 1, 2});  // split on Have_IP
    t.nodes.push_back({-1, 0.0, -2.0, -1, -1});
    t.nodes.push_back({-1, 0.0, 2.0, -1, -1});
    m->trees.push_back(std::move(t));
    return m;
}

std::shared_ptr<url::EvidenceProvider> absent_evidence() {
    return std::make_shared<url::AbsentEvidenceProvider>(
        dates::Date{std::chrono::year{2025}, std::chrono::month{1}, std::chrono::day{15}});
}

ToolRegistry default_registry(llm::LlmBackend& refine_backend) {
    ToolRegistry registry;
    registry.add(make_refine_tool(refine_backend));
    registry.add(make_url_detector_tool(ip_stump_model(), absent_evidence()));
    return registry;
}

const std::string kRefineActionReply =
    "Thought: I will refine the content first.\n"
    "Action:\n\"\"\"\n"
    "{\"action\": \"Content Refinement\", \"action_input\": {\"url\": "
    "\"http://203.0.113.50/login\", \"content\": \"You can download LINE from "
    "http://203.0.113.50/login\"}}\n\"\"\"";

const std::string kDetectActionReply =
    "Thought: Now I will check each reference.\n"
    "Action:\n\"\"\"\n"
    "{\"action\": \"URL Detector\", \"action_input\": {\"urls\": "
    "[\"http://203.0.113.50/login\", \"https://play.google.com/store\"]}}\n\"\"\"";

const std::string kFinalReply =
    "Thought: I now know the final answer\n"
    "Final Answer: Use the official store instead. Safe URLs: https://play.google.com/store";

risk::AipseResponse sample_response() {
    risk::AipseResponse r;
    r.answer = "You can download LINE from http://203.0.113.50/login";
    r.references = {"http://203.0.113.50/login", "https://play.google.com/store"};
    r.sources = {"http://203.0.113.50/login", "https://play.google.com/store",
                 "http://unrelated.example/page"};
    return r;
}

}  // namespace

TEST_CASE("parse_llm_step handles actions, finals and malformed replies") {
    llm::ScriptedBackend refine_backend({example_reply(1)});
    auto registry = default_registry(refine_backend);

    SUBCASE("dispatchable action") {
        auto parsed = parse_llm_step(kDetectActionReply, registry);
        REQUIRE(parsed.action.has_value());
        CHECK(parsed.action->name == "URL Detector");
        CHECK(parsed.action->input["urls"].size() == 2);
        CHECK(parsed.thought == "Now I will check each reference.");
        CHECK_FALSE(parsed.final_answer.has_value());
    }
    SUBCASE("markdown fences work as well") {
        auto parsed = parse_llm_step("Thought: go\nAction:\n```json\n{\"action\": \"URL "
                                     "Detector\", \"action_input\": {\"urls\": []}}\n```",
                                     registry);
        REQUIRE(parsed.action.has_value());
        CHECK(parsed.action->name == "URL Detector");
    }
    SUBCASE("final answer") {
        auto parsed = parse_llm_step("Final Answer: done", registry);
        REQUIRE(parsed.final_answer.has_value());
        CHECK(*parsed.final_answer == "done");
    }
    SUBCASE("unknown tool is BadAction and is never invoked") {
        CHECK_THROWS_AS(parse_llm_step("Action:\n\"\"\"\n{\"action\": \"WebSearch\", "
                                       "\"action_input\": {}}\n\"\"\"",
                                       registry),
                        BadAction);
    }
    SUBCASE("a list of actions is BadAction") {
        CHECK_THROWS_AS(parse_llm_step("Action:\n\"\"\"\n[{\"action\": \"URL Detector\", "
                                       "\"action_input\": {}}, {\"action\": \"Content "
                                       "Refinement\", \"action_input\": {}}]\n\"\"\"",
                                       registry),
                        BadAction);
    }
    SUBCASE("neither blob nor final answer is BadFormat") {
        CHECK_THROWS_AS(parse_llm_step("I am not sure what to do.", registry), BadFormat);
    }
}

TEST_CASE("react prompt renders tools and ends with Thought: when fresh") {
    llm::ScriptedBackend refine_backend({example_reply(1)});
    auto registry = default_registry(refine_backend);

    auto prompt = render_react_prompt(registry, "INSTRUCTION", "");
    CHECK(prompt.find("Content Refinement: ") != std::string::npos);
    CHECK(prompt.find("URL Detector: ") != std::string::npos);
    CHECK(prompt.find("Content Refinement, URL Detector") != std::string::npos);
    CHECK(prompt.find("INSTRUCTION") != std::string::npos);
    CHECK(prompt.rfind("Thought:") == prompt.size() - 8);
}

TEST_CASE("instruction rendering fills query and response") {
    auto instruction = render_instruction("where to download LINE", sample_response());
    CHECK(instruction.find("The query is where to download LINE") != std::string::npos);
    CHECK(instruction.find("Answer: You can download LINE") != std::string::npos);
    CHECK(instruction.find("References: http://203.0.113.50/login, "
                           "https://play.google.com/store") != std::string::npos);
    CHECK(instruction.find("if no references is provided, then you can stop") !=
          std::string::npos);

    risk::AipseResponse bare;
    bare.answer = "plain";
    auto no_refs = render_instruction("q", bare);
    CHECK(no_refs.find("References: (none)") != std::string::npos);
    CHECK(no_refs.find("if no references is provided, then you can stop") != std::string::npos);
    CHECK(render_instruction("q", bare) == no_refs);
}

TEST_CASE("three-round refine/detect/final run is deterministic") {
    auto run_once = [&](AgentTranscript* out) {
        llm::ScriptedBackend agent_backend({kRefineActionReply, kDetectActionReply, kFinalReply});
        llm::ScriptedBackend refine_backend({example_reply(1)});
        auto registry = default_registry(refine_backend);
        auto t = run_agent("where to download LINE", sample_response(), agent_backend, registry);

        // Scratchpad growth: the second prompt repeats the first observation.
        REQUIRE(agent_backend.sent_prompts().size() == 3);
        CHECK(agent_backend.sent_prompts()[1].find(*t.steps[0].observation) !=
              std::string::npos);
        CHECK(agent_backend.sent_prompts()[2].find(*t.steps[1].observation) !=
              std::string::npos);

        if (out) *out = t;
        std::ostringstream text;
        write_transcript(t, text);
        return text.str();
    };

    AgentTranscript t;
    auto first = run_once(&t);

    REQUIRE(t.steps.size() == 2);
    CHECK(t.steps[0].action->name == "Content Refinement");
    CHECK(t.steps[1].action->name == "URL Detector");
    CHECK(t.steps[0].observation->find("Definition Matching") != std::string::npos);
    CHECK(t.steps[1].observation->find("\"verdict\":\"phishing\"") != std::string::npos);
    REQUIRE(t.final_answer.has_value());
    CHECK(*t.final_answer ==
          "Use the official store instead. Safe URLs: https://play.google.com/store");
    CHECK(t.safe_urls == std::vector<std::string>{"https://play.google.com/store"});
    CHECK(t.tool_failures.empty());

    CHECK(first == run_once(nullptr));  // byte-for-byte replay
}

TEST_CASE("repeated tool failures trigger the known-knowledge fallback") {
    llm::ScriptedBackend agent_backend(
        {kDetectActionReply, kDetectActionReply, kDetectActionReply, kFinalReply});
    llm::ScriptedBackend refine_backend({example_reply(1)});

    ToolRegistry registry;
    registry.add(make_refine_tool(refine_backend));
    ToolDescriptor broken;
    broken.name = std::string(kUrlDetectorToolName);
    broken.description = "always fails";
    broken.invoke = [](const nlohmann::json&) -> std::string {
        throw ToolFailure("detector offline");
    };
    registry.add(std::move(broken));

    auto t = run_agent("q", sample_response(), agent_backend, registry);
    CHECK(t.steps.size() == 3);
    CHECK(t.tool_failures.at("URL Detector") == 3);
    REQUIRE(t.final_answer.has_value());
    CHECK(agent_backend.remaining() == 0);
    // The closing prompt carried the forced-final directive.
    CHECK(agent_backend.sent_prompts().back().find("produce the final answer now") !=
          std::string::npos);
}

TEST_CASE("an agent that never finishes halts at the iteration cap") {
    llm::ScriptedBackend agent_backend({kRefineActionReply}, /*cycle=*/true);
    llm::ScriptedBackend refine_backend({example_reply(1)}, /*cycle=*/true);
    auto registry = default_registry(refine_backend);

    auto t = run_agent("q", sample_response(), agent_backend, registry);
    CHECK(t.steps.size() == 8);
    CHECK_FALSE(t.final_answer.has_value());
    CHECK(agent_backend.sent_prompts().size() == 9);  // 8 turns + forced final
}

TEST_CASE("malformed replies get an error observation, not a tool call") {
    llm::ScriptedBackend agent_backend({"no blob here at all", kFinalReply});
    llm::ScriptedBackend refine_backend({example_reply(1)});
    auto registry = default_registry(refine_backend);

    auto t = run_agent("q", sample_response(), agent_backend, registry);
    CHECK(t.steps.empty());
    REQUIRE(t.final_answer.has_value());
    CHECK(agent_backend.sent_prompts().size() == 2);
    CHECK(agent_backend.sent_prompts()[1].find("Invalid action") != std::string::npos);
}

TEST_CASE("run_agent requires both default tools") {
    llm::ScriptedBackend backend({kFinalReply});
    ToolRegistry registry;
    registry.add(make_refine_tool(backend));
    CHECK_THROWS_AS(run_agent("q", sample_response(), backend, registry), InvalidConfig);
}

TEST_CASE("detector tool reports per-URL verdicts and flags malformed input") {
    auto tool = make_url_detector_tool(ip_stump_model(), absent_evidence());
    auto obs = tool.invoke(nlohmann::json{{"urls", {"http://203.0.113.50/x", "not a url"}}});
    auto parsed = nlohmann::json::parse(obs);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0]["verdict"] == "phishing");
    CHECK(parsed[1]["verdict"] == "malformed");

    CHECK_THROWS_AS(tool.invoke(nlohmann::json{{"wrong", 1}}), ToolFailure);
}
