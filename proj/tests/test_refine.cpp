#include <doctest.h>

#include <string>

#include "aipse/errors.hpp"
#include "aipse/prompts.hpp"
#include "aipse/refine.hpp"
#include "test_support.hpp"

using namespace aipse;
using namespace aipse::refine;

namespace {

// The reply the refinement backend is expected to produce for few-shot
// example N is exactly that example's Response section in the template.
std::string example_reply(int n) {
    std::string tpl(prompts::kRefineTemplate);
    auto heading = " Example " + std::to_string(n) + ":";
    auto at = tpl.find(heading);
    REQUIRE(at != std::string::npos);
    auto response = tpl.find("**Response:**", at);
    REQUIRE(response != std::string::npos);
    auto begin = response + std::string("**Response:**").size();
    auto end = tpl.find("---", begin);
    if (auto turn = tpl.find("It's your turn:", begin);
        turn != std::string::npos && (end == std::string::npos || turn < end))
        end = turn;
    REQUIRE(end != std::string::npos);
    return tpl.substr(begin, end - begin);
}

}  // namespace

TEST_CASE("rendered refine prompt fills the tail slots") {
    auto prompt = render_refine_prompt({"http://x.example/a", "Some content."});
    CHECK(prompt.find("Determine Risk Case") != std::string::npos);
    CHECK(prompt.find("URL : http://x.example/a") != std::string::npos);
    CHECK(prompt.find("Content: Some content.") != std::string::npos);
    CHECK(prompt.find("{url}") == std::string::npos);
    CHECK(prompt.find("{content}") == std::string::npos);
    CHECK(prompt == render_refine_prompt({"http://x.example/a", "Some content."}));
}

TEST_CASE("example 1 reply parses as high-risk phishing, removed") {
    auto result = parse_refine_reply(example_reply(1));
    CHECK(result.risk_case == risk::RiskCase::Phishing);
    CHECK(result.level == risk::RiskLevel::High);
    CHECK(result.action_taken == Action::Removed);
    CHECK(result.refined_text.find("The claim about free gift cards") == 0);
    CHECK(result.refined_text.find("trusted retailers") != std::string::npos);
}

TEST_CASE("example 2 reply parses as medium-risk fake news, warned") {
    auto result = parse_refine_reply(example_reply(2));
    CHECK(result.risk_case == risk::RiskCase::FakeNews);
    CHECK(result.level == risk::RiskLevel::Medium);
    CHECK(result.action_taken == Action::Warned);
    CHECK(result.refined_text.find("alien invasion is unsupported") != std::string::npos);
}

TEST_CASE("example 3 reply parses as low risk with no case, retained") {
    auto result = parse_refine_reply(example_reply(3));
    CHECK_FALSE(result.risk_case.has_value());
    CHECK(result.level == risk::RiskLevel::Low);
    CHECK(result.action_taken == Action::Retained);
    CHECK(result.refined_text ==
          "This website compiles open-access scientific papers for free download.");
}

TEST_CASE("a reply with no level keyword fails to parse, never defaults") {
    CHECK_THROWS_AS(parse_refine_reply("garbage"), ParseFailure);
    CHECK_THROWS_AS(parse_refine_reply(""), ParseFailure);
    CHECK_THROWS_AS(parse_refine_reply("Definitely safe content, nothing else."), ParseFailure);
}

TEST_CASE("level falls back to the whole reply when sections are missing") {
    auto result = parse_refine_reply("The result is High risk: credential phishing seen.");
    CHECK(result.level == risk::RiskLevel::High);
    CHECK(result.action_taken == Action::Removed);
}

TEST_CASE("refine drives the backend with the rendered prompt") {
    llm::ScriptedBackend backend({example_reply(1)});
    auto result = aipse::refine::refine({"http://phishing-site.example.com", "free gift cards"}, backend);
    CHECK(result.level == risk::RiskLevel::High);
    CHECK(result.risk_case == risk::RiskCase::Phishing);
    CHECK(result.raw_response == example_reply(1));

    REQUIRE(backend.sent_prompts().size() == 1);
    const auto& sent = backend.sent_prompts()[0];
    CHECK(sent.find("URL : http://phishing-site.example.com") != std::string::npos);
    CHECK(sent.find("Content: free gift cards") != std::string::npos);
}

TEST_CASE("backend failures surface as ToolFailure") {
    llm::ScriptedBackend exhausted(std::vector<std::string>{});
    CHECK_THROWS_AS(aipse::refine::refine({"http://x.example", "content"}, exhausted), ToolFailure);
    llm::ScriptedBackend ok({example_reply(1)});
    CHECK_THROWS_AS(aipse::refine::refine({"", ""}, ok), ToolFailure);
}

TEST_CASE("deterministic end to end with the scripted mock") {
    auto run = [&] {
        llm::ScriptedBackend backend({example_reply(2)});
        auto r = aipse::refine::refine({"http://example-fakenews.com", "aliens next week"}, backend);
        return r.raw_response + "|" + std::string(risk::to_string(r.level)) + "|" +
               std::string(to_string(r.action_taken)) + "|" + r.refined_text;
    };
    CHECK(run() == run());
}
