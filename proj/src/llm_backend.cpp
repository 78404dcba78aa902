#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "aipse/llm_backend.hpp"

#include <cstdlib>
#include <fstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "aipse/errors.hpp"

namespace aipse::llm {

namespace {
constexpr const char* kReplyMarker = "--- reply ---";
}

ScriptedBackend::ScriptedBackend(std::vector<std::string> replies, bool cycle)
    : replies_(std::move(replies)), cycle_(cycle) {}

ScriptedBackend ScriptedBackend::from_script_file(const std::string& path, bool cycle) {
    std::ifstream in(path);
    if (!in) throw BackendUnavailable("cannot open mock script: " + path);
    std::vector<std::string> replies;
    std::string line;
    bool in_reply = false;
    std::string current;
    auto flush = [&] {
        if (!in_reply) return;
        if (!current.empty() && current.back() == '\n') current.pop_back();
        replies.push_back(current);
        current.clear();
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line == kReplyMarker) {
            flush();
            in_reply = true;
            continue;
        }
        if (in_reply) current += line + "\n";
    }
    flush();
    if (replies.empty()) throw BackendUnavailable("mock script has no replies: " + path);
    return ScriptedBackend(std::move(replies), cycle);
}

std::string ScriptedBackend::send(const std::string& prompt) {
    sent_prompts_.push_back(prompt);
    if (next_ >= replies_.size()) {
        if (!cycle_ || replies_.empty())
            throw BackendUnavailable("scripted backend exhausted after " +
                                     std::to_string(replies_.size()) + " replies");
        next_ = 0;
    }
    return replies_[next_++];
}

HttpChatBackend::HttpChatBackend(Options options) : options_(std::move(options)) {}

std::string HttpChatBackend::send(const std::string& prompt) {
    const char* key = std::getenv(options_.api_key_env.c_str());

    httplib::Client client(options_.endpoint);
    client.set_connection_timeout(options_.timeout_seconds);
    client.set_read_timeout(options_.timeout_seconds);

    httplib::Headers headers;
    if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);

    nlohmann::json body{
        {"model", options_.model},
        {"temperature", options_.temperature},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
    };

    auto res = client.Post(options_.path, headers, body.dump(), "application/json");
    if (!res)
        throw BackendUnavailable("no response from " + options_.endpoint + ": " +
                                 httplib::to_string(res.error()));
    if (res->status != 200)
        throw BackendUnavailable("backend returned HTTP " + std::to_string(res->status));

    try {
        auto parsed = nlohmann::json::parse(res->body);
        return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw BackendUnavailable(std::string("unexpected completion payload: ") + e.what());
    }
}

}  // namespace aipse::llm
