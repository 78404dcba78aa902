#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace aipse::llm {

// A blocking prompt -> completion interface. Implementations throw
// BackendUnavailable when no reply can be produced.
class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual std::string send(const std::string& prompt) = 0;
};

// Deterministic mock: replays a fixed queue of canned replies. With
// cycle=true the queue restarts instead of running dry (adversarial loops).
// Prompts are recorded for transcript assertions. Single consumer.
class ScriptedBackend : public LlmBackend {
public:
    explicit ScriptedBackend(std::vector<std::string> replies, bool cycle = false);

    // Script file format: a line that is exactly "--- reply ---" starts a
    // reply; everything until the next marker belongs to it. Text before the
    // first marker is ignored.
    static ScriptedBackend from_script_file(const std::string& path, bool cycle = false);

    std::string send(const std::string& prompt) override;

    const std::vector<std::string>& sent_prompts() const { return sent_prompts_; }
    std::size_t remaining() const { return replies_.size() - next_; }

private:
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
    bool cycle_ = false;
    std::vector<std::string> sent_prompts_;
};

// Chat-completion HTTP client. Sends the rendered prompt as a single user
// message at temperature 0; the API key is read from an environment
// variable, never stored in files.
class HttpChatBackend : public LlmBackend {
public:
    struct Options {
        std::string endpoint;      // e.g. "https://api.openai.com"
        std::string path = "/v1/chat/completions";
        std::string model;         // e.g. "gpt-4o"
        std::string api_key_env = "AIPSE_LLM_API_KEY";
        double temperature = 0.0;
        int timeout_seconds = 60;
    };

    explicit HttpChatBackend(Options options);

    std::string send(const std::string& prompt) override;

private:
    Options options_;
};

}  // namespace aipse::llm
