#pragma once

#include "commentrisk/classify.hpp"
#include "commentrisk/error.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace commentrisk::llm {

struct ChatMessage {
    std::string role;
    std::string content;

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    double top_p = 1.0;

    /// `{model, messages[{role, content}], temperature, top_p}`
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Transport failure. Retryable failures (timeouts, 429, 5xx) are retried with backoff.
class TransportError : public Error {
public:
    TransportError(ErrorKind kind, const std::string& message, bool retryable)
        : Error(kind, message), retryable_(retryable) {}

    [[nodiscard]] bool retryable() const noexcept { return retryable_; }

private:
    bool retryable_;
};

/// One chat completion round trip; returns the assistant's text.
class ChatEndpoint {
public:
    virtual ~ChatEndpoint() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
};

struct HttpEndpointConfig {
    std::string url;          ///< e.g. https://api.openai.com/v1/chat/completions
    std::string api_key;      ///< sent as a Bearer token when non-empty
    std::chrono::seconds timeout{60};
};

/// POSTs the request as JSON. Accepts either an OpenAI-style body (choices[0].message.content)
/// or any other body, which is returned verbatim. Safe to share across threads.
class HttpChatEndpoint final : public ChatEndpoint {
public:
    explicit HttpChatEndpoint(HttpEndpointConfig config);
    std::string complete(const ChatRequest& request) override;

private:
    HttpEndpointConfig config_;
    std::string scheme_host_port_;
    std::string path_;
};

/// Replays canned replies (or errors) in order and records every request it saw.
class ScriptedEndpoint final : public ChatEndpoint {
public:
    void push_reply(std::string text);
    void push_error(ErrorKind kind, bool retryable = true);
    std::string complete(const ChatRequest& request) override;

    [[nodiscard]] std::vector<ChatRequest> requests() const;

private:
    struct Step {
        std::optional<std::string> reply;
        ErrorKind kind = ErrorKind::EndpointUnavailable;
        bool retryable = true;
    };
    mutable std::mutex mutex_;
    std::deque<Step> steps_;
    std::vector<ChatRequest> seen_;
};

enum class PromptMode { ZeroShot, FewShot };

struct FewShotExample {
    std::string old_code;
    std::string new_code;
    std::string old_comment;
    std::string new_comment;
    classify::ConsistencyVerdict answer;
};

/// Renders the chat messages for one record. Every mode asks for the same JSON object.
struct PromptTemplate {
    PromptMode mode = PromptMode::ZeroShot;
    std::vector<FewShotExample> examples;

    static PromptTemplate zero_shot();
    /// Uses the first `shots` built-in exemplars (at most four ship with the library).
    static PromptTemplate few_shot(std::size_t shots = 4);

    [[nodiscard]] std::vector<ChatMessage> render(const records::MethodRecord& record) const;
};

const std::vector<FewShotExample>& builtin_examples();

/// The instruction appended when a reply could not be parsed.
std::string_view repair_instruction();

/// Extracts the single JSON object matching the verdict schema from free text. Returns nullopt
/// if there is no such object, more than one JSON object, or an empty rationale.
std::optional<classify::ConsistencyVerdict> parse_verdict(std::string_view text);

/// Spaces request starts at least `1/requests_per_second` apart; 0 disables limiting.
class RateLimiter {
public:
    explicit RateLimiter(double requests_per_second = 0.0);
    void acquire();

private:
    std::mutex mutex_;
    std::chrono::steady_clock::duration interval_{};
    std::chrono::steady_clock::time_point next_{};
};

struct LlmOptions {
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;
    double top_p = 1.0;
    unsigned max_retries = 3;
    std::chrono::milliseconds initial_backoff{500};
    std::function<void(std::chrono::milliseconds)> sleep;  ///< defaults to this_thread::sleep_for
    RateLimiter* limiter = nullptr;
};

/// Sends one request (plus transport retries and at most one re-prompt for malformed replies).
/// Throws MalformedResponse, EndpointUnavailable or RateLimited rather than guessing a verdict.
classify::ConsistencyVerdict classify_llm(const records::MethodRecord& record, const PromptTemplate& prompt,
                                          ChatEndpoint& endpoint, const LlmOptions& options = {});

class LlmClassifier final : public classify::Classifier {
public:
    LlmClassifier(PromptTemplate prompt, ChatEndpoint& endpoint, LlmOptions options)
        : prompt_(std::move(prompt)), endpoint_(endpoint), options_(std::move(options)) {}

    classify::ConsistencyVerdict classify(const records::MethodRecord& record) override
    {
        return classify_llm(record, prompt_, endpoint_, options_);
    }
    [[nodiscard]] bool concurrent() const noexcept override { return true; }

private:
    PromptTemplate prompt_;
    ChatEndpoint& endpoint_;
    LlmOptions options_;
};

}  // namespace commentrisk::llm
