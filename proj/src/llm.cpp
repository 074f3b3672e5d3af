#include "commentrisk/llm.hpp"

#include <httplib.h>

#include <thread>

namespace commentrisk::llm {

nlohmann::json ChatRequest::to_json() const
{
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    return {{"model", model}, {"messages", std::move(msgs)}, {"temperature", temperature}, {"top_p", top_p}};
}

HttpChatEndpoint::HttpChatEndpoint(HttpEndpointConfig config) : config_(std::move(config))
{
    const auto scheme_end = config_.url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorKind::ConfigError, "endpoint URL needs a scheme: " + config_.url);
    }
    const auto path_start = config_.url.find('/', scheme_end + 3);
    scheme_host_port_ = config_.url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : config_.url.substr(path_start);
}

std::string HttpChatEndpoint::complete(const ChatRequest& request)
{
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);

    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    const auto res = client.Post(path_, headers, request.to_json().dump(), "application/json");
    if (!res) {
        throw TransportError(ErrorKind::EndpointUnavailable,
                             "request to " + config_.url + " failed: " + httplib::to_string(res.error()), true);
    }
    if (res->status == 429) {
        throw TransportError(ErrorKind::RateLimited, "rate limited by " + config_.url, true);
    }
    if (res->status >= 500) {
        throw TransportError(ErrorKind::EndpointUnavailable, "server error " + std::to_string(res->status), true);
    }
    if (res->status < 200 || res->status >= 300) {
        throw TransportError(ErrorKind::EndpointUnavailable,
                             "endpoint returned " + std::to_string(res->status) + ": " + res->body, false);
    }

    const auto body = nlohmann::json::parse(res->body, nullptr, false);
    if (!body.is_discarded() && body.is_object()) {
        const auto choices = body.find("choices");
        if (choices != body.end() && choices->is_array() && !choices->empty()) {
            const auto& first = choices->front();
            if (first.contains("message") && first["message"].contains("content") &&
                first["message"]["content"].is_string()) {
                return first["message"]["content"].get<std::string>();
            }
        }
    }
    return res->body;
}

void ScriptedEndpoint::push_reply(std::string text)
{
    std::lock_guard lock(mutex_);
    steps_.push_back({std::move(text), ErrorKind::EndpointUnavailable, true});
}

void ScriptedEndpoint::push_error(ErrorKind kind, bool retryable)
{
    std::lock_guard lock(mutex_);
    steps_.push_back({std::nullopt, kind, retryable});
}

std::string ScriptedEndpoint::complete(const ChatRequest& request)
{
    std::lock_guard lock(mutex_);
    seen_.push_back(request);
    if (steps_.empty()) {
        throw TransportError(ErrorKind::EndpointUnavailable, "scripted endpoint exhausted", false);
    }
    auto step = std::move(steps_.front());
    steps_.pop_front();
    if (!step.reply) {
        throw TransportError(step.kind, "scripted failure", step.retryable);
    }
    return *step.reply;
}

std::vector<ChatRequest> ScriptedEndpoint::requests() const
{
    std::lock_guard lock(mutex_);
    return seen_;
}

namespace {

constexpr std::string_view kSystemPrompt =
    "You review changes to Java methods and judge whether a method's summary comment "
    "accurately describes the code it documents.";

constexpr std::string_view kResponseFormat =
    "Answer with exactly one JSON object and no other text:\n"
    "{\"consistent_with_new_code\": <true|false>, \"consistent_with_old_code\": <true|false>, "
    "\"rationale\": \"<short explanation>\"}";

std::string render_task(std::string_view old_code, std::string_view new_code, std::string_view old_comment,
                        std::string_view new_comment)
{
    std::string s;
    s += "Below are two versions of a Java method with the summary comment of each version.\n";
    s += "Decide whether the NEW comment correctly describes the NEW code, and whether the NEW comment "
         "correctly describes the OLD code. Explain the reasoning behind your answer in the \"rationale\" "
         "field.\n\n";
    s += "OLD COMMENT:\n";
    s += old_comment;
    s += "\n\nOLD CODE:\n";
    s += old_code;
    s += "\n\nNEW COMMENT:\n";
    s += new_comment;
    s += "\n\nNEW CODE:\n";
    s += new_code;
    s += "\n\n";
    s += kResponseFormat;
    return s;
}

std::string render_answer(const classify::ConsistencyVerdict& v)
{
    return nlohmann::json{{"consistent_with_new_code", v.consistent_with_new_code},
                          {"consistent_with_old_code", v.consistent_with_old_code},
                          {"rationale", v.rationale}}
        .dump();
}

classify::ConsistencyVerdict answer(bool with_new, bool with_old, std::string rationale)
{
    return {with_new, with_old, std::move(rationale), classify::VerdictSource::Llm};
}

}  // namespace

const std::vector<FewShotExample>& builtin_examples()
{
    static const std::vector<FewShotExample> examples{
        {
            "public int combine(int a, int b) {\n    return a + b;\n}",
            "public int combine(int a, int b) {\n    return a - b;\n}",
            "/** Returns the sum of a and b. */",
            "/** Returns the sum of a and b. */",
            answer(false, true, "The code now subtracts b from a, but the comment still promises the sum, "
                                "which only the old code computed."),
        },
        {
            "public Item first() {\n    return items.get(0);\n}",
            "public Item first() {\n    return items.isEmpty() ? null : items.get(0);\n}",
            "/** Returns the first item. */",
            "/** Returns the first item, or null when there are no items. */",
            answer(true, false, "The new comment documents the null result for an empty list, which the new "
                                "code implements and the old code did not."),
        },
        {
            "void closeQuietly(Closeable c) {\n    try { c.close(); } catch (IOException e) { }\n}",
            "void closeQuietly(Closeable c) {\n    try {\n        c.close();\n    } catch (IOException ignored) {\n"
            "    }\n}",
            "/** Closes the resource, ignoring any I/O failure. */",
            "/** Closes the resource, ignoring any I/O failure. */",
            answer(true, true, "Both versions close the resource and swallow IOException, as described."),
        },
        {
            "void report(String msg) {\n    LOG.info(msg);\n}",
            "void report(String msg) {\n    LOG.warn(msg);\n}",
            "/** Prints the message to standard error. */",
            "/** Prints the message to standard error. */",
            answer(false, false, "Neither version prints to standard error; both send the message to the "
                                 "logger, so the comment was already wrong before this change."),
        },
    };
    return examples;
}

PromptTemplate PromptTemplate::zero_shot()
{
    return {PromptMode::ZeroShot, {}};
}

PromptTemplate PromptTemplate::few_shot(std::size_t shots)
{
    const auto& all = builtin_examples();
    PromptTemplate t{PromptMode::FewShot, {}};
    t.examples.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(shots, all.size())));
    return t;
}

std::vector<ChatMessage> PromptTemplate::render(const records::MethodRecord& record) const
{
    std::vector<ChatMessage> messages{{"system", std::string(kSystemPrompt)}};
    if (mode == PromptMode::FewShot) {
        for (const auto& ex : examples) {
            messages.push_back({"user", render_task(ex.old_code, ex.new_code, ex.old_comment, ex.new_comment)});
            messages.push_back({"assistant", render_answer(ex.answer)});
        }
    }
    messages.push_back(
        {"user", render_task(record.old_code, record.new_code, record.old_comment, record.new_comment)});
    return messages;
}

std::string_view repair_instruction()
{
    static const std::string text =
        "Your previous reply could not be read as the requested JSON object. " + std::string(kResponseFormat);
    return text;
}

namespace {

// Index one past the '}' closing the object that opens at `start`, honouring JSON strings.
std::size_t object_end(std::string_view text, std::size_t start)
{
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == '{') ++depth;
        else if (c == '}' && --depth == 0) return i + 1;
    }
    return std::string_view::npos;
}

}  // namespace

std::optional<classify::ConsistencyVerdict> parse_verdict(std::string_view text)
{
    std::vector<nlohmann::json> objects;
    std::size_t pos = text.find('{');
    while (pos != std::string_view::npos) {
        const auto end = object_end(text, pos);
        if (end != std::string_view::npos) {
            auto parsed = nlohmann::json::parse(text.substr(pos, end - pos), nullptr, false);
            if (!parsed.is_discarded() && parsed.is_object()) {
                objects.push_back(std::move(parsed));
                pos = text.find('{', end);
                continue;
            }
        }
        pos = text.find('{', pos + 1);
    }
    if (objects.size() != 1) return std::nullopt;

    const auto& o = objects.front();
    const auto a = o.find("consistent_with_new_code");
    const auto b = o.find("consistent_with_old_code");
    const auto r = o.find("rationale");
    if (a == o.end() || b == o.end() || r == o.end()) return std::nullopt;
    if (!a->is_boolean() || !b->is_boolean() || !r->is_string()) return std::nullopt;
    auto rationale = r->get<std::string>();
    if (rationale.find_first_not_of(" \t\r\n") == std::string::npos) return std::nullopt;
    return classify::ConsistencyVerdict{a->get<bool>(), b->get<bool>(), std::move(rationale),
                                        classify::VerdictSource::Llm};
}

RateLimiter::RateLimiter(double requests_per_second)
{
    if (requests_per_second > 0.0) {
        interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(1.0 / requests_per_second));
    }
}

void RateLimiter::acquire()
{
    if (interval_ == std::chrono::steady_clock::duration::zero()) return;
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard lock(mutex_);
        const auto now = std::chrono::steady_clock::now();
        slot = std::max(now, next_);
        next_ = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
}

namespace {

std::string send_with_retry(ChatEndpoint& endpoint, const ChatRequest& request, const LlmOptions& options)
{
    auto backoff = options.initial_backoff;
    for (unsigned attempt = 0;; ++attempt) {
        if (options.limiter != nullptr) options.limiter->acquire();
        try {
            return endpoint.complete(request);
        } catch (const TransportError& e) {
            if (!e.retryable() || attempt >= options.max_retries) {
                throw Error(e.kind(), std::string(e.what()) + " (after " + std::to_string(attempt + 1) + " attempts)");
            }
        }
        if (options.sleep) options.sleep(backoff);
        else std::this_thread::sleep_for(backoff);
        backoff *= 2;
    }
}

}  // namespace

classify::ConsistencyVerdict classify_llm(const records::MethodRecord& record, const PromptTemplate& prompt,
                                          ChatEndpoint& endpoint, const LlmOptions& options)
{
    ChatRequest request{options.model, prompt.render(record), options.temperature, options.top_p};
    auto reply = send_with_retry(endpoint, request, options);
    if (auto verdict = parse_verdict(reply)) return *verdict;

    request.messages.push_back({"assistant", reply});
    request.messages.push_back({"user", std::string(repair_instruction())});
    reply = send_with_retry(endpoint, request, options);
    if (auto verdict = parse_verdict(reply)) return *verdict;

    throw Error(ErrorKind::MalformedResponse, "no verdict JSON in reply after re-prompt");
}

}  // namespace commentrisk::llm
