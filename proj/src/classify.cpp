#include "commentrisk/classify.hpp"

#include "commentrisk/error.hpp"
#include "commentrisk/java_extract.hpp"
#include "commentrisk/jsonl.hpp"

#include <atomic>
#include <mutex>
#include <thread>

namespace commentrisk::classify {

std::string_view to_string(VerdictSource source) noexcept
{
    switch (source) {
    case VerdictSource::Heuristic: return "heuristic";
    case VerdictSource::Llm: return "llm";
    case VerdictSource::Mock: return "mock";
    }
    return "heuristic";
}

VerdictSource parse_verdict_source(std::string_view text)
{
    if (text == "heuristic") return VerdictSource::Heuristic;
    if (text == "llm") return VerdictSource::Llm;
    if (text == "mock") return VerdictSource::Mock;
    throw Error(ErrorKind::InvalidParameter, "unknown verdict source: " + std::string(text));
}

std::string_view to_string(RecordCategory category) noexcept
{
    switch (category) {
    case RecordCategory::Outdated: return "outdated";
    case RecordCategory::EarlierOutdated: return "earlier_outdated";
    case RecordCategory::Normal: return "normal";
    case RecordCategory::UncategorizedInconsistent: return "uncategorized_inconsistent";
    }
    return "uncategorized_inconsistent";
}

bool comment_changed(const records::MethodRecord& record)
{
    return java::normalize_comment(record.old_comment) != java::normalize_comment(record.new_comment);
}

ConsistencyVerdict classify_heuristic(const records::MethodRecord& record)
{
    ConsistencyVerdict v;
    v.source = VerdictSource::Heuristic;
    if (comment_changed(record)) {
        v.consistent_with_new_code = true;
        v.consistent_with_old_code = false;
        v.rationale = "comment was updated together with the change";
        return v;
    }
    if (java::normalize_body(record.old_code) != java::normalize_body(record.new_code)) {
        v.consistent_with_new_code = false;
        v.consistent_with_old_code = true;
        v.rationale = "code changed while the comment stayed the same";
        return v;
    }
    v.rationale = "neither code nor comment changed";
    return v;
}

RecordCategory categorize(bool changed, const ConsistencyVerdict& verdict, CategorizeOptions options)
{
    if (verdict.consistent_with_new_code) return RecordCategory::Normal;
    if (verdict.consistent_with_old_code) {
        if (options.strict_outdated && changed) return RecordCategory::UncategorizedInconsistent;
        return RecordCategory::Outdated;
    }
    return changed ? RecordCategory::UncategorizedInconsistent : RecordCategory::EarlierOutdated;
}

RecordCategory categorize(const records::MethodRecord& record, const ConsistencyVerdict& verdict,
                          CategorizeOptions options)
{
    return categorize(comment_changed(record), verdict, options);
}

stats::Exposure exposure_of(RecordCategory category) noexcept
{
    switch (category) {
    case RecordCategory::Outdated:
    case RecordCategory::EarlierOutdated: return stats::Exposure::Exposed;
    case RecordCategory::Normal: return stats::Exposure::NotExposed;
    case RecordCategory::UncategorizedInconsistent: return stats::Exposure::Uncategorized;
    }
    return stats::Exposure::Uncategorized;
}

std::string record_key(std::string_view old_commit, std::string_view new_commit, std::string_view path,
                       std::string_view signature_key)
{
    std::string key;
    key.reserve(old_commit.size() + new_commit.size() + path.size() + signature_key.size() + 3);
    key.append(old_commit).append(":").append(new_commit).append(":").append(path).append(":").append(signature_key);
    return key;
}

std::string record_key(const records::MethodRecord& record)
{
    return record_key(record.old_commit, record.new_commit, record.path, record.signature_key);
}

namespace {

ConsistencyVerdict verdict_from_json(const nlohmann::json& o, std::size_t line, VerdictSource fallback)
{
    const auto a = o.find("consistent_with_new_code");
    const auto b = o.find("consistent_with_old_code");
    if (a == o.end() || b == o.end() || !a->is_boolean() || !b->is_boolean()) {
        throw ParseError(line, "verdict needs boolean consistent_with_new_code and consistent_with_old_code");
    }
    ConsistencyVerdict v;
    v.consistent_with_new_code = a->get<bool>();
    v.consistent_with_old_code = b->get<bool>();
    v.rationale = o.value("rationale", std::string());
    v.source = o.contains("source") ? parse_verdict_source(o.at("source").get<std::string>()) : fallback;
    return v;
}

}  // namespace

void MockClassifier::script(std::string_view old_commit, std::string_view new_commit, std::string_view path,
                            std::string_view signature_key, ConsistencyVerdict verdict)
{
    verdict.source = VerdictSource::Mock;
    if (path.empty()) {
        scripted_any_path_[record_key(old_commit, new_commit, "", signature_key)] = std::move(verdict);
    } else {
        scripted_[record_key(old_commit, new_commit, path, signature_key)] = std::move(verdict);
    }
}

MockClassifier MockClassifier::load(const std::filesystem::path& path)
{
    MockClassifier mock;
    jsonl::for_each(path, [&](const nlohmann::json& o, std::size_t line) {
        auto v = verdict_from_json(o, line, VerdictSource::Mock);
        v.source = VerdictSource::Mock;
        if (o.value("default", false)) {
            mock.set_default(std::move(v));
            return;
        }
        if (!o.contains("old_commit") || !o.contains("new_commit") || !o.contains("signature_key")) {
            throw ParseError(line, "scripted verdict needs old_commit, new_commit and signature_key");
        }
        mock.script(o.at("old_commit").get<std::string>(), o.at("new_commit").get<std::string>(),
                    o.value("path", std::string()), o.at("signature_key").get<std::string>(), std::move(v));
    });
    return mock;
}

ConsistencyVerdict MockClassifier::classify(const records::MethodRecord& record)
{
    if (const auto it = scripted_.find(record_key(record)); it != scripted_.end()) return it->second;
    const auto any = record_key(record.old_commit, record.new_commit, "", record.signature_key);
    if (const auto it = scripted_any_path_.find(any); it != scripted_any_path_.end()) return it->second;
    if (default_) return *default_;
    throw Error(ErrorKind::MalformedResponse, "no scripted verdict for " + record_key(record));
}

std::vector<ClassifyOutcome> classify_batch(const std::vector<records::MethodRecord>& records, Classifier& classifier,
                                            unsigned concurrency,
                                            const std::function<void(std::size_t, const ClassifyOutcome&)>& on_done)
{
    std::vector<ClassifyOutcome> outcomes(records.size());
    std::atomic<std::size_t> next{0};
    std::mutex done_mutex;

    auto worker = [&] {
        for (auto i = next++; i < records.size(); i = next++) {
            ClassifyOutcome outcome;
            try {
                outcome.verdict = classifier.classify(records[i]);
            } catch (const Error& e) {
                outcome.error = std::string(to_string(e.kind())) + ": " + e.what();
            } catch (const std::exception& e) {
                outcome.error = e.what();
            }
            std::lock_guard lock(done_mutex);
            outcomes[i] = outcome;
            if (on_done) on_done(i, outcomes[i]);
        }
    };

    unsigned threads = classifier.concurrent() ? std::max(1u, concurrency) : 1u;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(records.size(), 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return outcomes;
}

VerdictRow make_row(const records::MethodRecord& record, const std::string& window, const ClassifyOutcome& outcome)
{
    VerdictRow row;
    row.old_commit = record.old_commit;
    row.new_commit = record.new_commit;
    row.signature_key = record.signature_key;
    row.repo_name = record.repo_name;
    row.path = record.path;
    row.window = window;
    row.is_bug_introducing = record.is_bug_introducing;
    row.comment_changed = comment_changed(record);
    row.verdict = outcome.verdict;
    row.error = outcome.error;
    return row;
}

nlohmann::json to_json(const VerdictRow& row, CategorizeOptions options)
{
    nlohmann::json o{{"old_commit", row.old_commit},
                     {"new_commit", row.new_commit},
                     {"signature_key", row.signature_key},
                     {"repo_name", row.repo_name},
                     {"path", row.path},
                     {"window", row.window},
                     {"is_bug_introducing", row.is_bug_introducing},
                     {"comment_changed", row.comment_changed}};
    if (row.verdict) {
        o["status"] = "classified";
        o["consistent_with_new_code"] = row.verdict->consistent_with_new_code;
        o["consistent_with_old_code"] = row.verdict->consistent_with_old_code;
        o["rationale"] = row.verdict->rationale;
        o["source"] = to_string(row.verdict->source);
        o["category"] = to_string(categorize(row.comment_changed, *row.verdict, options));
    } else {
        o["status"] = "unclassified";
        o["error"] = row.error;
    }
    return o;
}

VerdictRow verdict_row_from_json(const nlohmann::json& o, std::size_t line)
{
    VerdictRow row;
    try {
        row.old_commit = o.at("old_commit").get<std::string>();
        row.new_commit = o.at("new_commit").get<std::string>();
        row.signature_key = o.at("signature_key").get<std::string>();
        row.repo_name = o.value("repo_name", std::string());
        row.path = o.value("path", std::string());
        row.window = o.value("window", std::string());
        row.is_bug_introducing = o.at("is_bug_introducing").get<bool>();
        row.comment_changed = o.at("comment_changed").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(line, e.what());
    }
    if (o.value("status", std::string("classified")) == "classified") {
        row.verdict = verdict_from_json(o, line, VerdictSource::Heuristic);
    } else {
        row.error = o.value("error", std::string("unclassified"));
    }
    return row;
}

bool cup2_label(std::string_view old_comment, std::string_view new_comment)
{
    return java::normalize_comment(old_comment) != java::normalize_comment(new_comment);
}

std::vector<Cup2Instance> load_cup2(const std::filesystem::path& path)
{
    std::vector<Cup2Instance> instances;
    jsonl::for_each(path, [&](const nlohmann::json& o, std::size_t line) {
        Cup2Instance inst;
        for (const auto* key : {"old_code", "new_code", "old_comment", "new_comment"}) {
            const auto it = o.find(key);
            if (it == o.end() || !it->is_string()) {
                throw ParseError(line, std::string("missing string field '") + key + "'");
            }
        }
        inst.old_code = o.at("old_code").get<std::string>();
        inst.new_code = o.at("new_code").get<std::string>();
        inst.old_comment = o.at("old_comment").get<std::string>();
        inst.new_comment = o.at("new_comment").get<std::string>();
        if (const auto it = o.find("id"); it != o.end()) {
            inst.id = it->is_string() ? it->get<std::string>() : it->dump();
        } else {
            inst.id = std::to_string(line);
        }
        if (const auto it = o.find("label"); it != o.end()) {
            if (it->is_boolean()) inst.declared_label = it->get<bool>();
            else if (it->is_number_integer()) inst.declared_label = it->get<int>() != 0;
            else throw ParseError(line, "label must be boolean or 0/1");
        }
        inst.label = cup2_label(inst.old_comment, inst.new_comment);
        instances.push_back(std::move(inst));
    });
    return instances;
}

}  // namespace commentrisk::classify
