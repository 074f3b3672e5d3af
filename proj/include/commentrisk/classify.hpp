#pragma once

#include "commentrisk/records.hpp"
#include "commentrisk/stats.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace commentrisk::classify {

enum class VerdictSource { Heuristic, Llm, Mock };

std::string_view to_string(VerdictSource source) noexcept;
VerdictSource parse_verdict_source(std::string_view text);

/// Whether a record's new comment agrees with the new and with the old code.
struct ConsistencyVerdict {
    bool consistent_with_new_code = true;
    bool consistent_with_old_code = true;
    std::string rationale;
    VerdictSource source = VerdictSource::Heuristic;

    friend bool operator==(const ConsistencyVerdict&, const ConsistencyVerdict&) = default;
};

enum class RecordCategory { Outdated, EarlierOutdated, Normal, UncategorizedInconsistent };

std::string_view to_string(RecordCategory category) noexcept;

struct CategorizeOptions {
    /// Also require an unchanged comment for Outdated; a changed comment then falls through.
    bool strict_outdated = false;
};

/// True when the normalized old and new comments differ.
bool comment_changed(const records::MethodRecord& record);

/// Comment unchanged and body changed: (false, true). Comment changed: (true, false).
/// Nothing changed: (true, true).
ConsistencyVerdict classify_heuristic(const records::MethodRecord& record);

RecordCategory categorize(bool comment_changed, const ConsistencyVerdict& verdict, CategorizeOptions options = {});
RecordCategory categorize(const records::MethodRecord& record, const ConsistencyVerdict& verdict,
                          CategorizeOptions options = {});

/// Outdated and EarlierOutdated are exposed, Normal is not.
stats::Exposure exposure_of(RecordCategory category) noexcept;

/// Pluggable classifier. Implementations throw commentrisk::Error when they cannot decide.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual ConsistencyVerdict classify(const records::MethodRecord& record) = 0;
    /// Whether `classify` may be called from several threads at once.
    [[nodiscard]] virtual bool concurrent() const noexcept { return false; }
};

class HeuristicClassifier final : public Classifier {
public:
    ConsistencyVerdict classify(const records::MethodRecord& record) override { return classify_heuristic(record); }
    [[nodiscard]] bool concurrent() const noexcept override { return true; }
};

/// Replays verdicts scripted per (old_commit, new_commit, signature_key), optionally narrowed by path.
class MockClassifier final : public Classifier {
public:
    MockClassifier() = default;

    /// Scripts a verdict for one record; an empty `path` matches the record in any file.
    void script(std::string_view old_commit, std::string_view new_commit, std::string_view path,
                std::string_view signature_key, ConsistencyVerdict verdict);
    void set_default(ConsistencyVerdict verdict) { default_ = std::move(verdict); }

    /// JSON Lines: {"old_commit","new_commit","signature_key",["path",]"consistent_with_new_code",
    /// "consistent_with_old_code","rationale"}; a line with "default": true sets the fallback.
    static MockClassifier load(const std::filesystem::path& path);

    /// Throws MalformedResponse for records with no scripted verdict and no default.
    ConsistencyVerdict classify(const records::MethodRecord& record) override;
    [[nodiscard]] bool concurrent() const noexcept override { return true; }

private:
    std::map<std::string, ConsistencyVerdict> scripted_;
    std::map<std::string, ConsistencyVerdict> scripted_any_path_;
    std::optional<ConsistencyVerdict> default_;
};

/// `old_commit:new_commit:path:signature_key`. The path keeps equally named types in different
/// files apart.
std::string record_key(std::string_view old_commit, std::string_view new_commit, std::string_view path,
                       std::string_view signature_key);
std::string record_key(const records::MethodRecord& record);

struct ClassifyOutcome {
    std::optional<ConsistencyVerdict> verdict;
    std::string error;  ///< set when unclassified
};

/// Classifies every record with at most `concurrency` calls in flight. `on_done` is invoked
/// once per record, serialized, in completion order. The returned vector follows input order.
std::vector<ClassifyOutcome> classify_batch(const std::vector<records::MethodRecord>& records, Classifier& classifier,
                                            unsigned concurrency = 4,
                                            const std::function<void(std::size_t, const ClassifyOutcome&)>& on_done = {});

/// One line of a verdicts file.
struct VerdictRow {
    std::string old_commit;
    std::string new_commit;
    std::string signature_key;
    std::string repo_name;
    std::string path;
    std::string window;
    bool is_bug_introducing = false;
    bool comment_changed = false;
    std::optional<ConsistencyVerdict> verdict;
    std::string error;

    [[nodiscard]] std::string key() const { return record_key(old_commit, new_commit, path, signature_key); }
};

VerdictRow make_row(const records::MethodRecord& record, const std::string& window, const ClassifyOutcome& outcome);
nlohmann::json to_json(const VerdictRow& row, CategorizeOptions options = {});
VerdictRow verdict_row_from_json(const nlohmann::json& object, std::size_t line = 0);

struct Cup2Instance {
    std::string id;
    std::string old_code;
    std::string new_code;
    std::string old_comment;
    std::string new_comment;
    bool label = false;                 ///< recomputed: comments differ after punctuation removal
    std::optional<bool> declared_label; ///< as stored in the file, if present
};

/// Positive when the comments differ once punctuation is stripped and whitespace collapsed.
bool cup2_label(std::string_view old_comment, std::string_view new_comment);

/// JSON Lines with old_code, new_code, old_comment, new_comment and optional id/label.
/// Throws ParseError(line) at the first malformed line.
std::vector<Cup2Instance> load_cup2(const std::filesystem::path& path);

}  // namespace commentrisk::classify
