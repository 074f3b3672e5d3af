#pragma once

#include "commentrisk/git.hpp"
#include "commentrisk/java_extract.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace commentrisk::records {

/// One changed method between a prior commit and a target commit.
struct MethodRecord {
    std::string old_commit;
    std::string new_commit;
    std::string old_code;
    std::string new_code;
    std::string old_comment;
    std::string new_comment;
    bool is_bug_introducing = false;
    std::int64_t old_time = 0;
    std::int64_t new_time = 0;
    std::string repo_name;
    double window_days_back = 0.0;
    std::string signature_key;
    std::string path;

    friend bool operator==(const MethodRecord&, const MethodRecord&) = default;
};

nlohmann::json to_json(const MethodRecord& record);
/// Throws ParseError(line) when a field is missing or has the wrong type.
MethodRecord record_from_json(const nlohmann::json& object, std::size_t line = 0);

/// Cochran's sample size at p = 0.5 with finite-population correction, capped at the
/// population. Throws InvalidParameter for confidence/margin outside (0,1) or population 0.
std::size_t sample_size(std::size_t population, double confidence, double margin);

struct SamplePlan {
    std::size_t population = 0;
    std::size_t sample_size = 0;
    double confidence = 0.90;
    double margin = 0.10;
    std::uint64_t seed = 0;

    static SamplePlan make(std::size_t population, double confidence, double margin, std::uint64_t seed);
};

/// Path rules deciding which commits only touch documentation or tests.
struct PathRules {
    std::set<std::string> test_components{"test", "tests", "it"};
    std::set<std::string> doc_dirs{"docs"};
    std::set<std::string> doc_extensions{".md", ".txt", ".adoc"};

    [[nodiscard]] bool is_doc_or_test(const std::string& path) const;
};

struct TargetSelection {
    std::vector<git::CommitMeta> bug_targets;
    std::vector<git::CommitMeta> nonbug_targets;
    std::size_t requested_nonbug = 0;
    bool insufficient_nonbug = false;  ///< fewer non-bug commits survived than requested
};

/// Samples bug-introducing targets and an equally sized baseline of other commits that touch
/// more than documentation or tests. Both samples keep history order.
TargetSelection select_targets(const git::Repository& repo, const std::set<std::string>& introducers,
                               const SamplePlan& plan, const PathRules& rules = {});

/// Half-open day interval (lo, hi] measured back from a target commit.
struct Window {
    double lo_days = 0.0;
    double hi_days = 7.0;

    [[nodiscard]] bool contains_seconds(std::int64_t seconds_back) const noexcept;
    [[nodiscard]] std::string label() const;  ///< e.g. "0-7"
    void validate() const;

    friend bool operator==(const Window&, const Window&) = default;
    friend auto operator<=>(const Window&, const Window&) = default;
};

/// Throws ConfigError on a malformed "lo-hi" label.
Window parse_window(const std::string& label);

struct Target {
    git::CommitMeta commit;
    bool is_bug_introducing = false;
};

struct TargetFailure {
    std::string commit;
    std::string error;
};

struct BuildResult {
    std::vector<MethodRecord> records;
    std::vector<TargetFailure> failures;
    std::size_t dropped_empty_comment = 0;
    std::size_t unbalanced_files = 0;
};

struct BuildOptions {
    java::DiffOptions diff;
    unsigned jobs = 1;
    std::vector<std::string> path_filter{"*.java"};
};

/// Pairs each target with every ancestor whose time lies in the window and emits one record per
/// changed method. Records with an empty new comment are dropped. Output order follows targets,
/// then prior commits by time, then files and methods as git and the source list them.
BuildResult build_records(const git::Repository& repo, const std::vector<Target>& targets, const Window& window,
                          const BuildOptions& options = {});

}  // namespace commentrisk::records
