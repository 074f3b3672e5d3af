#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace commentrisk::git {

/// Which commit timestamp drives ordering and windowing.
enum class Clock { Author, Committer };

struct RepoOptions {
    std::string name;              ///< short label; defaults to the directory name
    std::string branch = "HEAD";   ///< ref whose reachable history is mined
    Clock clock = Clock::Author;
};

struct CommitMeta {
    std::string id;                     ///< 40 lowercase hex characters
    std::int64_t author_time = 0;       ///< UTC seconds
    std::int64_t committer_time = 0;    ///< UTC seconds
    std::string message;
    std::vector<std::string> parent_ids;
    std::string repo_name;

    [[nodiscard]] std::int64_t time(Clock clock) const noexcept
    {
        return clock == Clock::Author ? author_time : committer_time;
    }
};

enum class ChangeKind { Added, Deleted, Modified, Renamed };

std::string_view to_string(ChangeKind kind) noexcept;

struct FileDiff {
    std::string path;                   ///< new path (old path for deletions)
    std::string old_path;               ///< differs from path only for renames
    std::optional<std::string> old_blob;
    std::optional<std::string> new_blob;
    std::string old_oid;                ///< empty when old_blob is absent
    std::string new_oid;                ///< empty when new_blob is absent
    ChangeKind change_kind = ChangeKind::Modified;
};

struct BlameLine {
    std::size_t line_no = 0;            ///< 1-based
    std::string origin_commit;
    std::string content;
};

bool is_commit_hash(std::string_view s) noexcept;

/// Read-only handle on one repository; all access goes through the git executable.
/// A handle is not thread-safe; open one per thread.
class Repository {
public:
    /// Throws RepoNotFound if `path` is not inside a git work tree or bare repo.
    static Repository open(const std::filesystem::path& path, RepoOptions options = {});

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
    [[nodiscard]] const std::string& name() const noexcept { return options_.name; }
    [[nodiscard]] const RepoOptions& options() const noexcept { return options_; }
    [[nodiscard]] std::int64_t time_of(const CommitMeta& c) const noexcept { return c.time(options_.clock); }

    /// All commits reachable from the configured branch, ascending by time, ties by id.
    /// Throws EmptyRepo when the branch has no commits.
    [[nodiscard]] std::vector<CommitMeta> list_commits(std::optional<std::int64_t> until = std::nullopt) const;

    /// Metadata of one commit; throws UnknownCommit.
    [[nodiscard]] CommitMeta commit(std::string_view rev) const;

    /// Full hash of a revision expression; throws UnknownCommit.
    [[nodiscard]] std::string resolve(std::string_view rev) const;

    /// Files differing between two commits whose path matches any glob in `path_filter`
    /// (empty filter matches everything). Rename detection is on.
    [[nodiscard]] std::vector<FileDiff> diff(std::string_view old_id, std::string_view new_id,
                                             const std::vector<std::string>& path_filter = {}) const;

    /// One entry per line of `path` at `commit_id`. Throws PathAbsentAtRevision.
    [[nodiscard]] std::vector<BlameLine> blame(std::string_view commit_id, std::string_view path) const;

    /// 1-based line numbers of the old blob that the change to the new blob deletes or replaces.
    [[nodiscard]] std::vector<std::size_t> removed_lines(std::string_view old_oid, std::string_view new_oid) const;

    /// Paths touched by a commit relative to its first parent (the empty tree for roots),
    /// rename detection off so both sides of a move are reported.
    [[nodiscard]] std::vector<std::string> changed_paths(const CommitMeta& commit) const;

    /// Every commit reachable from `id`, including `id` itself.
    [[nodiscard]] std::unordered_set<std::string> ancestors(std::string_view id) const;

    [[nodiscard]] bool is_ancestor(std::string_view ancestor, std::string_view descendant) const;

    [[nodiscard]] std::string read_blob(std::string_view oid) const;

private:
    Repository(std::filesystem::path path, RepoOptions options);

    std::string git(const std::vector<std::string>& args) const;

    std::filesystem::path path_;
    RepoOptions options_;
};

}  // namespace commentrisk::git
