#include "commentrisk/git.hpp"

#include "commentrisk/error.hpp"
#include "commentrisk/process.hpp"

#include <algorithm>
#include <charconv>

#include <fnmatch.h>

namespace commentrisk::git {

namespace {

constexpr std::string_view kEmptyTree = "4b825dc642cb6eb9a060e54bf8d69288fbee4904";

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

std::int64_t parse_int(std::string_view s)
{
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorKind::GitFailure, "unexpected number in git output: '" + std::string(s) + "'");
    }
    return v;
}

bool matches_filter(const std::vector<std::string>& globs, const std::string& path)
{
    if (globs.empty()) return true;
    return std::any_of(globs.begin(), globs.end(),
                       [&](const std::string& g) { return ::fnmatch(g.c_str(), path.c_str(), 0) == 0; });
}

}  // namespace

std::string_view to_string(ChangeKind kind) noexcept
{
    switch (kind) {
    case ChangeKind::Added: return "added";
    case ChangeKind::Deleted: return "deleted";
    case ChangeKind::Modified: return "modified";
    case ChangeKind::Renamed: return "renamed";
    }
    return "modified";
}

bool is_commit_hash(std::string_view s) noexcept
{
    return s.size() == 40 && std::all_of(s.begin(), s.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
}

Repository::Repository(std::filesystem::path path, RepoOptions options)
    : path_(std::move(path)), options_(std::move(options))
{
}

Repository Repository::open(const std::filesystem::path& path, RepoOptions options)
{
    std::error_code ec;
    if (!std::filesystem::is_directory(path, ec)) {
        throw Error(ErrorKind::RepoNotFound, "repository not found: " + path.string());
    }
    const auto probe = run_process({"git", "-C", path.string(), "rev-parse", "--git-dir"});
    if (probe.exit_code != 0) {
        throw Error(ErrorKind::RepoNotFound, "not a git repository: " + path.string());
    }
    if (options.name.empty()) {
        auto canonical = std::filesystem::weakly_canonical(path, ec);
        options.name = (ec ? path : canonical).filename().string();
    }
    return Repository(path, std::move(options));
}

std::string Repository::git(const std::vector<std::string>& args) const
{
    std::vector<std::string> argv{"git", "-C", path_.string(), "-c", "core.quotepath=false"};
    argv.insert(argv.end(), args.begin(), args.end());
    auto result = run_process(argv);
    if (result.exit_code != 0) {
        std::string cmd;
        for (const auto& a : args) cmd += (cmd.empty() ? "" : " ") + a;
        throw Error(ErrorKind::GitFailure, "git " + cmd + " failed: " + result.err);
    }
    return std::move(result.out);
}

std::string Repository::resolve(std::string_view rev) const
{
    auto result = run_process({"git", "-C", path_.string(), "rev-parse", "--verify", "--quiet",
                               std::string(rev) + "^{commit}"});
    if (result.exit_code != 0) {
        throw Error(ErrorKind::UnknownCommit, "unknown commit: " + std::string(rev));
    }
    while (!result.out.empty() && (result.out.back() == '\n' || result.out.back() == '\r')) result.out.pop_back();
    return result.out;
}

namespace {

CommitMeta parse_commit_record(std::string_view rec, const std::string& repo_name)
{
    // %H\n%at\n%ct\n%P\n%B
    const auto lines = split(rec, '\n');
    if (lines.size() < 4) {
        throw Error(ErrorKind::GitFailure, "malformed git log record");
    }
    CommitMeta meta;
    meta.id = std::string(lines[0]);
    meta.author_time = parse_int(lines[1]);
    meta.committer_time = parse_int(lines[2]);
    for (auto p : split(lines[3], ' ')) {
        if (!p.empty()) meta.parent_ids.emplace_back(p);
    }
    const auto header_len = lines[0].size() + lines[1].size() + lines[2].size() + lines[3].size() + 4;
    if (header_len < rec.size()) meta.message = std::string(rec.substr(header_len));
    while (!meta.message.empty() && meta.message.back() == '\n') meta.message.pop_back();
    meta.repo_name = repo_name;
    return meta;
}

}  // namespace

std::vector<CommitMeta> Repository::list_commits(std::optional<std::int64_t> until) const
{
    std::string head;
    try {
        head = resolve(options_.branch);
    } catch (const Error&) {
        throw Error(ErrorKind::EmptyRepo, "no commits on " + options_.branch + " in " + path_.string());
    }
    const auto out = git({"log", "-z", "--no-color", "--format=%H%n%at%n%ct%n%P%n%B", head});
    std::vector<CommitMeta> commits;
    for (auto rec : split(out, '\0')) {
        if (rec.empty()) continue;
        if (rec.front() == '\n') rec.remove_prefix(1);
        auto meta = parse_commit_record(rec, options_.name);
        if (until && time_of(meta) > *until) continue;
        commits.push_back(std::move(meta));
    }
    std::sort(commits.begin(), commits.end(), [this](const CommitMeta& a, const CommitMeta& b) {
        const auto ta = time_of(a);
        const auto tb = time_of(b);
        return ta != tb ? ta < tb : a.id < b.id;
    });
    return commits;
}

CommitMeta Repository::commit(std::string_view rev) const
{
    const auto id = resolve(rev);
    const auto out = git({"log", "-1", "-z", "--no-color", "--format=%H%n%at%n%ct%n%P%n%B", id});
    auto rec = std::string_view(out);
    while (!rec.empty() && rec.back() == '\0') rec.remove_suffix(1);
    return parse_commit_record(rec, options_.name);
}

std::string Repository::read_blob(std::string_view oid) const
{
    return git({"cat-file", "blob", std::string(oid)});
}

std::vector<FileDiff> Repository::diff(std::string_view old_id, std::string_view new_id,
                                       const std::vector<std::string>& path_filter) const
{
    const auto old_full = resolve(old_id);
    const auto new_full = resolve(new_id);
    if (old_full == new_full) return {};

    const auto out = git({"diff", "--raw", "-z", "-M", "--no-abbrev", "--no-ext-diff", "--no-textconv",
                          "--no-color", old_full, new_full});
    const auto fields = split(out, '\0');
    std::vector<FileDiff> diffs;
    std::size_t i = 0;
    while (i < fields.size()) {
        const auto header = fields[i++];
        if (header.empty()) continue;
        if (header.front() != ':') {
            throw Error(ErrorKind::GitFailure, "unexpected raw diff header: " + std::string(header));
        }
        // :old_mode new_mode old_sha new_sha status
        const auto cols = split(header.substr(1), ' ');
        if (cols.size() < 5 || cols[4].empty() || i >= fields.size()) {
            throw Error(ErrorKind::GitFailure, "malformed raw diff entry");
        }
        const char status = cols[4].front();
        FileDiff d;
        const std::string old_sha(cols[2]);
        const std::string new_sha(cols[3]);
        const bool old_null = old_sha.find_first_not_of('0') == std::string::npos;
        const bool new_null = new_sha.find_first_not_of('0') == std::string::npos;
        if (status == 'R' || status == 'C') {
            if (i + 1 >= fields.size()) throw Error(ErrorKind::GitFailure, "malformed rename entry");
            d.old_path = std::string(fields[i++]);
            d.path = std::string(fields[i++]);
            d.change_kind = status == 'R' ? ChangeKind::Renamed : ChangeKind::Added;
        } else {
            d.path = std::string(fields[i++]);
            d.old_path = d.path;
            switch (status) {
            case 'A': d.change_kind = ChangeKind::Added; break;
            case 'D': d.change_kind = ChangeKind::Deleted; break;
            default: d.change_kind = ChangeKind::Modified; break;
            }
        }
        // Submodule entries (mode 160000) carry commit ids, not blobs.
        if (cols[0] == "160000" || cols[1] == "160000") continue;
        if (!matches_filter(path_filter, d.path) && !matches_filter(path_filter, d.old_path)) continue;
        if (d.change_kind != ChangeKind::Added && !old_null) {
            d.old_oid = old_sha;
            d.old_blob = read_blob(old_sha);
        }
        if (d.change_kind != ChangeKind::Deleted && !new_null) {
            d.new_oid = new_sha;
            d.new_blob = read_blob(new_sha);
        }
        if (d.change_kind == ChangeKind::Added) d.old_path.clear();
        diffs.push_back(std::move(d));
    }
    return diffs;
}

std::vector<BlameLine> Repository::blame(std::string_view commit_id, std::string_view path) const
{
    const auto id = resolve(commit_id);
    const auto probe = run_process({"git", "-C", path_.string(), "cat-file", "-e", id + ":" + std::string(path)});
    if (probe.exit_code != 0) {
        throw Error(ErrorKind::PathAbsentAtRevision, std::string(path) + " does not exist at " + id);
    }
    const auto out = git({"blame", "--porcelain", "--no-progress", id, "--", std::string(path)});

    std::vector<BlameLine> lines;
    std::string current_origin;
    std::size_t current_final = 0;
    bool expecting_header = true;
    for (auto line : split(out, '\n')) {
        if (expecting_header) {
            if (line.empty()) continue;
            const auto cols = split(line, ' ');
            if (cols.size() < 3 || !is_commit_hash(cols[0])) {
                throw Error(ErrorKind::GitFailure, "unexpected blame header: " + std::string(line));
            }
            current_origin = std::string(cols[0]);
            current_final = static_cast<std::size_t>(parse_int(cols[2]));
            expecting_header = false;
        } else if (!line.empty() && line.front() == '\t') {
            lines.push_back({current_final, current_origin, std::string(line.substr(1))});
            expecting_header = true;
        }
    }
    std::sort(lines.begin(), lines.end(), [](const BlameLine& a, const BlameLine& b) { return a.line_no < b.line_no; });
    return lines;
}

std::vector<std::size_t> Repository::removed_lines(std::string_view old_oid, std::string_view new_oid) const
{
    const auto out = git({"diff", "-U0", "--no-color", "--no-ext-diff", "--no-textconv", std::string(old_oid),
                          std::string(new_oid)});
    std::vector<std::size_t> removed;
    for (auto line : split(out, '\n')) {
        if (line.substr(0, 4) != "@@ -") continue;
        // @@ -start[,count] +start[,count] @@
        auto range = line.substr(4);
        range = range.substr(0, range.find(' '));
        const auto comma = range.find(',');
        const auto start = static_cast<std::size_t>(parse_int(range.substr(0, comma)));
        const std::size_t count =
            comma == std::string_view::npos ? 1 : static_cast<std::size_t>(parse_int(range.substr(comma + 1)));
        for (std::size_t k = 0; k < count; ++k) removed.push_back(start + k);
    }
    return removed;
}

std::vector<std::string> Repository::changed_paths(const CommitMeta& commit) const
{
    const std::string base = commit.parent_ids.empty() ? std::string(kEmptyTree) : commit.parent_ids.front();
    const auto out = git({"diff", "--name-only", "-z", "--no-renames", "--no-ext-diff", base, commit.id});
    std::vector<std::string> paths;
    for (auto p : split(out, '\0')) {
        if (!p.empty()) paths.emplace_back(p);
    }
    return paths;
}

std::unordered_set<std::string> Repository::ancestors(std::string_view id) const
{
    const auto out = git({"rev-list", resolve(id)});
    std::unordered_set<std::string> set;
    for (auto line : split(out, '\n')) {
        if (!line.empty()) set.emplace(line);
    }
    return set;
}

bool Repository::is_ancestor(std::string_view ancestor, std::string_view descendant) const
{
    const auto a = resolve(ancestor);
    const auto d = resolve(descendant);
    const auto result = run_process({"git", "-C", path_.string(), "merge-base", "--is-ancestor", a, d});
    return result.exit_code == 0;
}

}  // namespace commentrisk::git
