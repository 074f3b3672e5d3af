#include "commentrisk/szz.hpp"

#include "commentrisk/error.hpp"
#include "commentrisk/java_extract.hpp"

#include <algorithm>
#include <unordered_map>

namespace commentrisk::szz {

namespace {

bool is_java_path(const std::string& path)
{
    return path.size() >= 5 && path.compare(path.size() - 5, 5, ".java") == 0;
}

bool is_blank(std::string_view line)
{
    return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f'; });
}

}  // namespace

IntroducerSet find_introducers(const git::Repository& repo, const git::CommitMeta& fix, const SzzFilters& filters)
{
    if (fix.parent_ids.empty()) {
        throw Error(ErrorKind::NoParent, "fix commit " + fix.id + " has no parent");
    }
    const auto& parent = fix.parent_ids.front();

    IntroducerSet result;
    result.fix_commit = fix.id;
    std::unordered_map<std::string, std::int64_t> origin_times;

    for (const auto& file : repo.diff(parent, fix.id)) {
        if (file.change_kind != git::ChangeKind::Modified && file.change_kind != git::ChangeKind::Renamed) continue;
        if (filters.source_only && !is_java_path(file.old_path)) continue;

        auto removed = repo.removed_lines(file.old_oid, file.new_oid);
        if (removed.empty()) continue;

        const auto& old_text = *file.old_blob;
        std::vector<bool> comment_only;
        if (filters.skip_comments) comment_only = java::comment_only_lines(old_text);

        const auto blame = repo.blame(parent, file.old_path);
        for (const auto line_no : removed) {
            if (line_no == 0 || line_no > blame.size()) continue;
            const auto& bl = blame[line_no - 1];
            if (filters.skip_blank && is_blank(bl.content)) continue;
            if (filters.skip_comments && line_no <= comment_only.size() && comment_only[line_no - 1]) continue;
            if (bl.origin_commit == fix.id) continue;

            auto [it, inserted] = origin_times.try_emplace(bl.origin_commit, 0);
            if (inserted) it->second = repo.time_of(repo.commit(bl.origin_commit));
            if (it->second > repo.time_of(fix)) continue;

            result.introducers.insert(bl.origin_commit);
            result.evidence[bl.origin_commit].push_back({file.old_path, line_no});
        }
    }
    return result;
}

BugIntroducingReport find_all_bug_introducing(const git::Repository& repo, const std::vector<git::CommitMeta>& fixes,
                                              const SzzFilters& filters)
{
    BugIntroducingReport report;
    for (const auto& fix : fixes) {
        try {
            auto set = find_introducers(repo, fix, filters);
            report.introducers.insert(set.introducers.begin(), set.introducers.end());
            report.per_fix.push_back(std::move(set));
        } catch (const Error& e) {
            report.failures.push_back({fix.id, std::string(to_string(e.kind())) + ": " + e.what()});
        }
    }
    return report;
}

nlohmann::json to_json(const IntroducerSet& set)
{
    nlohmann::json evidence = nlohmann::json::array();
    for (const auto& [commit, lines] : set.evidence) {
        for (const auto& l : lines) {
            evidence.push_back({{"commit", commit}, {"path", l.path}, {"line", l.line_no}});
        }
    }
    return {{"fix", set.fix_commit},
            {"introducers", nlohmann::json(std::vector<std::string>(set.introducers.begin(), set.introducers.end()))},
            {"evidence", std::move(evidence)}};
}

}  // namespace commentrisk::szz
