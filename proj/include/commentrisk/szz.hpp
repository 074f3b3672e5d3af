#pragma once

#include "commentrisk/git.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

namespace commentrisk::szz {

/// Which blamed lines are ignored. All on by default (B-SZZ with comment/blank filtering).
struct SzzFilters {
    bool source_only = true;    ///< only `.java` paths
    bool skip_blank = true;
    bool skip_comments = true;  ///< lines holding only comment text

    static SzzFilters none() { return {false, false, false}; }
};

struct BlamedLine {
    std::string path;
    std::size_t line_no = 0;  ///< line number in the fix's first parent

    friend bool operator==(const BlamedLine&, const BlamedLine&) = default;
};

struct IntroducerSet {
    std::string fix_commit;
    std::set<std::string> introducers;
    std::map<std::string, std::vector<BlamedLine>> evidence;  ///< keyed by introducer
};

struct FixFailure {
    std::string fix_commit;
    std::string error;
};

struct BugIntroducingReport {
    std::set<std::string> introducers;
    std::vector<IntroducerSet> per_fix;
    std::vector<FixFailure> failures;
};

/// Blames, at the fix's first parent, every line the fix deletes or replaces.
/// Throws NoParent for root commits and UnknownCommit for ids the repository lacks.
IntroducerSet find_introducers(const git::Repository& repo, const git::CommitMeta& fix, const SzzFilters& filters = {});

/// Union over all fixes. Per-fix errors are collected in the report instead of aborting.
BugIntroducingReport find_all_bug_introducing(const git::Repository& repo, const std::vector<git::CommitMeta>& fixes,
                                              const SzzFilters& filters = {});

/// `{"fix": ..., "introducers": [...], "evidence": [{"commit", "path", "line"}...]}`
nlohmann::json to_json(const IntroducerSet& set);

}  // namespace commentrisk::szz
