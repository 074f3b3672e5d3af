#pragma once

#include "commentrisk/git.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace commentrisk::bugfix {

/// Keyword heuristic for spotting bug-fixing commit messages.
struct KeywordRuleset {
    std::set<std::string> keywords;    ///< lowercase terms
    bool require_word_boundary = true;
    std::set<std::string> exclusions;  ///< lowercase terms that veto a match
    bool exclude_merges = false;

    /// fix, fixed, fixes, bug, defect, error, crash, fault, patch, resolve, resolves, solved
    static KeywordRuleset defaults();

    /// Throws InvalidParameter on an empty keyword set or a keyword that is also an exclusion.
    void validate() const;
};

bool is_bugfix(std::string_view message, const KeywordRuleset& rules);

/// Commits of `repo` (ascending by time) whose message passes `is_bugfix`.
std::vector<git::CommitMeta> find_bugfix_commits(const git::Repository& repo, const KeywordRuleset& rules);

/// Same selection over an already listed history.
std::vector<git::CommitMeta> filter_bugfix_commits(const std::vector<git::CommitMeta>& commits,
                                                   const KeywordRuleset& rules);

}  // namespace commentrisk::bugfix
