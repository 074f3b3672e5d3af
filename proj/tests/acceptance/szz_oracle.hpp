#pragma once

#include "fixture_repo.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// 1-based indices of the lines of `before` left out of a longest common subsequence with `after`.
// Only well defined when lines are unique; the scripted repositories guarantee that.
std::vector<std::size_t> removed_lines(const std::vector<std::string>& before, const std::vector<std::string>& after);

// Bug-introducing commits of `fix`, computed straight from git: list the files the fix modifies or
// renames, diff each pair of blobs by LCS, blame the parent revision and collect the origin of
// every removed line. Origins newer than the fix are dropped. No line filters.
std::set<std::string> introducers(const fixture::Repo& repo, const std::string& fix);

// Scripted repository with pseudo-random edits, renames, deletions and fix commits.
struct ScriptedHistory {
    std::size_t commits = 0;
    std::size_t fixes = 0;
    std::size_t renames = 0;
};
ScriptedHistory script_history(fixture::Repo& repo, std::uint64_t seed, std::size_t commits);

}  // namespace oracle
