#include "commentrisk/bugfix.hpp"

#include "commentrisk/error.hpp"

#include <algorithm>
#include <cctype>

namespace commentrisk::bugfix {

namespace {

bool is_word_char(char c)
{
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || u >= 0x80;
}

std::string lowercase(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool contains_term(const std::string& haystack, const std::string& term, bool word_boundary)
{
    if (term.empty()) return false;
    for (auto pos = haystack.find(term); pos != std::string::npos; pos = haystack.find(term, pos + 1)) {
        if (!word_boundary) return true;
        const bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]);
        const auto after = pos + term.size();
        const bool right_ok = after >= haystack.size() || !is_word_char(haystack[after]);
        if (left_ok && right_ok) return true;
    }
    return false;
}

}  // namespace

KeywordRuleset KeywordRuleset::defaults()
{
    KeywordRuleset rules;
    rules.keywords = {"fix",   "fixed", "fixes", "bug",     "defect",   "error",
                      "crash", "fault", "patch", "resolve", "resolves", "solved"};
    return rules;
}

void KeywordRuleset::validate() const
{
    if (keywords.empty()) {
        throw Error(ErrorKind::InvalidParameter, "keyword ruleset has no keywords");
    }
    for (const auto& k : keywords) {
        if (exclusions.count(k) != 0) {
            throw Error(ErrorKind::InvalidParameter, "'" + k + "' is both a keyword and an exclusion");
        }
    }
}

bool is_bugfix(std::string_view message, const KeywordRuleset& rules)
{
    if (message.empty()) return false;
    const auto text = lowercase(message);
    for (const auto& ex : rules.exclusions) {
        if (contains_term(text, ex, rules.require_word_boundary)) return false;
    }
    return std::any_of(rules.keywords.begin(), rules.keywords.end(), [&](const std::string& k) {
        return contains_term(text, k, rules.require_word_boundary);
    });
}

std::vector<git::CommitMeta> filter_bugfix_commits(const std::vector<git::CommitMeta>& commits,
                                                   const KeywordRuleset& rules)
{
    std::vector<git::CommitMeta> fixes;
    for (const auto& c : commits) {
        if (rules.exclude_merges && c.parent_ids.size() > 1) continue;
        if (is_bugfix(c.message, rules)) fixes.push_back(c);
    }
    return fixes;
}

std::vector<git::CommitMeta> find_bugfix_commits(const git::Repository& repo, const KeywordRuleset& rules)
{
    return filter_bugfix_commits(repo.list_commits(), rules);
}

}  // namespace commentrisk::bugfix
