#include "commentrisk/records.hpp"

#include "commentrisk/error.hpp"
#include "commentrisk/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <thread>

namespace commentrisk::records {

namespace {

constexpr double kSecondsPerDay = 86400.0;

template <typename T>
T field(const nlohmann::json& o, const char* key, std::size_t line)
{
    const auto it = o.find(key);
    if (it == o.end()) {
        throw ParseError(line, std::string("missing field '") + key + "'");
    }
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(line, std::string("field '") + key + "' has the wrong type");
    }
}

std::string format_days(double d)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", d);
    return buf;
}

}  // namespace

nlohmann::json to_json(const MethodRecord& r)
{
    return {{"old_commit", r.old_commit},
            {"new_commit", r.new_commit},
            {"old_code", r.old_code},
            {"new_code", r.new_code},
            {"old_comment", r.old_comment},
            {"new_comment", r.new_comment},
            {"is_bug_introducing", r.is_bug_introducing},
            {"old_time", r.old_time},
            {"new_time", r.new_time},
            {"repo_name", r.repo_name},
            {"window_days_back", r.window_days_back},
            {"signature_key", r.signature_key},
            {"path", r.path}};
}

MethodRecord record_from_json(const nlohmann::json& o, std::size_t line)
{
    MethodRecord r;
    r.old_commit = field<std::string>(o, "old_commit", line);
    r.new_commit = field<std::string>(o, "new_commit", line);
    r.old_code = field<std::string>(o, "old_code", line);
    r.new_code = field<std::string>(o, "new_code", line);
    r.old_comment = field<std::string>(o, "old_comment", line);
    r.new_comment = field<std::string>(o, "new_comment", line);
    r.is_bug_introducing = field<bool>(o, "is_bug_introducing", line);
    r.old_time = field<std::int64_t>(o, "old_time", line);
    r.new_time = field<std::int64_t>(o, "new_time", line);
    r.repo_name = field<std::string>(o, "repo_name", line);
    r.window_days_back = field<double>(o, "window_days_back", line);
    r.signature_key = field<std::string>(o, "signature_key", line);
    r.path = o.value("path", std::string());
    return r;
}

std::size_t sample_size(std::size_t population, double confidence, double margin)
{
    if (population == 0) {
        throw Error(ErrorKind::InvalidParameter, "population must be at least 1");
    }
    if (!(margin > 0.0 && margin < 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "margin must lie in (0,1)");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "confidence must lie in (0,1)");
    }
    const double z = stats::z_two_sided(confidence);
    const double n0 = z * z * 0.25 / (margin * margin);
    const double n = n0 / (1.0 + (n0 - 1.0) / static_cast<double>(population));
    const auto rounded = static_cast<std::size_t>(std::ceil(n));
    return std::clamp<std::size_t>(rounded, 1, population);
}

SamplePlan SamplePlan::make(std::size_t population, double confidence, double margin, std::uint64_t seed)
{
    return {population, records::sample_size(population, confidence, margin), confidence, margin, seed};
}

bool PathRules::is_doc_or_test(const std::string& path) const
{
    const std::filesystem::path p(path);
    for (const auto& part : p.parent_path()) {
        const auto s = part.string();
        if (test_components.count(s) != 0 || doc_dirs.count(s) != 0) return true;
    }
    return doc_extensions.count(p.extension().string()) != 0;
}

TargetSelection select_targets(const git::Repository& repo, const std::set<std::string>& introducers,
                               const SamplePlan& plan, const PathRules& rules)
{
    if (introducers.empty()) {
        throw Error(ErrorKind::InvalidParameter, "select_targets needs at least one bug-introducing commit");
    }
    if (plan.sample_size > plan.population) {
        throw Error(ErrorKind::InvalidParameter, "sample size exceeds population");
    }

    const auto history = repo.list_commits();
    std::vector<git::CommitMeta> bug_pool;
    std::vector<git::CommitMeta> candidates;
    for (const auto& c : history) {
        (introducers.count(c.id) != 0 ? bug_pool : candidates).push_back(c);
    }

    std::mt19937_64 rng(plan.seed);
    TargetSelection sel;
    const auto bug_n = std::min(plan.sample_size, bug_pool.size());
    std::sample(bug_pool.begin(), bug_pool.end(), std::back_inserter(sel.bug_targets), bug_n, rng);

    std::vector<git::CommitMeta> survivors;
    for (auto& c : candidates) {
        const auto paths = repo.changed_paths(c);
        const bool only_docs = std::all_of(paths.begin(), paths.end(),
                                           [&](const std::string& p) { return rules.is_doc_or_test(p); });
        if (!only_docs) survivors.push_back(std::move(c));
    }
    sel.requested_nonbug = sel.bug_targets.size();
    const auto nonbug_n = std::min(sel.requested_nonbug, survivors.size());
    std::sample(survivors.begin(), survivors.end(), std::back_inserter(sel.nonbug_targets), nonbug_n, rng);
    sel.insufficient_nonbug = sel.nonbug_targets.size() < sel.requested_nonbug;
    return sel;
}

bool Window::contains_seconds(std::int64_t seconds_back) const noexcept
{
    const auto s = static_cast<double>(seconds_back);
    return s > lo_days * kSecondsPerDay && s <= hi_days * kSecondsPerDay;
}

std::string Window::label() const
{
    return format_days(lo_days) + "-" + format_days(hi_days);
}

void Window::validate() const
{
    if (!(lo_days >= 0.0) || !(lo_days < hi_days)) {
        throw Error(ErrorKind::InvalidParameter, "window needs 0 <= lo < hi, got (" + label() + "]");
    }
}

Window parse_window(const std::string& label)
{
    const auto sep = label.find_first_of("-,:", 1);
    if (sep == std::string::npos) {
        throw Error(ErrorKind::ConfigError, "window must look like 'lo-hi': " + label);
    }
    Window w;
    try {
        std::size_t used = 0;
        w.lo_days = std::stod(label.substr(0, sep), &used);
        const auto rest = label.substr(sep + 1);
        w.hi_days = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(label);
    } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigError, "window must look like 'lo-hi': " + label);
    }
    w.validate();
    return w;
}

namespace {

struct TargetOutput {
    std::vector<MethodRecord> records;
    std::string error;
    std::size_t dropped = 0;
    std::size_t unbalanced = 0;
};

TargetOutput build_for_target(const git::Repository& repo, const std::vector<git::CommitMeta>& history,
                              const Target& target, const Window& window, const BuildOptions& options)
{
    TargetOutput out;
    const auto& t = target.commit;
    const auto t_time = repo.time_of(t);
    const auto ancestors = repo.ancestors(t.id);
    for (const auto& prior : history) {
        if (prior.id == t.id || !window.contains_seconds(t_time - repo.time_of(prior))) continue;
        if (ancestors.count(prior.id) == 0) continue;

        for (const auto& file : repo.diff(prior.id, t.id, options.path_filter)) {
            if (!file.old_blob || !file.new_blob) continue;
            const auto pairs = java::pair_and_diff(*file.old_blob, *file.new_blob, options.diff);
            if (pairs.unbalanced) ++out.unbalanced;
            for (const auto& change : pairs.changes) {
                if (change.new_method.leading_comment.empty()) {
                    ++out.dropped;
                    continue;
                }
                MethodRecord r;
                r.old_commit = prior.id;
                r.new_commit = t.id;
                r.old_code = change.old_method.body_text;
                r.new_code = change.new_method.body_text;
                r.old_comment = change.old_method.leading_comment;
                r.new_comment = change.new_method.leading_comment;
                r.is_bug_introducing = target.is_bug_introducing;
                r.old_time = repo.time_of(prior);
                r.new_time = t_time;
                r.repo_name = repo.name();
                r.window_days_back = static_cast<double>(t_time - r.old_time) / kSecondsPerDay;
                r.signature_key = change.key;
                r.path = file.path;
                out.records.push_back(std::move(r));
            }
        }
    }
    return out;
}

}  // namespace

BuildResult build_records(const git::Repository& repo, const std::vector<Target>& targets, const Window& window,
                          const BuildOptions& options)
{
    window.validate();
    BuildResult result;
    if (targets.empty()) return result;

    const auto history = repo.list_commits();
    std::vector<TargetOutput> outputs(targets.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        // Each worker gets its own handle; handles are never shared across threads.
        const auto handle = git::Repository::open(repo.path(), repo.options());
        for (auto i = next++; i < targets.size(); i = next++) {
            try {
                outputs[i] = build_for_target(handle, history, targets[i], window, options);
            } catch (const Error& e) {
                outputs[i].error = std::string(to_string(e.kind())) + ": " + e.what();
            }
        }
    };
    const auto jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(targets.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < targets.size(); ++i) {
        auto& o = outputs[i];
        if (!o.error.empty()) result.failures.push_back({targets[i].commit.id, o.error});
        result.dropped_empty_comment += o.dropped;
        result.unbalanced_files += o.unbalanced;
        std::move(o.records.begin(), o.records.end(), std::back_inserter(result.records));
    }
    return result;
}

}  // namespace commentrisk::records
