#include "commentrisk/pipeline.hpp"

#include "commentrisk/bugfix.hpp"
#include "commentrisk/error.hpp"
#include "commentrisk/eval.hpp"
#include "commentrisk/jsonl.hpp"
#include "commentrisk/szz.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace commentrisk::pipeline {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::IoError, "sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

namespace {

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot write " + path.string());
    }
}

std::string utc_now()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    ::gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

fs::path stage_dir(const config::PipelineConfig& cfg, std::string_view stage)
{
    return cfg.output_dir / std::string(stage);
}

// Creates the stage directory; refuses to clobber an earlier run unless forced or resuming.
fs::path prepare_stage(const config::PipelineConfig& cfg, std::string_view stage, const StageOptions& opts)
{
    const auto dir = stage_dir(cfg, stage);
    if (fs::exists(dir / "manifest.json") && !opts.force && !opts.resume) {
        throw Error(ErrorKind::OutputExists,
                    std::string(stage) + " output already exists in " + dir.string() + " (use --force)");
    }
    fs::create_directories(dir);
    return dir;
}

nlohmann::json file_entries(const config::PipelineConfig& cfg, const std::vector<fs::path>& paths)
{
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& p : paths) {
        std::error_code ec;
        auto rel = fs::relative(p, cfg.output_dir, ec);
        entries.push_back({{"path", (ec || rel.empty() ? p : rel).generic_string()}, {"sha256", sha256_file(p)}});
    }
    return entries;
}

void write_manifest(const config::PipelineConfig& cfg, std::string_view stage, const std::vector<fs::path>& inputs,
                    const std::vector<fs::path>& outputs)
{
    const nlohmann::json manifest{
        {"stage", stage},
        {"tool_version", kToolVersion},
        {"config_sha256", sha256_hex(cfg.to_json().dump())},
        {"inputs", file_entries(cfg, inputs)},
        {"outputs", file_entries(cfg, outputs)},
        {"created_at", utc_now()},
    };
    write_file(stage_dir(cfg, stage) / "manifest.json", manifest.dump(2) + "\n");
}

git::Repository open_repo(const config::PipelineConfig& cfg, const config::RepoSpec& spec)
{
    return git::Repository::open(spec.path, {spec.label, cfg.branch, cfg.clock});
}

const config::RepoSpec& repo_spec(const config::PipelineConfig& cfg, const std::string& label)
{
    for (const auto& r : cfg.repos) {
        if (r.label == label) return r;
    }
    throw Error(ErrorKind::ConfigError, "repository '" + label + "' is not in the configuration");
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn)
{
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto worker = [&] {
        for (auto i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto threads = std::max<std::size_t>(1, std::min<std::size_t>(jobs, n));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::string window_file(std::string_view prefix, const records::Window& w)
{
    return std::string(prefix) + "_" + w.label() + ".jsonl";
}

}  // namespace

std::string sha256_file(const fs::path& path)
{
    return sha256_hex(read_file(path));
}

// ---------------------------------------------------------------------------------------------
// mine

nlohmann::json run_mine(const config::PipelineConfig& cfg, const StageOptions& opts)
{
    cfg.validate();
    const auto dir = prepare_stage(cfg, "mine", opts);

    struct RepoOutput {
        std::vector<git::CommitMeta> fixes;
        szz::BugIntroducingReport report;
        std::size_t commits = 0;
        std::size_t root_fixes = 0;
    };
    std::vector<RepoOutput> outputs(cfg.repos.size());
    parallel_for(cfg.repos.size(), cfg.jobs, [&](std::size_t i) {
        const auto repo = open_repo(cfg, cfg.repos[i]);
        const auto commits = repo.list_commits();
        auto& out = outputs[i];
        out.commits = commits.size();
        out.fixes = bugfix::filter_bugfix_commits(commits, cfg.keywords);
        std::vector<git::CommitMeta> with_parent;
        for (const auto& f : out.fixes) {
            if (f.parent_ids.empty()) ++out.root_fixes;
            else with_parent.push_back(f);
        }
        out.report = szz::find_all_bug_introducing(repo, with_parent, cfg.szz);
    });

    const auto bugfix_path = dir / "bugfixes.jsonl";
    const auto introducer_path = dir / "introducers.jsonl";
    const auto failure_path = dir / "failures.jsonl";
    jsonl::Writer bugfixes(bugfix_path);
    jsonl::Writer introducers(introducer_path);
    jsonl::Writer failures(failure_path);

    nlohmann::json summary{{"stage", "mine"}, {"repos", nlohmann::json::array()}};
    for (std::size_t i = 0; i < cfg.repos.size(); ++i) {
        const auto& label = cfg.repos[i].label;
        const auto& out = outputs[i];
        for (const auto& f : out.fixes) {
            bugfixes.write({{"repo", label}, {"commit", f.id}, {"author_time", f.author_time}, {"message", f.message}});
        }
        for (const auto& set : out.report.per_fix) {
            auto line = szz::to_json(set);
            line["repo"] = label;
            introducers.write(line);
        }
        for (const auto& fail : out.report.failures) {
            failures.write({{"repo", label}, {"fix", fail.fix_commit}, {"error", fail.error}});
        }
        summary["repos"].push_back({{"repo", label},
                                    {"commits", out.commits},
                                    {"bugfix_commits", out.fixes.size()},
                                    {"root_fixes_skipped", out.root_fixes},
                                    {"bug_introducing_commits", out.report.introducers.size()},
                                    {"failures", out.report.failures.size()}});
    }
    write_manifest(cfg, "mine", {}, {bugfix_path, introducer_path, failure_path});
    return summary;
}

// ---------------------------------------------------------------------------------------------
// sample

nlohmann::json run_sample(const config::PipelineConfig& cfg, const StageOptions& opts)
{
    cfg.validate();
    const auto introducer_path = stage_dir(cfg, "mine") / "introducers.jsonl";
    std::map<std::string, std::set<std::string>> introducers;
    jsonl::for_each(introducer_path, [&](const nlohmann::json& o, std::size_t line) {
        try {
            auto& set = introducers[o.at("repo").get<std::string>()];
            for (const auto& id : o.at("introducers")) set.insert(id.get<std::string>());
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line, e.what());
        }
    });

    const auto dir = prepare_stage(cfg, "sample", opts);
    struct RepoOutput {
        std::optional<records::SamplePlan> plan;
        records::TargetSelection selection;
    };
    std::vector<RepoOutput> outputs(cfg.repos.size());
    parallel_for(cfg.repos.size(), cfg.jobs, [&](std::size_t i) {
        const auto& spec = cfg.repos[i];
        const auto it = introducers.find(spec.label);
        if (it == introducers.end() || it->second.empty()) return;
        const auto repo = open_repo(cfg, spec);
        const auto plan = records::SamplePlan::make(it->second.size(), cfg.confidence, cfg.margin, cfg.seed);
        outputs[i].plan = plan;
        outputs[i].selection = records::select_targets(repo, it->second, plan, cfg.path_rules);
    });

    const auto targets_path = dir / "targets.jsonl";
    jsonl::Writer targets(targets_path);
    nlohmann::json summary{{"stage", "sample"}, {"repos", nlohmann::json::array()}};
    for (std::size_t i = 0; i < cfg.repos.size(); ++i) {
        const auto& label = cfg.repos[i].label;
        const auto& out = outputs[i];
        if (!out.plan) {
            summary["repos"].push_back({{"repo", label}, {"population", 0}, {"sample_size", 0}});
            continue;
        }
        for (const auto& [list, flag] : {std::pair{&out.selection.bug_targets, true},
                                         std::pair{&out.selection.nonbug_targets, false}}) {
            for (const auto& c : *list) {
                targets.write({{"repo", label}, {"commit", c.id}, {"is_bug_introducing", flag}});
            }
        }
        summary["repos"].push_back({{"repo", label},
                                    {"population", out.plan->population},
                                    {"sample_size", out.plan->sample_size},
                                    {"bug_targets", out.selection.bug_targets.size()},
                                    {"nonbug_targets", out.selection.nonbug_targets.size()},
                                    {"requested_nonbug", out.selection.requested_nonbug},
                                    {"insufficient_nonbug", out.selection.insufficient_nonbug}});
    }
    const auto summary_path = dir / "summary.json";
    write_file(summary_path, summary.dump(2) + "\n");
    write_manifest(cfg, "sample", {introducer_path}, {targets_path, summary_path});
    return summary;
}

// ---------------------------------------------------------------------------------------------
// extract

nlohmann::json run_extract(const config::PipelineConfig& cfg, const StageOptions& opts)
{
    cfg.validate();
    const auto targets_path = stage_dir(cfg, "sample") / "targets.jsonl";
    std::map<std::string, std::vector<std::pair<std::string, bool>>> by_repo;
    jsonl::for_each(targets_path, [&](const nlohmann::json& o, std::size_t line) {
        try {
            by_repo[o.at("repo").get<std::string>()].emplace_back(o.at("commit").get<std::string>(),
                                                                  o.at("is_bug_introducing").get<bool>());
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line, e.what());
        }
    });
    for (const auto& [label, _] : by_repo) (void)repo_spec(cfg, label);

    const auto dir = prepare_stage(cfg, "extract", opts);
    records::BuildOptions build;
    build.diff.normalize_body = cfg.normalize_body;

    // results[window][repo]
    std::vector<std::vector<records::BuildResult>> results(cfg.windows.size(),
                                                           std::vector<records::BuildResult>(cfg.repos.size()));
    parallel_for(cfg.repos.size(), cfg.jobs, [&](std::size_t r) {
        const auto it = by_repo.find(cfg.repos[r].label);
        if (it == by_repo.end()) return;
        const auto repo = open_repo(cfg, cfg.repos[r]);
        std::vector<records::Target> targets;
        for (const auto& [id, flag] : it->second) targets.push_back({repo.commit(id), flag});
        for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
            results[w][r] = records::build_records(repo, targets, cfg.windows[w], build);
        }
    });

    nlohmann::json summary{{"stage", "extract"}, {"windows", nlohmann::json::array()}};
    std::vector<fs::path> outputs;
    for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
        const auto path = dir / window_file("records", cfg.windows[w]);
        outputs.push_back(path);
        jsonl::Writer writer(path);
        nlohmann::json per_repo = nlohmann::json::array();
        for (std::size_t r = 0; r < cfg.repos.size(); ++r) {
            const auto& res = results[w][r];
            for (const auto& rec : res.records) writer.write(records::to_json(rec));
            nlohmann::json failures = nlohmann::json::array();
            for (const auto& f : res.failures) failures.push_back({{"commit", f.commit}, {"error", f.error}});
            per_repo.push_back({{"repo", cfg.repos[r].label},
                                {"records", res.records.size()},
                                {"dropped_empty_comment", res.dropped_empty_comment},
                                {"unbalanced_files", res.unbalanced_files},
                                {"failures", failures}});
        }
        summary["windows"].push_back({{"window", cfg.windows[w].label()}, {"repos", per_repo}});
    }
    const auto summary_path = dir / "summary.json";
    write_file(summary_path, summary.dump(2) + "\n");
    outputs.push_back(summary_path);
    write_manifest(cfg, "extract", {targets_path}, outputs);
    return summary;
}

// ---------------------------------------------------------------------------------------------
// classify

ClassifierBundle make_classifier(const config::PipelineConfig& cfg)
{
    ClassifierBundle bundle;
    if (cfg.classifier == "heuristic") {
        bundle.classifier = std::make_unique<classify::HeuristicClassifier>();
        bundle.concurrency = 1;
    } else if (cfg.classifier == "mock") {
        if (cfg.mock_script.empty()) {
            throw Error(ErrorKind::ConfigError, "classifier=mock needs mock.script");
        }
        bundle.classifier = std::make_unique<classify::MockClassifier>(classify::MockClassifier::load(cfg.mock_script));
        bundle.concurrency = 1;
    } else {
        llm::HttpEndpointConfig http;
        http.url = cfg.endpoint.url;
        if (const char* key = std::getenv(cfg.endpoint.api_key_env.c_str())) http.api_key = key;
        http.timeout = std::chrono::seconds(cfg.endpoint.timeout_seconds);
        bundle.endpoint = std::make_unique<llm::HttpChatEndpoint>(http);
        bundle.limiter = std::make_unique<llm::RateLimiter>(cfg.endpoint.requests_per_second);

        llm::LlmOptions options;
        options.model = cfg.endpoint.model;
        options.temperature = cfg.endpoint.temperature;
        options.top_p = cfg.endpoint.top_p;
        options.max_retries = cfg.endpoint.max_retries;
        options.initial_backoff = std::chrono::milliseconds(cfg.endpoint.backoff_ms);
        options.limiter = bundle.limiter.get();
        auto prompt = cfg.endpoint.prompt == "few-shot" ? llm::PromptTemplate::few_shot(cfg.endpoint.shots)
                                                        : llm::PromptTemplate::zero_shot();
        bundle.classifier = std::make_unique<llm::LlmClassifier>(std::move(prompt), *bundle.endpoint, options);
        bundle.concurrency = std::max(1u, cfg.endpoint.concurrency);
    }
    return bundle;
}

namespace {

using RowQueues = std::map<std::string, std::deque<classify::VerdictRow>>;

void collect_classified(const fs::path& path, RowQueues& done)
{
    if (!fs::exists(path)) return;
    jsonl::for_each(path, [&](const nlohmann::json& o, std::size_t line) {
        auto row = classify::verdict_row_from_json(o, line);
        if (row.verdict) done[row.key()].push_back(std::move(row));
    });
}

}  // namespace

nlohmann::json run_classify(const config::PipelineConfig& cfg, const StageOptions& opts)
{
    cfg.validate();
    const auto extract_dir = stage_dir(cfg, "extract");
    const auto dir = prepare_stage(cfg, "classify", opts);
    auto bundle = make_classifier(cfg);

    nlohmann::json summary{{"stage", "classify"}, {"classifier", cfg.classifier}, {"windows", nlohmann::json::array()}};
    std::vector<fs::path> inputs;
    std::vector<fs::path> outputs;
    for (const auto& window : cfg.windows) {
        const auto records_path = extract_dir / window_file("records", window);
        inputs.push_back(records_path);
        std::vector<records::MethodRecord> recs;
        jsonl::for_each(records_path, [&](const nlohmann::json& o, std::size_t line) {
            recs.push_back(records::record_from_json(o, line));
        });

        const auto out_path = dir / window_file("verdicts", window);
        const auto journal_path = fs::path(out_path.string() + ".partial");
        RowQueues done;
        if (opts.resume) {
            collect_classified(out_path, done);
            collect_classified(journal_path, done);
        } else {
            fs::remove(journal_path);
        }

        // Records without a verdict on disk, in input order.
        std::vector<std::size_t> todo;
        std::vector<std::optional<classify::VerdictRow>> rows(recs.size());
        {
            auto pending = done;
            for (std::size_t i = 0; i < recs.size(); ++i) {
                auto it = pending.find(classify::record_key(recs[i]));
                if (it != pending.end() && !it->second.empty()) {
                    rows[i] = std::move(it->second.front());
                    it->second.pop_front();
                } else {
                    todo.push_back(i);
                }
            }
        }

        std::vector<records::MethodRecord> batch;
        batch.reserve(todo.size());
        for (const auto i : todo) batch.push_back(recs[i]);
        jsonl::Writer journal(journal_path, true);
        const auto label = window.label();
        const auto outcomes = classify::classify_batch(
            batch, *bundle.classifier, bundle.concurrency, [&](std::size_t j, const classify::ClassifyOutcome& outcome) {
                if (outcome.verdict) journal.write(classify::to_json(classify::make_row(batch[j], label, outcome)));
            });
        for (std::size_t j = 0; j < todo.size(); ++j) rows[todo[j]] = classify::make_row(batch[j], label, outcomes[j]);

        std::size_t classified = 0;
        std::size_t unclassified = 0;
        {
            jsonl::Writer writer(out_path);
            for (auto& row : rows) {
                row->window = label;
                (row->verdict ? classified : unclassified)++;
                writer.write(classify::to_json(*row, cfg.categorize));
            }
        }
        fs::remove(journal_path);
        outputs.push_back(out_path);
        summary["windows"].push_back({{"window", label},
                                      {"records", recs.size()},
                                      {"classified", classified},
                                      {"unclassified", unclassified},
                                      {"resumed", recs.size() - todo.size()}});
    }
    const auto summary_path = dir / "summary.json";
    write_file(summary_path, summary.dump(2) + "\n");
    outputs.push_back(summary_path);
    write_manifest(cfg, "classify", inputs, outputs);
    return summary;
}

// ---------------------------------------------------------------------------------------------
// analyze

namespace {

nlohmann::json optional_number(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json row_json(const TableRow& r)
{
    return {{"repo", r.repo},
            {"window", r.window},
            {"a", r.table.a},
            {"b", r.table.b},
            {"c", r.table.c},
            {"d", r.table.d},
            {"odds_ratio", optional_number(r.odds_ratio)},
            {"ci_low", r.ci ? nlohmann::json(r.ci->first) : nlohmann::json(nullptr)},
            {"ci_high", r.ci ? nlohmann::json(r.ci->second) : nlohmann::json(nullptr)}};
}

TableRow make_table_row(std::string repo, std::string window, const stats::ContingencyTable& t,
                        const AnalysisOptions& options)
{
    TableRow row{std::move(repo), std::move(window), t, std::nullopt, std::nullopt};
    try {
        row.odds_ratio = stats::odds_ratio(t, options.zero_correction);
    } catch (const Error&) {
    }
    try {
        row.ci = stats::confidence_interval(t, options.ci_level, options.zero_correction);
    } catch (const Error&) {
    }
    return row;
}

}  // namespace

Analysis analyze(const std::vector<classify::VerdictRow>& rows, const std::vector<std::string>& window_order,
                 const AnalysisOptions& options)
{
    Analysis result;
    result.windows = window_order;
    std::map<std::string, std::map<std::string, std::vector<stats::Observation>>> grouped;
    for (const auto& row : rows) {
        if (std::find(result.windows.begin(), result.windows.end(), row.window) == result.windows.end()) {
            result.windows.push_back(row.window);
        }
        auto& obs = grouped[row.window][row.repo_name];
        if (!row.verdict) {
            ++result.unclassified;
            continue;
        }
        const auto category = classify::categorize(row.comment_changed, *row.verdict, options.categorize);
        const auto exposure = classify::exposure_of(category);
        if (exposure == stats::Exposure::Uncategorized && !options.include_uncategorized) ++result.uncategorized_excluded;
        obs.push_back({exposure, row.is_bug_introducing});
    }

    for (const auto& window : result.windows) {
        std::vector<stats::ContingencyTable> tables;
        for (const auto& [repo, obs] : grouped[window]) {
            const auto t = stats::tabulate(obs, options.include_uncategorized);
            tables.push_back(t);
            result.rows.push_back(make_table_row(repo, window, t, options));
        }
        result.rows.push_back(make_table_row("TOTAL", window, stats::pool(tables), options));
    }
    return result;
}

nlohmann::json Analysis::summary() const
{
    nlohmann::json out{{"windows", nlohmann::json::array()}};
    std::set<std::string> repos;
    for (const auto& window : windows) {
        nlohmann::json per_repo = nlohmann::json::array();
        nlohmann::json total;
        for (const auto& r : rows) {
            if (r.window != window) continue;
            if (r.repo == "TOTAL") {
                total = row_json(r);
            } else {
                per_repo.push_back(row_json(r));
                repos.insert(r.repo);
            }
        }
        out["windows"].push_back(
            {{"window", window},
             {"repos", per_repo},
             {"total", total},
             {"general",
              {{"exposed_event", total["a"]},
               {"non_exposed_event", total["b"]},
               {"exposed_no_event", total["c"]},
               {"non_exposed_no_event", total["d"]}}}});
    }

    // Odds ratio of every repository in every window, side by side.
    nlohmann::json comparison{{"windows", windows}, {"rows", nlohmann::json::array()}};
    repos.insert("TOTAL");
    for (const auto& repo : repos) {
        nlohmann::json ors = nlohmann::json::object();
        for (const auto& window : windows) {
            ors[window] = nullptr;
            for (const auto& r : rows) {
                if (r.window == window && r.repo == repo) ors[window] = optional_number(r.odds_ratio);
            }
        }
        comparison["rows"].push_back({{"repo", repo}, {"odds_ratios", ors}});
    }
    out["weekly_comparison"] = comparison;
    out["excluded"] = {{"unclassified", unclassified}, {"uncategorized", uncategorized_excluded}};
    return out;
}

std::string Analysis::csv() const
{
    std::string out = "repo,window,a,b,c,d,odds_ratio,ci_low,ci_high\n";
    auto num = [](const std::optional<double>& v) { return v ? stats::format_ratio(*v) : std::string("NA"); };
    for (const auto& r : rows) {
        out += r.repo + "," + r.window + "," + std::to_string(r.table.a) + "," + std::to_string(r.table.b) + "," +
               std::to_string(r.table.c) + "," + std::to_string(r.table.d) + "," + num(r.odds_ratio) + "," +
               num(r.ci ? std::optional<double>(r.ci->first) : std::nullopt) + "," +
               num(r.ci ? std::optional<double>(r.ci->second) : std::nullopt) + "\n";
    }
    return out;
}

nlohmann::json run_analyze(const config::PipelineConfig& cfg, const StageOptions& opts,
                           const std::vector<fs::path>& verdict_files)
{
    std::vector<fs::path> inputs = verdict_files;
    std::vector<std::string> order;
    if (inputs.empty()) {
        cfg.validate();
        for (const auto& w : cfg.windows) {
            inputs.push_back(stage_dir(cfg, "classify") / window_file("verdicts", w));
            order.push_back(w.label());
        }
    }

    std::vector<classify::VerdictRow> rows;
    for (const auto& path : inputs) {
        const auto fallback_window = path.stem().string();
        jsonl::for_each(path, [&](const nlohmann::json& o, std::size_t line) {
            auto row = classify::verdict_row_from_json(o, line);
            if (row.window.empty()) row.window = fallback_window;
            rows.push_back(std::move(row));
        });
    }

    AnalysisOptions options{cfg.categorize, cfg.include_uncategorized, cfg.zero_correction, cfg.ci_level};
    const auto analysis = analyze(rows, order, options);

    const auto dir = prepare_stage(cfg, "analyze", opts);
    const auto csv_path = dir / "contingency.csv";
    const auto summary_path = dir / "summary.json";
    write_file(csv_path, analysis.csv());
    auto summary = analysis.summary();
    write_file(summary_path, summary.dump(2) + "\n");
    write_manifest(cfg, "analyze", inputs, {csv_path, summary_path});
    summary["stage"] = "analyze";
    return summary;
}

// ---------------------------------------------------------------------------------------------
// eval

nlohmann::json run_eval(const config::PipelineConfig& cfg, const StageOptions& opts, const fs::path& dataset)
{
    const auto instances = classify::load_cup2(dataset);
    auto bundle = make_classifier(cfg);
    const auto result = eval::evaluate(*bundle.classifier, instances, bundle.concurrency);
    const auto m = eval::metrics(result.matrix);

    const auto dir = prepare_stage(cfg, "eval", opts);
    const auto csv_path = dir / "metrics.csv";
    std::string csv = "classifier,dataset,instances,tp,fp,tn,fn,failed,precision,recall,f1\n";
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,%llu,%llu,%llu,%llu,%zu,%.4f,%.4f,%.4f\n", cfg.classifier.c_str(),
                  dataset.filename().string().c_str(), instances.size(),
                  static_cast<unsigned long long>(result.matrix.tp), static_cast<unsigned long long>(result.matrix.fp),
                  static_cast<unsigned long long>(result.matrix.tn), static_cast<unsigned long long>(result.matrix.fn),
                  result.failed, m.precision, m.recall, m.f1);
    csv += buf;
    write_file(csv_path, csv);
    write_manifest(cfg, "eval", {dataset}, {csv_path});
    return {{"stage", "eval"},
            {"classifier", cfg.classifier},
            {"dataset", dataset.string()},
            {"instances", instances.size()},
            {"tp", result.matrix.tp},
            {"fp", result.matrix.fp},
            {"tn", result.matrix.tn},
            {"fn", result.matrix.fn},
            {"failed", result.failed},
            {"precision", m.precision},
            {"recall", m.recall},
            {"f1", m.f1}};
}

// ---------------------------------------------------------------------------------------------
// report

namespace {

std::string cell(const nlohmann::json& v)
{
    if (v.is_null()) return "NA";
    if (v.is_number_float()) return stats::format_ratio(v.get<double>());
    return v.dump();
}

std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

}  // namespace

std::string render_report(const nlohmann::json& summary)
{
    std::ostringstream out;
    for (const auto& w : summary.at("windows")) {
        const auto window = w.at("window").get<std::string>();
        out << "Window (" << window << "] days: records per repository\n";
        out << pad("Repo", 12) << pad("Exp/Event", 12) << pad("NonExp/Event", 14) << pad("Exp/NoEvent", 13)
            << pad("NonExp/NoEv", 13) << pad("Odds ratio", 14) << "\n";
        auto line = [&](const nlohmann::json& r) {
            out << pad(r.at("repo").get<std::string>(), 12) << pad(cell(r.at("a")), 12) << pad(cell(r.at("b")), 14)
                << pad(cell(r.at("c")), 13) << pad(cell(r.at("d")), 13) << pad(cell(r.at("odds_ratio")), 14) << "\n";
        };
        for (const auto& r : w.at("repos")) line(r);
        line(w.at("total"));
        const auto& g = w.at("general");
        out << "\nGeneral results, window (" << window << "]\n";
        out << pad("", 20) << pad("Exposed", 12) << pad("Non-exposed", 14) << "\n";
        out << pad("Event happening", 20) << pad(cell(g.at("exposed_event")), 12)
            << pad(cell(g.at("non_exposed_event")), 14) << "\n";
        out << pad("Event not happening", 20) << pad(cell(g.at("exposed_no_event")), 12)
            << pad(cell(g.at("non_exposed_no_event")), 14) << "\n\n";
    }

    const auto& cmp = summary.at("weekly_comparison");
    out << "Odds ratio by window\n" << pad("Repo", 12);
    for (const auto& w : cmp.at("windows")) out << pad("(" + w.get<std::string>() + "]", 16);
    out << "\n";
    for (const auto& row : cmp.at("rows")) {
        out << pad(row.at("repo").get<std::string>(), 12);
        for (const auto& w : cmp.at("windows")) out << pad(cell(row.at("odds_ratios").at(w.get<std::string>())), 16);
        out << "\n";
    }
    const auto& ex = summary.at("excluded");
    out << "\nExcluded: " << ex.at("unclassified") << " unclassified, " << ex.at("uncategorized")
        << " uncategorized-inconsistent records\n";
    return out.str();
}

std::string run_report(const config::PipelineConfig& cfg, const StageOptions& opts)
{
    const auto summary_path = stage_dir(cfg, "analyze") / "summary.json";
    nlohmann::json summary;
    try {
        summary = nlohmann::json::parse(read_file(summary_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, summary_path.string() + ": " + e.what());
    }
    auto text = render_report(summary);
    const auto dir = prepare_stage(cfg, "report", opts);
    const auto report_path = dir / "report.txt";
    write_file(report_path, text);
    write_manifest(cfg, "report", {summary_path}, {report_path});
    return text;
}

}  // namespace commentrisk::pipeline
