#pragma once

#include "commentrisk/classify.hpp"
#include "commentrisk/config.hpp"
#include "commentrisk/llm.hpp"
#include "commentrisk/stats.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace commentrisk::pipeline {

inline constexpr std::string_view kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view data);
/// Throws IoError when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

struct StageOptions {
    bool force = false;   ///< overwrite a stage that already has a manifest
    bool resume = false;  ///< classify only: keep verdicts already on disk
};

/// Mine: bug-fixing commits and SZZ introducers per repository.
/// Writes mine/bugfixes.jsonl, mine/introducers.jsonl, mine/failures.jsonl.
nlohmann::json run_mine(const config::PipelineConfig& cfg, const StageOptions& opts);

/// Sample: bug-introducing and baseline targets. Writes sample/targets.jsonl, sample/summary.json.
nlohmann::json run_sample(const config::PipelineConfig& cfg, const StageOptions& opts);

/// Extract: method records per window. Writes extract/records_<lo>-<hi>.jsonl.
nlohmann::json run_extract(const config::PipelineConfig& cfg, const StageOptions& opts);

/// Classify: verdicts per window. Writes classify/verdicts_<lo>-<hi>.jsonl. While running, finished
/// verdicts are journaled to `<file>.partial` so an interrupted run can resume.
nlohmann::json run_classify(const config::PipelineConfig& cfg, const StageOptions& opts);

/// Analyze: contingency tables and odds ratios. Reads the configured windows' verdict files, or
/// `verdict_files` when given. Writes analyze/contingency.csv and analyze/summary.json.
nlohmann::json run_analyze(const config::PipelineConfig& cfg, const StageOptions& opts,
                           const std::vector<std::filesystem::path>& verdict_files = {});

/// Eval: scores the configured classifier on a CUP2-layout dataset. Writes eval/metrics.csv.
nlohmann::json run_eval(const config::PipelineConfig& cfg, const StageOptions& opts,
                        const std::filesystem::path& dataset);

/// Report: human-readable tables from analyze/summary.json. Writes report/report.txt.
std::string run_report(const config::PipelineConfig& cfg, const StageOptions& opts);

/// Classifier built from configuration, owning whatever the classifier borrows.
struct ClassifierBundle {
    std::unique_ptr<llm::ChatEndpoint> endpoint;
    std::unique_ptr<llm::RateLimiter> limiter;
    std::unique_ptr<classify::Classifier> classifier;
    unsigned concurrency = 1;
};

ClassifierBundle make_classifier(const config::PipelineConfig& cfg);

struct TableRow {
    std::string repo;
    std::string window;
    stats::ContingencyTable table;
    std::optional<double> odds_ratio;
    std::optional<std::pair<double, double>> ci;
};

struct Analysis {
    std::vector<std::string> windows;  ///< in analysis order
    std::vector<TableRow> rows;        ///< per (window, repo), then a "TOTAL" row per window
    std::size_t unclassified = 0;
    std::size_t uncategorized_excluded = 0;

    [[nodiscard]] nlohmann::json summary() const;
    [[nodiscard]] std::string csv() const;
};

struct AnalysisOptions {
    classify::CategorizeOptions categorize;
    bool include_uncategorized = false;
    bool zero_correction = false;
    double ci_level = 0.95;
};

/// Groups rows by window and repository and computes every table. Pooled rows sum the cells.
Analysis analyze(const std::vector<classify::VerdictRow>& rows, const std::vector<std::string>& window_order,
                 const AnalysisOptions& options);

/// Renders analyze/summary.json as text tables (per window, weekly comparison, general counts).
std::string render_report(const nlohmann::json& summary);

}  // namespace commentrisk::pipeline
