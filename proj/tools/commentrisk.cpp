// commentrisk: command-line driver for the mining / classification / analysis pipeline.
#include "commentrisk/config.hpp"
#include "commentrisk/error.hpp"
#include "commentrisk/pipeline.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace commentrisk;

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    bool force = false;
    bool resume = false;
};

config::PipelineConfig build_config(const Common& common, const std::vector<std::string>& extra)
{
    config::ConfigBuilder builder;
    if (!common.config_path.empty()) {
        std::ifstream in(common.config_path, std::ios::binary);
        if (!in) throw Error(ErrorKind::ConfigError, "cannot read config file " + common.config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        builder.parse(ss.str());
    }
    builder.begin_layer();
    auto apply = [&](const std::string& kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "--set expects key=value, got '" + kv + "'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        builder.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    };
    for (const auto& kv : common.overrides) apply(kv);
    for (const auto& kv : extra) apply(kv);
    return builder.take();
}

int fail(ErrorKind kind, const std::string& message)
{
    std::cerr << nlohmann::json{{"error", to_string(kind)}, {"message", message}}.dump() << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mine bug-introducing commits, classify comment consistency and estimate odds ratios"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(pipeline::kToolVersion));

    Common common;
    app.add_option("-c,--config", common.config_path, "key = value configuration file");
    app.add_option("-s,--set", common.overrides, "override a setting (key=value); repeatable");
    app.add_flag("-f,--force", common.force, "overwrite existing stage output");

    auto* mine = app.add_subcommand("mine", "find bug-fixing commits and their bug-introducing commits");
    auto* sample = app.add_subcommand("sample", "draw bug-introducing and baseline target commits");
    auto* extract = app.add_subcommand("extract", "build method records for every window");
    auto* classify = app.add_subcommand("classify", "label comment consistency of every record");
    std::string classifier;
    classify->add_option("--classifier", classifier, "heuristic | llm | mock");
    classify->add_flag("--resume", common.resume, "keep verdicts from an interrupted run");
    auto* analyze = app.add_subcommand("analyze", "contingency tables and odds ratios");
    std::vector<std::string> verdict_files;
    analyze->add_option("--verdicts", verdict_files, "verdict files to analyze instead of the classify output")
        ->check(CLI::ExistingFile);
    auto* report = app.add_subcommand("report", "print the analysis as text tables");
    auto* eval = app.add_subcommand("eval", "score a classifier on a labelled dataset");
    std::string dataset;
    eval->add_option("--dataset", dataset, "JSONL dataset with old/new code and comments and a label")
        ->required()
        ->check(CLI::ExistingFile);
    std::string eval_classifier;
    eval->add_option("--classifier", eval_classifier, "heuristic | llm | mock");

    for (auto* sub : {mine, sample, extract, classify, analyze, report, eval}) {
        sub->add_option("-c,--config", common.config_path, "key = value configuration file");
        sub->add_option("-s,--set", common.overrides, "override a setting (key=value); repeatable");
        sub->add_flag("-f,--force", common.force, "overwrite existing stage output");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<std::string> extra;
        if (!classifier.empty()) extra.push_back("classifier=" + classifier);
        if (!eval_classifier.empty()) extra.push_back("classifier=" + eval_classifier);
        const auto cfg = build_config(common, extra);
        const pipeline::StageOptions opts{common.force, common.resume};

        nlohmann::json summary;
        if (mine->parsed()) summary = pipeline::run_mine(cfg, opts);
        else if (sample->parsed()) summary = pipeline::run_sample(cfg, opts);
        else if (extract->parsed()) summary = pipeline::run_extract(cfg, opts);
        else if (classify->parsed()) summary = pipeline::run_classify(cfg, opts);
        else if (analyze->parsed()) {
            std::vector<std::filesystem::path> files(verdict_files.begin(), verdict_files.end());
            summary = pipeline::run_analyze(cfg, opts, files);
        } else if (eval->parsed()) summary = pipeline::run_eval(cfg, opts, dataset);
        else if (report->parsed()) {
            std::cout << pipeline::run_report(cfg, opts);
            return 0;
        }
        std::cout << summary.dump(2) << "\n";
        return 0;
    } catch (const ParseError& e) {
        return fail(e.kind(), e.what());
    } catch (const Error& e) {
        return fail(e.kind(), e.what());
    } catch (const std::exception& e) {
        return fail(ErrorKind::IoError, e.what());
    }
}
