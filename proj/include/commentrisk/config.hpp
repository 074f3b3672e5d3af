#pragma once

#include "commentrisk/bugfix.hpp"
#include "commentrisk/classify.hpp"
#include "commentrisk/git.hpp"
#include "commentrisk/records.hpp"
#include "commentrisk/szz.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace commentrisk::config {

struct RepoSpec {
    std::filesystem::path path;
    std::string label;
};

struct EndpointSettings {
    std::string url = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;
    double top_p = 1.0;
    std::string api_key_env = "OPENAI_API_KEY";
    unsigned max_retries = 3;
    unsigned concurrency = 4;
    double requests_per_second = 0.0;
    std::string prompt = "zero-shot";  ///< zero-shot | few-shot
    std::size_t shots = 4;
    unsigned timeout_seconds = 60;
    unsigned backoff_ms = 500;
};

struct PipelineConfig {
    std::vector<RepoSpec> repos;
    std::vector<records::Window> windows{{0.0, 7.0}, {7.0, 14.0}};
    double confidence = 0.90;
    double margin = 0.10;
    std::uint64_t seed = 0;
    bugfix::KeywordRuleset keywords = bugfix::KeywordRuleset::defaults();
    szz::SzzFilters szz;
    records::PathRules path_rules;
    std::string classifier = "heuristic";  ///< heuristic | llm | mock
    EndpointSettings endpoint;
    std::filesystem::path mock_script;
    classify::CategorizeOptions categorize;
    bool include_uncategorized = false;
    bool zero_correction = false;
    double ci_level = 0.95;
    std::filesystem::path output_dir = "out";
    std::string branch = "HEAD";
    git::Clock clock = git::Clock::Author;
    bool normalize_body = true;
    unsigned jobs = 1;

    /// Throws ConfigError: no repository, invalid window, overlapping windows, bad ruleset.
    void validate() const;

    /// Deterministic JSON rendering of every setting (used for hashing and manifests).
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Applies `key = value` settings in layers (defaults, then file, then flags). Within a layer the
/// list keys (repo, window) accumulate; their first occurrence in a layer replaces the earlier list.
class ConfigBuilder {
public:
    explicit ConfigBuilder(PipelineConfig base = {}) : config_(std::move(base)) {}

    /// Throws ConfigError for unknown keys or unparsable values.
    void set(std::string_view key, std::string_view value);

    /// Parses a whole `key = value` text; `#` starts a comment line. Errors carry line numbers.
    void parse(std::string_view text);

    /// Starts a new layer.
    void begin_layer() { touched_lists_.clear(); }

    [[nodiscard]] const PipelineConfig& config() const noexcept { return config_; }
    PipelineConfig take() { return std::move(config_); }

private:
    PipelineConfig config_;
    std::set<std::string, std::less<>> touched_lists_;
};

PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace commentrisk::config
