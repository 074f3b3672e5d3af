#include "commentrisk/config.hpp"

#include "commentrisk/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace commentrisk::config {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected)
{
    throw Error(ErrorKind::ConfigError,
                "invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                    std::string(expected) + ")");
}

bool to_bool(std::string_view key, std::string_view v)
{
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    bad_value(key, v, "true/false");
}

double to_double(std::string_view key, std::string_view v)
{
    try {
        std::size_t used = 0;
        const std::string s(v);
        const double d = std::stod(s, &used);
        if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
    bad_value(key, v, "a number");
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v)
{
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "a non-negative integer");
    return out;
}

std::set<std::string> to_set(std::string_view v, bool lower)
{
    std::set<std::string> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        auto end = v.find(',', start);
        if (end == std::string_view::npos) end = v.size();
        auto item = std::string(trim(v.substr(start, end - start)));
        if (lower) std::transform(item.begin(), item.end(), item.begin(), [](unsigned char c) { return std::tolower(c); });
        if (!item.empty()) out.insert(std::move(item));
        start = end + 1;
    }
    return out;
}

}  // namespace

void ConfigBuilder::set(std::string_view key, std::string_view raw)
{
    const auto value = trim(raw);
    auto& c = config_;
    const bool first_in_layer = touched_lists_.insert(std::string(key)).second;

    if (key == "repo") {
        if (first_in_layer) c.repos.clear();
        RepoSpec spec;
        // path[=label] is awkward in key=value files, so the label follows a '@'.
        const auto at = value.rfind('@');
        spec.path = std::string(at == std::string_view::npos ? value : trim(value.substr(0, at)));
        if (at != std::string_view::npos) spec.label = std::string(trim(value.substr(at + 1)));
        if (spec.path.empty()) bad_value(key, value, "a repository path");
        if (spec.label.empty()) spec.label = spec.path.filename().string();
        c.repos.push_back(std::move(spec));
    } else if (key == "window") {
        if (first_in_layer) c.windows.clear();
        c.windows.push_back(records::parse_window(std::string(value)));
    } else if (key == "confidence") {
        c.confidence = to_double(key, value);
    } else if (key == "margin") {
        c.margin = to_double(key, value);
    } else if (key == "seed") {
        c.seed = to_int<std::uint64_t>(key, value);
    } else if (key == "keywords") {
        c.keywords.keywords = to_set(value, true);
    } else if (key == "exclusions") {
        c.keywords.exclusions = to_set(value, true);
    } else if (key == "require_word_boundary") {
        c.keywords.require_word_boundary = to_bool(key, value);
    } else if (key == "exclude_merges") {
        c.keywords.exclude_merges = to_bool(key, value);
    } else if (key == "szz.source_only") {
        c.szz.source_only = to_bool(key, value);
    } else if (key == "szz.skip_blank") {
        c.szz.skip_blank = to_bool(key, value);
    } else if (key == "szz.skip_comments") {
        c.szz.skip_comments = to_bool(key, value);
    } else if (key == "paths.test_components") {
        c.path_rules.test_components = to_set(value, false);
    } else if (key == "paths.doc_dirs") {
        c.path_rules.doc_dirs = to_set(value, false);
    } else if (key == "paths.doc_extensions") {
        c.path_rules.doc_extensions = to_set(value, true);
    } else if (key == "classifier") {
        if (value != "heuristic" && value != "llm" && value != "mock") bad_value(key, value, "heuristic, llm or mock");
        c.classifier = std::string(value);
    } else if (key == "endpoint.url") {
        c.endpoint.url = std::string(value);
    } else if (key == "endpoint.model") {
        c.endpoint.model = std::string(value);
    } else if (key == "endpoint.temperature") {
        c.endpoint.temperature = to_double(key, value);
    } else if (key == "endpoint.top_p") {
        c.endpoint.top_p = to_double(key, value);
    } else if (key == "endpoint.api_key_env") {
        c.endpoint.api_key_env = std::string(value);
    } else if (key == "endpoint.max_retries") {
        c.endpoint.max_retries = to_int<unsigned>(key, value);
    } else if (key == "endpoint.concurrency") {
        c.endpoint.concurrency = to_int<unsigned>(key, value);
    } else if (key == "endpoint.requests_per_second") {
        c.endpoint.requests_per_second = to_double(key, value);
    } else if (key == "endpoint.prompt") {
        if (value != "zero-shot" && value != "few-shot") bad_value(key, value, "zero-shot or few-shot");
        c.endpoint.prompt = std::string(value);
    } else if (key == "endpoint.shots") {
        c.endpoint.shots = to_int<std::size_t>(key, value);
    } else if (key == "endpoint.timeout_seconds") {
        c.endpoint.timeout_seconds = to_int<unsigned>(key, value);
    } else if (key == "endpoint.backoff_ms") {
        c.endpoint.backoff_ms = to_int<unsigned>(key, value);
    } else if (key == "mock.script") {
        c.mock_script = std::string(value);
    } else if (key == "strict_outdated") {
        c.categorize.strict_outdated = to_bool(key, value);
    } else if (key == "include_uncategorized") {
        c.include_uncategorized = to_bool(key, value);
    } else if (key == "zero_correction") {
        c.zero_correction = to_bool(key, value);
    } else if (key == "ci_level") {
        c.ci_level = to_double(key, value);
    } else if (key == "output_dir") {
        c.output_dir = std::string(value);
    } else if (key == "branch") {
        c.branch = std::string(value);
    } else if (key == "clock") {
        if (value == "author") c.clock = git::Clock::Author;
        else if (value == "committer") c.clock = git::Clock::Committer;
        else bad_value(key, value, "author or committer");
    } else if (key == "normalize_body") {
        c.normalize_body = to_bool(key, value);
    } else if (key == "jobs") {
        c.jobs = std::max(1u, to_int<unsigned>(key, value));
    } else {
        throw Error(ErrorKind::ConfigError, "unknown configuration key: " + std::string(key));
    }
}

void ConfigBuilder::parse(std::string_view text)
{
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            set(trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void PipelineConfig::validate() const
{
    if (repos.empty()) {
        throw Error(ErrorKind::ConfigError, "configuration names no repository");
    }
    std::set<std::string> labels;
    for (const auto& r : repos) {
        if (!labels.insert(r.label).second) {
            throw Error(ErrorKind::ConfigError, "duplicate repository label: " + r.label);
        }
    }
    if (windows.empty()) {
        throw Error(ErrorKind::ConfigError, "configuration names no window");
    }
    auto sorted = windows;
    for (const auto& w : sorted) {
        try {
            w.validate();
        } catch (const Error& e) {
            throw Error(ErrorKind::ConfigError, e.what());
        }
    }
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].lo_days < sorted[i - 1].hi_days) {
            throw Error(ErrorKind::ConfigError,
                        "windows overlap: (" + sorted[i - 1].label() + "] and (" + sorted[i].label() + "]");
        }
    }
    if (!(confidence > 0.0 && confidence < 1.0) || !(margin > 0.0 && margin < 1.0)) {
        throw Error(ErrorKind::ConfigError, "confidence and margin must lie in (0,1)");
    }
    if (!(ci_level > 0.0 && ci_level < 1.0)) {
        throw Error(ErrorKind::ConfigError, "ci_level must lie in (0,1)");
    }
    try {
        keywords.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::ConfigError, e.what());
    }
}

nlohmann::json PipelineConfig::to_json() const
{
    nlohmann::json repos_json = nlohmann::json::array();
    for (const auto& r : repos) repos_json.push_back({{"path", r.path.string()}, {"label", r.label}});
    nlohmann::json windows_json = nlohmann::json::array();
    for (const auto& w : windows) windows_json.push_back(w.label());
    return {
        {"repos", repos_json},
        {"windows", windows_json},
        {"confidence", confidence},
        {"margin", margin},
        {"seed", seed},
        {"keywords", keywords.keywords},
        {"exclusions", keywords.exclusions},
        {"require_word_boundary", keywords.require_word_boundary},
        {"exclude_merges", keywords.exclude_merges},
        {"szz", {{"source_only", szz.source_only}, {"skip_blank", szz.skip_blank}, {"skip_comments", szz.skip_comments}}},
        {"paths",
         {{"test_components", path_rules.test_components},
          {"doc_dirs", path_rules.doc_dirs},
          {"doc_extensions", path_rules.doc_extensions}}},
        {"classifier", classifier},
        {"endpoint",
         {{"url", endpoint.url},
          {"model", endpoint.model},
          {"temperature", endpoint.temperature},
          {"top_p", endpoint.top_p},
          {"api_key_env", endpoint.api_key_env},
          {"max_retries", endpoint.max_retries},
          {"concurrency", endpoint.concurrency},
          {"requests_per_second", endpoint.requests_per_second},
          {"prompt", endpoint.prompt},
          {"shots", endpoint.shots},
          {"timeout_seconds", endpoint.timeout_seconds},
          {"backoff_ms", endpoint.backoff_ms}}},
        {"mock_script", mock_script.string()},
        {"strict_outdated", categorize.strict_outdated},
        {"include_uncategorized", include_uncategorized},
        {"zero_correction", zero_correction},
        {"ci_level", ci_level},
        {"output_dir", output_dir.string()},
        {"branch", branch},
        {"clock", clock == git::Clock::Author ? "author" : "committer"},
        {"normalize_body", normalize_body},
        {"jobs", jobs},
    };
}

PipelineConfig parse_config(std::string_view text)
{
    ConfigBuilder builder;
    builder.parse(text);
    return builder.take();
}

PipelineConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::ConfigError, "cannot read config file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace commentrisk::config
