#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fixture {

// Seconds since the epoch used as "day 0" by the scripted repositories.
inline constexpr std::int64_t kEpoch = 1'600'000'000;
inline constexpr std::int64_t kDay = 86'400;

// Temporary directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& prefix = "commentrisk");
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// Scratch git repository built commit by commit with pinned timestamps.
class Repo {
public:
    Repo();
    [[nodiscard]] const std::filesystem::path& path() const { return dir_.path(); }

    void write(const std::string& relpath, const std::string& content);
    void remove(const std::string& relpath);
    void move(const std::string& from, const std::string& to);

    // Stages everything and commits with author and committer time `time`; returns the hash.
    std::string commit(const std::string& message, std::int64_t time) { return commit(message, time, time); }
    std::string commit(const std::string& message, std::int64_t author_time, std::int64_t committer_time);
    std::string commit_at_day(const std::string& message, double day)
    {
        return commit(message, kEpoch + static_cast<std::int64_t>(day * kDay));
    }

    // Runs git in the repository; throws on failure.
    std::string git(const std::vector<std::string>& args) const;

private:
    TempDir dir_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// Directory holding the checked-in fixtures (set by the build).
std::filesystem::path fixtures_dir();

}  // namespace fixture
