#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

namespace commentrisk::jsonl {

/// Calls `fn(object, line_no)` for every non-blank line. Throws ParseError(line) on bad JSON
/// and IoError when the file cannot be opened.
void for_each(const std::filesystem::path& path, const std::function<void(const nlohmann::json&, std::size_t)>& fn);

/// Appends compact JSON objects, one per line, flushing after each write.
class Writer {
public:
    explicit Writer(const std::filesystem::path& path, bool append = false);

    void write(const nlohmann::json& object);

private:
    std::ofstream out_;
    std::filesystem::path path_;
};

/// Compact, key-sorted, UTF-8-replacing serialization used for every file we emit.
std::string dump(const nlohmann::json& object);

}  // namespace commentrisk::jsonl
