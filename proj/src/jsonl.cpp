#include "commentrisk/jsonl.hpp"

#include "commentrisk/error.hpp"

namespace commentrisk::jsonl {

void for_each(const std::filesystem::path& path, const std::function<void(const nlohmann::json&, std::size_t)>& fn)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        nlohmann::json object;
        try {
            object = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(line_no, e.what());
        }
        if (!object.is_object()) {
            throw ParseError(line_no, "expected a JSON object");
        }
        fn(object, line_no);
    }
}

Writer::Writer(const std::filesystem::path& path, bool append)
    : out_(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc)), path_(path)
{
    if (!out_) {
        throw Error(ErrorKind::IoError, "cannot write " + path.string());
    }
}

void Writer::write(const nlohmann::json& object)
{
    out_ << dump(object) << '\n';
    out_.flush();
    if (!out_) {
        throw Error(ErrorKind::IoError, "write failed: " + path_.string());
    }
}

std::string dump(const nlohmann::json& object)
{
    return object.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace commentrisk::jsonl
