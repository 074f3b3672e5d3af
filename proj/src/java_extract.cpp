#include "commentrisk/java_extract.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <unordered_set>

namespace commentrisk::java {

namespace {

bool is_ident_start(unsigned char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c)
{
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

bool is_digit(unsigned char c)
{
    return c >= '0' && c <= '9';
}

bool is_space(unsigned char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> tokens;
        bool line_has_token = false;
        while (pos_ < src_.size()) {
            const auto c = static_cast<unsigned char>(src_[pos_]);
            if (is_space(c)) {
                if (c == '\n') line_has_token = false;
                advance();
                continue;
            }
            if (conflict_marker()) {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                continue;
            }
            Token tok;
            tok.begin = pos_;
            tok.line = line_;
            tok.first_on_line = !line_has_token;
            tok.kind = scan(c);
            tok.end = pos_;
            tok.end_line = line_;
            if (tok.end > tok.begin && src_[tok.end - 1] == '\n') {
                // Unterminated string that stopped at a newline keeps the newline out.
                --tok.end;
                --tok.end_line;
                --line_;
                --pos_;
            }
            line_has_token = true;
            tokens.push_back(tok);
        }
        return tokens;
    }

private:
    void advance()
    {
        if (src_[pos_] == '\n') ++line_;
        ++pos_;
    }

    [[nodiscard]] bool at(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    // `<<<<<<<`, `=======` or `>>>>>>>` at the start of a line, left behind by a merge.
    [[nodiscard]] bool conflict_marker() const
    {
        if (pos_ != 0 && src_[pos_ - 1] != '\n') return false;
        if (!at("<<<<<<<") && !at("=======") && !at(">>>>>>>")) return false;
        const auto next = pos_ + 7;
        return next >= src_.size() || src_[next] == ' ' || src_[next] == '\n' || src_[next] == '\r';
    }

    TokenKind scan(unsigned char c)
    {
        if (c == '/' && at("//")) {
            while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            return TokenKind::LineComment;
        }
        if (c == '/' && at("/*")) {
            pos_ += 2;
            while (pos_ < src_.size() && !at("*/")) advance();
            if (pos_ < src_.size()) pos_ += 2;
            return TokenKind::BlockComment;
        }
        if (c == '"' && at("\"\"\"")) {
            pos_ += 3;
            while (pos_ < src_.size() && !at("\"\"\"")) {
                if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
                advance();
            }
            if (pos_ < src_.size()) pos_ += 3;
            return TokenKind::TextBlock;
        }
        if (c == '"' || c == '\'') {
            quoted(static_cast<char>(c));
            return c == '"' ? TokenKind::String : TokenKind::Char;
        }
        if (is_ident_start(c)) {
            while (pos_ < src_.size() && is_ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            return TokenKind::Identifier;
        }
        if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            number();
            return TokenKind::Number;
        }
        advance();
        return TokenKind::Punct;
    }

    void quoted(char quote)
    {
        ++pos_;
        while (pos_ < src_.size()) {
            const char ch = src_[pos_];
            if (ch == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] != '\n') {
                pos_ += 2;
                continue;
            }
            if (ch == '\n') {
                advance();
                return;
            }
            ++pos_;
            if (ch == quote) return;
        }
    }

    void number()
    {
        while (pos_ < src_.size()) {
            const auto ch = static_cast<unsigned char>(src_[pos_]);
            if (is_ident_part(ch) || ch == '.') {
                const bool exponent = ch == 'e' || ch == 'E' || ch == 'p' || ch == 'P';
                ++pos_;
                if (exponent && pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

// Walks the token stream and recognises type and member declarations.
class Parser {
public:
    Parser(std::string_view src, const std::vector<Token>& tokens) : src_(src), toks_(tokens) {}

    ExtractResult run()
    {
        std::size_t pos = 0;
        while (pos < toks_.size()) {
            pos = skip_comments(pos);
            if (pos >= toks_.size()) break;
            if (is_punct(pos, '}')) {
                // Stray closer at top level.
                result_.unbalanced = true;
                ++pos;
                continue;
            }
            pos = member(pos, {});
        }
        std::stable_sort(result_.methods.begin(), result_.methods.end(),
                         [](const MethodInfo& a, const MethodInfo& b) { return a.begin_offset < b.begin_offset; });
        return std::move(result_);
    }

private:
    [[nodiscard]] std::string_view text(std::size_t i) const { return toks_[i].text(src_); }

    [[nodiscard]] bool is_punct(std::size_t i, char c) const
    {
        return i < toks_.size() && toks_[i].kind == TokenKind::Punct && src_[toks_[i].begin] == c;
    }

    [[nodiscard]] std::size_t skip_comments(std::size_t i) const
    {
        while (i < toks_.size() && toks_[i].is_comment()) ++i;
        return i;
    }

    [[nodiscard]] std::size_t next_code(std::size_t i) const { return skip_comments(i + 1); }

    // Index one past the closer matching the opener at `open`; npos when input ends first.
    [[nodiscard]] std::size_t skip_balanced(std::size_t open) const
    {
        const char opener = src_[toks_[open].begin];
        const char closer = opener == '{' ? '}' : opener == '(' ? ')' : ']';
        int depth = 0;
        for (std::size_t i = open; i < toks_.size(); ++i) {
            if (toks_[i].kind != TokenKind::Punct) continue;
            const char c = src_[toks_[i].begin];
            if (c == opener) {
                ++depth;
            } else if (c == closer) {
                if (--depth == 0) return i + 1;
            }
        }
        return std::string::npos;
    }

    // Parses the body of a type whose '{' was just consumed; returns the index after its '}'.
    std::size_t type_body(std::size_t pos, const std::string& path, bool is_enum)
    {
        if (is_enum) pos = enum_constants(pos);
        while (true) {
            pos = skip_comments(pos);
            if (pos >= toks_.size()) {
                result_.unbalanced = true;
                return pos;
            }
            if (is_punct(pos, '}')) return pos + 1;
            if (is_punct(pos, ';')) {
                ++pos;
                continue;
            }
            pos = member(pos, path);
        }
    }

    // Skips enum constants up to the ';' that ends them or the enum's closing '}' (left unconsumed).
    std::size_t enum_constants(std::size_t pos)
    {
        while (pos < toks_.size()) {
            if (toks_[pos].kind == TokenKind::Punct) {
                const char c = src_[toks_[pos].begin];
                if (c == ';') return pos + 1;
                if (c == '}') return pos;
                if (c == '(' || c == '{' || c == '[') {
                    const auto after = skip_balanced(pos);
                    if (after == std::string::npos) return toks_.size();
                    pos = after;
                    continue;
                }
            }
            ++pos;
        }
        return pos;
    }

    // Length of the annotation starting at `i` ('@' token), in tokens; 0 if not an annotation.
    [[nodiscard]] std::size_t annotation_length(std::size_t i) const
    {
        if (!is_punct(i, '@')) return 0;
        auto j = next_code(i);
        if (j >= toks_.size() || toks_[j].kind != TokenKind::Identifier || text(j) == "interface") return 0;
        auto end = j + 1;  // comments after the annotation are not part of it
        j = next_code(j);
        while (is_punct(j, '.')) {
            const auto k = next_code(j);
            if (k >= toks_.size() || toks_[k].kind != TokenKind::Identifier) break;
            end = k + 1;
            j = next_code(k);
        }
        if (is_punct(j, '(')) {
            const auto after = skip_balanced(j);
            end = after == std::string::npos ? toks_.size() : after;
        }
        return end - i;
    }

    struct Header {
        std::vector<std::size_t> code;         // non-comment, non-annotation tokens
        std::vector<std::size_t> annotations;  // token indices that belong to annotations
    };

    // Parses one member starting at `pos` and returns the index after it.
    std::size_t member(std::size_t pos, const std::string& path)
    {
        Header header;
        int paren = 0;
        std::size_t i = pos;
        while (i < toks_.size()) {
            const auto& tok = toks_[i];
            if (tok.is_comment()) {
                ++i;
                continue;
            }
            if (paren == 0) {
                if (const auto len = annotation_length(i); len > 0) {
                    for (std::size_t k = i; k < i + len; ++k) header.annotations.push_back(k);
                    i += len;
                    continue;
                }
            }
            if (tok.kind == TokenKind::Punct) {
                const char c = src_[tok.begin];
                if (c == '(' || c == '[') {
                    ++paren;
                } else if (c == ')' || c == ']') {
                    paren = std::max(0, paren - 1);
                } else if (paren == 0) {
                    if (c == ';') return i + 1;
                    if (c == '}') return i;
                    if (c == '=') return skip_initializer(i);
                    if (c == '{') return block(i, header, path);
                }
            }
            header.code.push_back(i);
            ++i;
        }
        return i;
    }

    // Field initializer: skip to the terminating ';' at nesting depth 0.
    std::size_t skip_initializer(std::size_t i)
    {
        while (i < toks_.size()) {
            if (toks_[i].kind == TokenKind::Punct) {
                const char c = src_[toks_[i].begin];
                if (c == ';') return i + 1;
                if (c == '}') return i;
                if (c == '(' || c == '{' || c == '[') {
                    const auto after = skip_balanced(i);
                    if (after == std::string::npos) {
                        result_.unbalanced = true;
                        return toks_.size();
                    }
                    i = after;
                    continue;
                }
            }
            ++i;
        }
        return i;
    }

    std::size_t skip_block(std::size_t open)
    {
        const auto after = skip_balanced(open);
        if (after == std::string::npos) {
            result_.unbalanced = true;
            return toks_.size();
        }
        return after;
    }

    // A member header ended at the '{' at `open`.
    std::size_t block(std::size_t open, const Header& header, const std::string& path)
    {
        const auto& code = header.code;
        for (std::size_t k = 0; k < code.size(); ++k) {
            const auto idx = code[k];
            if (toks_[idx].kind != TokenKind::Identifier && !is_punct(idx, '@')) continue;
            const auto word = text(idx);
            const bool at_interface = is_punct(idx, '@') && k + 1 < code.size() && text(code[k + 1]) == "interface";
            const bool type_kw = word == "class" || word == "interface" || word == "enum" || at_interface;
            const bool record_kw = word == "record" && k + 2 < code.size() &&
                                   toks_[code[k + 1]].kind == TokenKind::Identifier &&
                                   (is_punct(code[k + 2], '(') || is_punct(code[k + 2], '<'));
            if (!type_kw && !record_kw) continue;
            const std::size_t name_at = at_interface ? k + 2 : k + 1;
            std::string name = name_at < code.size() && toks_[code[name_at]].kind == TokenKind::Identifier
                                   ? std::string(text(code[name_at]))
                                   : std::string("<anonymous>");
            const std::string nested = path.empty() ? name : path + "." + name;
            return type_body(open + 1, nested, word == "enum");
        }

        const auto method = method_shape(code);
        if (!method) return skip_block(open);  // initializer block or compact record constructor

        const auto close = skip_balanced(open);
        if (close == std::string::npos) {
            result_.unbalanced = true;
            return toks_.size();
        }

        MethodInfo info;
        info.name = std::string(text(method->name));
        info.signature_key = (path.empty() ? std::string() : path) + "#" + info.name + "(" +
                             parameter_types(method->open_paren, method->close_paren) + ")";
        const auto first = code.front();
        info.begin_offset = toks_[first].begin;
        info.end_offset = toks_[close - 1].end;
        info.start_line = toks_[first].line;
        info.end_line = toks_[close - 1].end_line;
        info.body_text = std::string(src_.substr(info.begin_offset, info.end_offset - info.begin_offset));
        info.leading_comment = leading_comment(first, header.annotations);
        result_.methods.push_back(std::move(info));
        return close;
    }

    struct MethodShape {
        std::size_t name;
        std::size_t open_paren;
        std::size_t close_paren;
    };

    // Recognises `... name ( params ) [dims] [throws T, U]` as a method or constructor header.
    [[nodiscard]] std::optional<MethodShape> method_shape(const std::vector<std::size_t>& code) const
    {
        std::size_t k = 0;
        for (; k < code.size(); ++k) {
            if (is_punct(code[k], '(')) break;
            if (text(code[k]) == "new") return std::nullopt;
        }
        if (k == 0 || k >= code.size()) return std::nullopt;
        const auto name = code[k - 1];
        if (toks_[name].kind != TokenKind::Identifier) return std::nullopt;
        if (k >= 2 && is_punct(code[k - 2], '.')) return std::nullopt;
        static const std::unordered_set<std::string_view> not_names{"if", "for", "while", "switch", "catch",
                                                                    "synchronized", "return", "throw", "try"};
        if (not_names.count(text(name)) != 0) return std::nullopt;

        int depth = 0;
        std::size_t close_k = k;
        for (; close_k < code.size(); ++close_k) {
            if (is_punct(code[close_k], '(')) ++depth;
            if (is_punct(code[close_k], ')') && --depth == 0) break;
        }
        if (close_k >= code.size()) return std::nullopt;

        // Only array dims and a throws clause may follow the parameter list.
        bool in_throws = false;
        for (std::size_t t = close_k + 1; t < code.size(); ++t) {
            const auto idx = code[t];
            const auto w = text(idx);
            if (w == "throws") {
                in_throws = true;
                continue;
            }
            if (w == "[" || w == "]") continue;
            if (in_throws && (toks_[idx].kind == TokenKind::Identifier || w == "." || w == "," || w == "<" ||
                              w == ">" || w == "?" || w == "&")) {
                continue;
            }
            return std::nullopt;
        }
        return MethodShape{name, code[k], code[close_k]};
    }

    // Comma-separated simple type names of the parameters between the given parens.
    [[nodiscard]] std::string parameter_types(std::size_t open, std::size_t close) const
    {
        std::vector<std::vector<std::size_t>> params(1);
        int depth = 0;
        std::size_t i = open + 1;
        while (i < close) {
            if (toks_[i].is_comment()) {
                ++i;
                continue;
            }
            if (depth == 0) {
                if (const auto len = annotation_length(i); len > 0) {
                    i += len;
                    continue;
                }
            }
            const auto w = text(i);
            if (toks_[i].kind == TokenKind::Punct) {
                const char c = w.front();
                if (c == '<' || c == '(') ++depth;
                if (c == '>' || c == ')') depth = std::max(0, depth - 1);
                if (c == ',' && depth == 0) {
                    params.emplace_back();
                    ++i;
                    continue;
                }
            }
            params.back().push_back(i);
            ++i;
        }

        std::string out;
        bool first_param = true;
        for (const auto& param : params) {
            if (param.empty()) continue;
            if (!first_param) out += ',';
            first_param = false;
            out += parameter_type(param);
        }
        return out;
    }

    [[nodiscard]] std::string parameter_type(const std::vector<std::size_t>& param) const
    {
        // Trailing dims after the name (`int a[]`) belong to the type.
        std::size_t end = param.size();
        std::string trailing_dims;
        while (end >= 2 && is_punct(param[end - 1], ']') && is_punct(param[end - 2], '[')) {
            trailing_dims += "[]";
            end -= 2;
        }
        // The last identifier is the parameter name, unless it is the only token.
        if (end >= 2 && toks_[param[end - 1]].kind == TokenKind::Identifier) --end;

        std::string type;
        int angle = 0;
        int dots = 0;
        for (std::size_t k = 0; k < end; ++k) {
            const auto idx = param[k];
            const auto w = text(idx);
            if (w == "<") {
                ++angle;
                continue;
            }
            if (w == ">") {
                angle = std::max(0, angle - 1);
                continue;
            }
            if (angle > 0) continue;
            if (toks_[idx].kind == TokenKind::Identifier) {
                dots = 0;
                if (w == "final" && type.empty()) continue;
                type = std::string(w);  // qualifier segments are overwritten by the simple name
                continue;
            }
            if (w == ".") {
                if (++dots == 3) {
                    type += "[]";
                    dots = 0;
                }
                continue;
            }
            dots = 0;
            if (w == "[" || w == "]") type += w;
        }
        return type + trailing_dims;
    }

    // The comment directly above the declaration whose first code token is `first`.
    [[nodiscard]] std::string leading_comment(std::size_t first, const std::vector<std::size_t>& annotations) const
    {
        auto is_annotation = [&](std::size_t i) {
            return std::find(annotations.begin(), annotations.end(), i) != annotations.end();
        };
        std::size_t i = first;
        while (i > 0) {
            --i;
            if (is_annotation(i)) continue;
            const auto& tok = toks_[i];
            if (!tok.is_comment()) return {};
            if (!tok.first_on_line) {
                if (i > 0 && is_annotation(i - 1)) continue;
                return {};
            }
            std::size_t begin = i;
            if (tok.kind == TokenKind::LineComment) {
                while (begin > 0) {
                    const auto& prev = toks_[begin - 1];
                    if (prev.kind != TokenKind::LineComment || !prev.first_on_line ||
                        prev.line + 1 != toks_[begin].line) {
                        break;
                    }
                    --begin;
                }
            }
            return std::string(src_.substr(toks_[begin].begin, tok.end - toks_[begin].begin));
        }
        return {};
    }

    std::string_view src_;
    const std::vector<Token>& toks_;
    ExtractResult result_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source)
{
    return Lexer(source).run();
}

std::vector<bool> comment_only_lines(std::string_view source)
{
    const auto line_count = static_cast<std::size_t>(std::count(source.begin(), source.end(), '\n')) +
                            (source.empty() || source.back() == '\n' ? 0 : 1);
    std::vector<bool> has_code(line_count + 1, false);
    std::vector<bool> has_comment(line_count + 1, false);
    for (const auto& tok : tokenize(source)) {
        auto& flags = tok.is_comment() ? has_comment : has_code;
        for (auto l = tok.line; l <= tok.end_line && l <= line_count; ++l) flags[l] = true;
    }
    std::vector<bool> result(line_count, false);
    for (std::size_t l = 1; l <= line_count; ++l) result[l - 1] = has_comment[l] && !has_code[l];
    return result;
}

ExtractResult extract_methods(std::string_view source)
{
    const auto tokens = tokenize(source);
    return Parser(source, tokens).run();
}

std::string_view to_string(MethodChangeKind kind) noexcept
{
    switch (kind) {
    case MethodChangeKind::BodyChanged: return "body_changed";
    case MethodChangeKind::CommentChanged: return "comment_changed";
    case MethodChangeKind::Both: return "both";
    }
    return "body_changed";
}

std::string normalize_comment(std::string_view comment)
{
    std::string out;
    out.reserve(comment.size());
    bool pending_space = false;
    for (const char ch : comment) {
        const auto c = static_cast<unsigned char>(ch);
        if (c < 0x80 && std::ispunct(c)) continue;
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out += ' ';
        pending_space = false;
        out += ch;
    }
    return out;
}

std::string normalize_body(std::string_view body)
{
    std::string out;
    out.reserve(body.size());
    for (const auto& tok : tokenize(body)) {
        if (!out.empty()) out += ' ';
        out += tok.text(body);
    }
    return out;
}

PairResult pair_and_diff(std::string_view old_source, std::string_view new_source, DiffOptions options)
{
    auto old_result = extract_methods(old_source);
    auto new_result = extract_methods(new_source);

    PairResult result;
    result.unbalanced = old_result.unbalanced || new_result.unbalanced;

    std::map<std::string, std::vector<MethodInfo*>> old_by_key;
    for (auto& m : old_result.methods) old_by_key[m.signature_key].push_back(&m);
    std::map<std::string, std::size_t> seen;

    for (auto& m : new_result.methods) {
        const auto occurrence = seen[m.signature_key]++;
        const auto it = old_by_key.find(m.signature_key);
        if (it == old_by_key.end() || occurrence >= it->second.size()) continue;
        const auto& old_m = *it->second[occurrence];

        const bool body_changed = options.normalize_body
                                      ? normalize_body(old_m.body_text) != normalize_body(m.body_text)
                                      : old_m.body_text != m.body_text;
        const bool comment_changed = normalize_comment(old_m.leading_comment) != normalize_comment(m.leading_comment);
        if (!body_changed && !comment_changed) continue;

        MethodChange change;
        change.key = m.signature_key;
        change.old_method = old_m;
        change.new_method = std::move(m);
        change.change_kind = body_changed && comment_changed ? MethodChangeKind::Both
                             : body_changed                  ? MethodChangeKind::BodyChanged
                                                             : MethodChangeKind::CommentChanged;
        result.changes.push_back(std::move(change));
    }
    return result;
}

}  // namespace commentrisk::java
