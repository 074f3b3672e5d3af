#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace commentrisk::java {

enum class TokenKind {
    Identifier,
    Number,
    String,
    Char,
    TextBlock,
    LineComment,
    BlockComment,
    Punct,
};

struct Token {
    TokenKind kind = TokenKind::Punct;
    std::size_t begin = 0;     ///< byte offset into the source
    std::size_t end = 0;       ///< one past the last byte
    std::size_t line = 1;      ///< 1-based line of `begin`
    std::size_t end_line = 1;  ///< 1-based line of the last byte
    bool first_on_line = false;

    [[nodiscard]] bool is_comment() const noexcept
    {
        return kind == TokenKind::LineComment || kind == TokenKind::BlockComment;
    }
    [[nodiscard]] std::string_view text(std::string_view src) const noexcept
    {
        return src.substr(begin, end - begin);
    }
};

/// Best-effort Java lexer. Total over arbitrary bytes: unterminated literals end at the
/// line break (strings, chars) or at end of input (text blocks, block comments).
std::vector<Token> tokenize(std::string_view source);

/// Per-line flags (index 0 is line 1): true when the line holds comment text and no code.
std::vector<bool> comment_only_lines(std::string_view source);

struct MethodInfo {
    /// `Outer.Inner#name(T1,T2)`; the type path is empty for methods outside any type.
    std::string signature_key;
    std::string name;
    std::string body_text;        ///< source slice from signature start through the closing brace
    std::string leading_comment;  ///< raw comment text (delimiters included), or empty
    std::size_t start_line = 0;
    std::size_t end_line = 0;
    std::size_t begin_offset = 0;
    std::size_t end_offset = 0;
};

struct ExtractResult {
    std::vector<MethodInfo> methods;
    bool unbalanced = false;  ///< brace imbalance detected; methods before it are still reported
};

/// Methods and constructors that have a body, in source order, including those of nested
/// types. Bodies of enum constants and anonymous or local classes are not descended into.
ExtractResult extract_methods(std::string_view source);

enum class MethodChangeKind { BodyChanged, CommentChanged, Both };

std::string_view to_string(MethodChangeKind kind) noexcept;

struct MethodChange {
    std::string key;
    MethodInfo old_method;
    MethodInfo new_method;
    MethodChangeKind change_kind = MethodChangeKind::BodyChanged;
};

struct DiffOptions {
    bool normalize_body = true;
};

struct PairResult {
    std::vector<MethodChange> changes;
    bool unbalanced = false;
};

/// Methods present in both versions (matched by signature key, in order of occurrence when a
/// key repeats) whose normalized body or normalized leading comment differs.
PairResult pair_and_diff(std::string_view old_source, std::string_view new_source, DiffOptions options = {});

/// Drops ASCII punctuation, collapses whitespace runs to one space, trims. Case is kept.
std::string normalize_comment(std::string_view comment);

/// Token texts joined by single spaces, so layout-only edits compare equal.
std::string normalize_body(std::string_view body);

}  // namespace commentrisk::java
