// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "shlin/terms.hpp"

namespace shlin::detail {

enum class Tok { Ident, LParen, RParen, LBrack, RBrack, LBrace, RBrace, Comma, Bar, Dot, Neck, Slash, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

std::vector<Token> tokenize(std::string_view src);

// Recursive-descent reader over a token stream; errors carry line and column.
class TermReader {
  public:
    explicit TermReader(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Term term();
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool accept(Tok k);
    const Token& expect(Tok k, const char* what);
    [[noreturn]] void fail(const std::string& msg) const;
    bool at_end() const { return peek().kind == Tok::End; }

  private:
    Term list_tail();
    std::vector<Token> toks_;
    size_t pos_ = 0;
};

} // namespace shlin::detail
