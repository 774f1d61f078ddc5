// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include "lexer.hpp"

#include <cctype>

namespace shlin::detail {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

[[noreturn]] void lex_error(int line, int col, const std::string& msg) {
    throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

} // namespace

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        int l = line, cl = col;
        auto single = [&](Tok k) {
            out.push_back({k, std::string(1, c), l, cl});
            advance(1);
        };
        switch (c) {
        case '(': single(Tok::LParen); continue;
        case ')': single(Tok::RParen); continue;
        case '[': single(Tok::LBrack); continue;
        case ']': single(Tok::RBrack); continue;
        case '{': single(Tok::LBrace); continue;
        case '}': single(Tok::RBrace); continue;
        case ',': single(Tok::Comma); continue;
        case '|': single(Tok::Bar); continue;
        case '.': single(Tok::Dot); continue;
        case '/': single(Tok::Slash); continue;
        default: break;
        }
        if (c == ':' && i + 1 < src.size() && src[i + 1] == '-') {
            out.push_back({Tok::Neck, ":-", l, cl});
            advance(2);
            continue;
        }
        if (c == '\'') {
            size_t j = i + 1;
            while (j < src.size() && src[j] != '\'') ++j;
            if (j >= src.size()) lex_error(l, cl, "unterminated quoted atom");
            std::string text(src.substr(i + 1, j - i - 1));
            // Quoted names are always symbols; a leading quote marker keeps them apart from variables.
            out.push_back({Tok::Ident, "'" + text, l, cl});
            advance(j - i + 1);
            continue;
        }
        if (ident_char(c)) {
            size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        lex_error(l, cl, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

bool TermReader::accept(Tok k) {
    if (peek().kind == k) {
        next();
        return true;
    }
    return false;
}

const Token& TermReader::expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what + (peek().kind == Tok::End ? " before end of input" : ", found '" + peek().text + "'"));
    return next();
}

void TermReader::fail(const std::string& msg) const {
    const Token& t = peek();
    throw Error(ErrorKind::SyntaxError, "line " + std::to_string(t.line) + ", column " + std::to_string(t.col) + ": " + msg);
}

Term TermReader::term() {
    if (accept(Tok::LBrack)) {
        if (accept(Tok::RBrack)) return Term::app("[]");
        Term head = term();
        return Term::app(".", {head, list_tail()});
    }
    if (peek().kind != Tok::Ident) fail(peek().kind == Tok::End ? "unexpected end of input" : "expected a term, found '" + peek().text + "'");
    std::string name = next().text;
    bool quoted = name.front() == '\'';
    if (quoted) name = name.substr(1);
    if (!quoted && is_variable_name(name)) return Term::var(name);
    std::vector<Term> args;
    if (accept(Tok::LParen)) {
        args.push_back(term());
        while (accept(Tok::Comma)) args.push_back(term());
        expect(Tok::RParen, "')'");
    }
    return Term::app(name, std::move(args));
}

Term TermReader::list_tail() {
    if (accept(Tok::Comma)) {
        Term head = term();
        return Term::app(".", {head, list_tail()});
    }
    if (accept(Tok::Bar)) {
        Term tail = term();
        expect(Tok::RBrack, "']'");
        return tail;
    }
    expect(Tok::RBrack, "']'");
    return Term::app("[]");
}

} // namespace shlin::detail
