// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include "group_syntax.hpp"

#include <algorithm>
#include <cctype>

namespace shlin::detail {

std::string format_factors(const std::vector<Factor>& factors) {
    bool long_names = std::any_of(factors.begin(), factors.end(), [](const Factor& f) { return f.first.size() > 1; });
    std::string out;
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i > 0 && long_names) out += '.';
        out += factors[i].first;
        if (!factors[i].second.empty()) out += "^" + factors[i].second;
    }
    return out;
}

namespace {

std::string read_exponent(std::string_view s, size_t& i) {
    if (s.substr(i, 3) == "inf") {
        i += 3;
        return "*";
    }
    if (i < s.size() && s[i] == '*') {
        ++i;
        return "*";
    }
    size_t b = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (b == i) throw Error(ErrorKind::SyntaxError, "missing exponent in group '" + std::string(s) + "'");
    return std::string(s.substr(b, i - b));
}

Factor parse_one_factor(std::string_view f, std::string_view whole) {
    size_t caret = f.find('^');
    std::string name = trim(f.substr(0, caret));
    if (!is_variable_name(name)) throw Error(ErrorKind::SyntaxError, "bad variable '" + name + "' in group '" + std::string(whole) + "'");
    std::string exp;
    if (caret != std::string_view::npos) {
        std::string rest = trim(f.substr(caret + 1));
        size_t i = 0;
        exp = read_exponent(rest, i);
        if (i != rest.size()) throw Error(ErrorKind::SyntaxError, "trailing text in group '" + std::string(whole) + "'");
    }
    return {name, exp};
}

} // namespace

std::vector<Factor> parse_factors(std::string_view text) {
    std::string s = trim(text);
    std::vector<Factor> out;
    if (s == "0" || s == "∅" || s.empty()) return out;
    if (s.find('.') != std::string::npos) {
        size_t start = 0;
        while (true) {
            size_t dot = s.find('.', start);
            out.push_back(parse_one_factor(std::string_view(s).substr(start, dot == std::string::npos ? std::string::npos : dot - start), s));
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
        return out;
    }
    // Single-letter form.
    std::vector<Factor> single;
    bool ok = true;
    size_t i = 0;
    try {
        while (i < s.size()) {
            char c = s[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            if (c < 'u' || c > 'z') {
                ok = false;
                break;
            }
            Factor f{std::string(1, c), ""};
            ++i;
            if (i < s.size() && s[i] == '^') {
                ++i;
                f.second = read_exponent(s, i);
            }
            single.push_back(f);
        }
    } catch (const Error&) {
        ok = false;
    }
    if (ok) return single;
    out.push_back(parse_one_factor(s, s));
    return out;
}

std::vector<std::string> split_top_level(std::string_view text, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    size_t start = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '(' || c == '[' || c == '{') ++depth;
        else if (c == ')' || c == ']' || c == '}') --depth;
        else if (c == sep && depth == 0) {
            parts.push_back(trim(text.substr(start, i - start)));
            start = i + 1;
        }
    }
    std::string last = trim(text.substr(start));
    if (!last.empty() || !parts.empty()) parts.push_back(last);
    return parts;
}

std::pair<std::string, std::string> split_element(std::string_view text) {
    std::string s = trim(text);
    const std::string down = "↓";
    if (s.rfind(down, 0) == 0) s = trim(s.substr(down.size()));
    if (s.empty() || s.front() != '[') throw Error(ErrorKind::SyntaxError, "element must start with '[': " + s);
    int depth = 0;
    size_t close = std::string::npos;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '[') ++depth;
        else if (s[i] == ']' && --depth == 0) {
            close = i;
            break;
        }
    }
    if (close == std::string::npos) throw Error(ErrorKind::SyntaxError, "unbalanced '[' in element: " + s);
    std::string body = s.substr(1, close - 1);
    std::string rest = trim(std::string_view(s).substr(close + 1));
    if (rest.empty() || rest.front() != '_') throw Error(ErrorKind::SyntaxError, "missing '_{vars}' suffix: " + s);
    return {body, rest.substr(1)};
}

} // namespace shlin::detail
