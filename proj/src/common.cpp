// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include "shlin/common.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>

namespace shlin {

const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::Clash: return "Clash";
    case ErrorKind::OccurCheck: return "OccurCheck";
    case ErrorKind::UnificationFailure: return "UnificationFailure";
    case ErrorKind::InterestMismatch: return "InterestMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotInMatch: return "NotInMatch";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::PredicateMismatch: return "PredicateMismatch";
    case ErrorKind::FixpointLimitExceeded: return "FixpointLimitExceeded";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

bool is_variable_name(std::string_view s) {
    if (s.empty()) return false;
    if (s[0] == '_') {
        if (s.size() < 2) return false;
        return std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; });
    }
    if (s[0] < 'u' || s[0] > 'z') return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    });
}

VarSet set_union(const VarSet& a, const VarSet& b) {
    VarSet r = a;
    r.insert(b.begin(), b.end());
    return r;
}

VarSet set_intersection(const VarSet& a, const VarSet& b) {
    VarSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.end()));
    return r;
}

VarSet set_difference(const VarSet& a, const VarSet& b) {
    VarSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.end()));
    return r;
}

bool is_subset(const VarSet& a, const VarSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

std::string format_varset(const VarSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& v : s) {
        if (!first) out += ",";
        out += v;
        first = false;
    }
    out += "}";
    return out;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

VarSet parse_varset(std::string_view s) {
    std::string t = trim(s);
    if (!t.empty() && t.front() == '{') {
        if (t.back() != '}') throw Error(ErrorKind::SyntaxError, "unterminated variable set: " + t);
        t = t.substr(1, t.size() - 2);
    }
    VarSet out;
    size_t start = 0;
    while (start <= t.size()) {
        size_t comma = t.find(',', start);
        std::string item = trim(std::string_view(t).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!item.empty()) {
            if (!is_variable_name(item)) throw Error(ErrorKind::SyntaxError, "not a variable: " + item);
            out.insert(item);
        } else if (comma != std::string::npos) {
            throw Error(ErrorKind::SyntaxError, "empty entry in variable set");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace shlin
