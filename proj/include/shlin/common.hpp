// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace shlin {

using Var = std::string;
using VarSet = std::set<Var>;

enum class ErrorKind {
    Clash,
    OccurCheck,
    UnificationFailure,
    InterestMismatch,
    TooLarge,
    NotInMatch,
    SyntaxError,
    PredicateMismatch,
    FixpointLimitExceeded,
    Overflow,
    InvalidArgument,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what);
    [[nodiscard]] ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

// Variables follow the lexical rule [u-z][a-z0-9_]*; `_` followed by digits is the reserved fresh form.
bool is_variable_name(std::string_view s);

VarSet set_union(const VarSet& a, const VarSet& b);
VarSet set_intersection(const VarSet& a, const VarSet& b);
VarSet set_difference(const VarSet& a, const VarSet& b);
bool is_subset(const VarSet& a, const VarSet& b);

// `{x,y,z}`
std::string format_varset(const VarSet& s);
// Accepts `{x,y}` or `x,y`; whitespace ignored.
VarSet parse_varset(std::string_view s);

std::string trim(std::string_view s);

} // namespace shlin
