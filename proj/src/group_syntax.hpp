// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shlin/common.hpp"

namespace shlin::detail {

// A group is a product of factors `var` or `var^exp`. Single-letter variables are written back to back;
// as soon as one name is longer, factors are separated by `.`.
using Factor = std::pair<Var, std::string>;

std::string format_factors(const std::vector<Factor>& factors);
std::vector<Factor> parse_factors(std::string_view text);

// Splits `a, b, c` at top-level commas (ignoring commas nested in (), [] or {}).
std::vector<std::string> split_top_level(std::string_view text, char sep = ',');

// Splits `[body]_{vars}` into body and variable-set text. A leading `↓` is skipped.
std::pair<std::string, std::string> split_element(std::string_view text);

} // namespace shlin::detail
