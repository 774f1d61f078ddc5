// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "shlin/oracle.hpp"

namespace shlin {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitIo = 2,
    kExitCounterexample = 3,
};

struct CliHooks {
    // When set and returning a callable, replaces the trial function of `verify` and `equiv` suites.
    std::function<TrialFn(const std::string& suite, const TrialConfig& cfg, DomainTag domain)> trial;
};

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliHooks& hooks = {});

} // namespace shlin
