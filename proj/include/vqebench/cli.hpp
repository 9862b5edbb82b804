// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>

namespace vqebench {

enum ExitCode : int { kExitOk = 0, kExitUnconverged = 1, kExitInputError = 2 };

/// Command-line entry point; results go to `out` (or --out), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vqebench
