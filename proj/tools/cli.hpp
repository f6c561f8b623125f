#pragma once

namespace gridcell::cli {

/// Entry point of the gridcell command-line tool.
/// Exit codes: 0 success, 1 usage/config error, 2 validation failure,
/// 3 runtime (window rejection) error.
int run(int argc, const char* const* argv);

}  // namespace gridcell::cli
