#pragma once

namespace promptcast::cli {

/// Entry point of the promptcast command-line tool.
/// Exit codes: 0 success, 1 evaluation-time data errors, 2 configuration or
/// usage errors.
int run(int argc, const char* const* argv);

}  // namespace promptcast::cli
