#pragma once

namespace climkt::cli {

// Exit status: 0 success, 2 configuration or data error, 3 runtime failure.
int run_cli(int argc, char** argv);

}  // namespace climkt::cli
