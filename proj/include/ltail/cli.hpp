#pragma once

namespace ltail {

// ltail <command> [flags]; returns the process exit code
int run_cli(int argc, char** argv);

}  // namespace ltail
