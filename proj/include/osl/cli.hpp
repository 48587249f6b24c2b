#pragma once

namespace osl {

// Entry point of the `osl` tool: `run`, `mc` and `sweep` subcommands.
int cli_main(int argc, const char* const* argv);

}  // namespace osl
