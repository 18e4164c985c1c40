#ifndef SVDUP_CLI_HPP
#define SVDUP_CLI_HPP

namespace svdup {

/// Entry point shared by the svdup tool and in-process tests.
/// Subcommands: update, sequence, oracle, convert.
/// Exit codes: 0 success, 1 parse/IO error, 2 numerical failure.
int cli_main(int argc, const char* const* argv);

}  // namespace svdup

#endif
