#pragma once

namespace strichlab::cli {

/// Entry point of the command-line tool.  Returns 0 on success, 1 on usage
/// errors and 2 when a computed result violates a documented contract.
int run(int argc, char** argv);

}  // namespace strichlab::cli
