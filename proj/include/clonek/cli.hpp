#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace clonek {

// Dispatches one invocation. Reports go to `out`, diagnostics to `err`.
// Exit codes: 0 success, 1 semantic error (environment too short, domain
// mismatch, bound exceeded, unknown symbol), 2 parse or usage error,
// 3 counter-model found by `fol valid` / `fol implies`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace clonek
