#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relkanren::cli {

enum ExitCode : int {
  kAnswers = 0,
  kNoAnswers = 1,
  kBudgetExhausted = 2,
  kUnknownRuleset = 3,
  kInputError = 4,
};

// Environment variable supplying the default step budget.
inline constexpr const char* kMaxStepsEnv = "RELKANREN_MAX_STEPS";

/// Entry point shared by the executable and the tests. args excludes the
/// program name. Answer lines go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace relkanren::cli
