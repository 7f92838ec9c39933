#ifndef VPLAY_TOOLS_CLI_H_
#define VPLAY_TOOLS_CLI_H_

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace vplay {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

// Shuffle counts of each protocol invocation in a transcript, keyed by
// protocol family ("card-selection", "lottery", "color", "choice", "and").
// Shuffles outside any protocol (dealing, reshuffles) are listed under "deck",
// one entry per game step.
std::map<std::string, std::vector<int>> ShuffleProfile(
    const std::vector<std::string>& transcript);

// Runs `vplay` with argv[1..]. Output goes to `out`, diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace vplay

#endif  // VPLAY_TOOLS_CLI_H_
