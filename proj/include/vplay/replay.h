#ifndef VPLAY_REPLAY_H_
#define VPLAY_REPLAY_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vplay/uno.h"

namespace vplay {

// A recorded session: everything needed to re-run it plus the transcript it
// produced.
//
//   vplay-replay 1
//   game uno
//   seats HVV
//   seed 42
//   move p1 play 7R
//   move p1 play W G
//   move p1 draw
//   ---
//   STEP uno.setup
//   ...
//   end 1234
struct ReplayMove {
  int seat = 0;  // 0-based
  HumanMove move;
};

enum class GameKind { kUno, kSevens, kHearts, kDominoes };

std::string_view GameName(GameKind game);
// Throws std::invalid_argument for unknown names.
GameKind ParseGame(std::string_view name);

struct ReplayFile {
  GameKind game = GameKind::kUno;
  std::vector<SeatKind> seats;
  std::uint64_t seed = 0;
  // Seed of the headless human stand-ins in the non-UNO games.
  std::uint64_t human_seed = 1;
  std::vector<ReplayMove> moves;
  std::vector<std::string> transcript;
};

class ReplayParseError : public std::runtime_error {
 public:
  ReplayParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

// Throws ReplayParseError naming the 1-based offending line.
ReplayFile ParseReplay(std::string_view text);
std::string FormatReplay(const ReplayFile& file);

std::string FormatMove(const ReplayMove& m);
// `p1 play 7R`, `p2 play W G`, `p3 draw`, `p1 pass`.
std::optional<ReplayMove> ParseMove(std::string_view text);

struct ReplayRun {
  std::vector<std::string> transcript;
  // Set when the recorded moves could not be applied.
  std::string error;
};

// Re-executes the session from its header and moves.
ReplayRun ExecuteReplay(const ReplayFile& file);

struct ReplayVerdict {
  bool identical = false;
  // 1-based transcript line of the first difference.
  std::size_t line = 0;
  std::string expected;
  std::string actual;
  std::string error;
};

ReplayVerdict CheckReplay(const ReplayFile& file);
std::string FormatVerdict(const ReplayVerdict& v);

// Plays a UNO game, recording every human move and the transcript.
ReplayFile RecordUno(std::vector<SeatKind> seats, std::uint64_t seed,
                     const HumanMoveSource& humans, int max_turns = 100000);
// Plays one of the other games to completion.
ReplayFile RecordVariant(GameKind game, std::vector<SeatKind> seats,
                         std::uint64_t seed, std::uint64_t human_seed = 1);

// Plain-words description of a step label, or empty when unknown.
std::string_view StepDescription(std::string_view label);
// The transcript grouped by step with descriptions. The first
// `selection_runs` card selections are shown event by event; later ones are
// summarized in a line each.
std::string Walkthrough(const std::vector<std::string>& transcript,
                        int selection_runs = 1);

std::string SeatString(const std::vector<SeatKind>& seats);
// 'H' human, 'V' virtual; throws std::invalid_argument otherwise.
std::vector<SeatKind> ParseSeats(std::string_view text);

}  // namespace vplay

#endif  // VPLAY_REPLAY_H_
