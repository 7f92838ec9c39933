#ifndef VPLAY_UNO_H_
#define VPLAY_UNO_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vplay/deck.h"
#include "vplay/protocols.h"
#include "vplay/table.h"

namespace vplay {

enum class SeatKind : std::uint8_t { kHuman, kVirtual };
enum class Direction : std::uint8_t { kClockwise, kCounterClockwise };

struct MatchState {
  UnoFace top;
  // Set exactly when `top` is black.
  std::optional<Color> designated_color;
  Direction direction = Direction::kClockwise;
  int turn = 0;
};

Color EffectiveColor(const MatchState& match);

// Black cards always match; otherwise the effective color or the printed
// symbol (number for numbers, kind for action cards) must agree.
bool UnoValid(const UnoFace& candidate, const MatchState& match);

enum class GameEventKind : std::uint8_t {
  kStart,
  kFlip,
  kPlay,
  kColor,
  kSkip,
  kReverse,
  kDraw,
  kPass,
  kReshuffle,
  kTurn,
  kWin,
};

std::string_view GameEventName(GameEventKind kind);

// Public game-level event. Seats are 0-based; `face` is set only for cards
// that everyone sees (plays and flips).
struct GameEvent {
  GameEventKind kind = GameEventKind::kTurn;
  int seat = -1;
  std::optional<UnoFace> face;
  std::optional<Color> color;
  int count = 0;
};

struct UnoConfig {
  std::vector<SeatKind> seats;
  int hand_size = 7;
  // Card faces to play with; empty means one standard 108-card deck.
  std::vector<UnoFace> universe;
};

enum class MoveKind : std::uint8_t { kPlay, kDraw, kPass };

struct HumanMove {
  MoveKind kind = MoveKind::kDraw;
  std::optional<UnoFace> face;
  std::optional<Color> color;
};

enum class MoveError : std::uint8_t {
  kNone,
  kFinished,
  kNotYourTurn,
  kVirtualSeat,
  kNotInHand,
  kIllegal,
  kNeedColor,
  kMustPlayDrawn,
  kNothingToPass,
};

std::string_view MoveErrorName(MoveError error);

struct TurnOutcome {
  int seat = -1;
  std::optional<UnoFace> played;
  int drawn = 0;
  int selections = 0;
};

// What one seat may see: its own hand, counts for everyone else, the public
// table and the legal plays for its hand.
struct SeatView {
  int seat = 0;
  std::vector<UnoFace> hand;
  std::vector<int> hand_counts;
  std::vector<SeatKind> kinds;
  int unplayed_count = 0;
  int discard_count = 0;
  UnoFace top;
  Color effective_color = Color::kRed;
  std::optional<Color> designated_color;
  Direction direction = Direction::kClockwise;
  int turn = 0;
  // Set while this seat decides whether to play the card it just drew.
  std::optional<UnoFace> drawn;
  std::vector<UnoFace> legal;
  bool finished = false;
  std::optional<int> winner;
};

class UnoGame {
 public:
  // Shuffles, deals, flips the first discard and picks a starting player.
  // Throws std::invalid_argument for fewer than 2 or more than 10 seats, or a
  // universe too small to deal from.
  UnoGame(UnoConfig config, RandomTape tape);

  int num_seats() const { return static_cast<int>(seats_.size()); }
  SeatKind kind(int seat) const { return seats_.at(seat).kind; }
  const std::vector<Card>& hand(int seat) const { return seats_.at(seat).hand; }
  // Top of the unplayed deck is the back element.
  const std::vector<Card>& unplayed() const { return unplayed_; }
  const std::vector<Card>& discard() const { return discard_; }
  const MatchState& match() const { return match_; }
  const std::vector<GameEvent>& events() const { return events_; }
  const Transcript& transcript() const { return table_.transcript; }
  Table& table() { return table_; }
  const std::vector<UnoFace>& universe() const { return universe_; }

  bool finished() const { return winner_.has_value(); }
  std::optional<int> winner() const { return winner_; }
  int turns() const { return turns_; }
  // Seat that has drawn and must now play that card or pass.
  bool awaiting_drawn_decision() const { return pending_drawn_.has_value(); }

  // Faces `seat` could play right now, deduplicated, in hand order.
  std::vector<UnoFace> LegalPlays(int seat) const;
  SeatView View(int seat) const;

  // Human turn state machine. Each call either applies the move and returns
  // kNone or changes nothing and names the problem.
  MoveError Play(int seat, const UnoFace& face,
                 std::optional<Color> color = std::nullopt);
  MoveError Draw(int seat);
  MoveError Pass(int seat);

  // One full turn for the virtual seat whose turn it is.
  TurnOutcome VirtualTurn(const SelectionOptions& options = {});

  // Every card of the universe is in exactly one place.
  bool Conserved() const;

 private:
  struct Seat {
    SeatKind kind;
    std::vector<Card> hand;
  };

  int Next(int seat, int steps = 1) const;
  void Emit(GameEvent event, const Card* shown = nullptr);
  void FlipInitial();
  // Draws up to `count` cards for `seat`; returns how many arrived.
  int DrawCards(int seat, int count);
  bool RefillFromDiscard();
  void PlayCard(int seat, Card card, std::optional<Color> color);
  void BeginTurn(int seat);
  SelectionResult SelectFor(int seat, const SelectionOptions& options);

  std::vector<UnoFace> universe_;
  std::vector<Seat> seats_;
  std::vector<Card> unplayed_;
  std::vector<Card> discard_;
  MatchState match_;
  Table table_;
  std::vector<GameEvent> events_;
  std::optional<int> winner_;
  std::optional<std::uint32_t> pending_drawn_;
  int turns_ = 0;
};

// Returns the next human move, or nullopt to abort the game.
using HumanMoveSource =
    std::function<std::optional<HumanMove>(const UnoGame& game, int seat)>;

struct RunResult {
  std::optional<int> winner;
  int turns = 0;
  bool aborted = false;
  bool conserved_throughout = true;
};

// Plays until someone wins, the source aborts, or `max_turns` turns pass.
RunResult RunGame(UnoGame& game, const HumanMoveSource& humans,
                  int max_turns = 100000);

// A human stand-in that plays a uniformly random legal card (or draws when it
// has none, then plays the drawn card if it can) from its own seeded stream.
HumanMoveSource RandomHuman(std::uint64_t seed);

// Replays a fixed list of moves in order; aborts when it runs out.
HumanMoveSource ScriptedHuman(std::vector<HumanMove> moves);

}  // namespace vplay

#endif  // VPLAY_UNO_H_
