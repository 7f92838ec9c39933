#ifndef VPLAY_VARIANTS_H_
#define VPLAY_VARIANTS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "vplay/deck.h"
#include "vplay/protocols.h"
#include "vplay/table.h"
#include "vplay/uno.h"

namespace vplay {

// Seats shared by the variant engines. Human seats pick a uniformly random
// legal move from their own seeded stream; the engines are headless.
struct VariantSeat {
  SeatKind kind = SeatKind::kVirtual;
  std::vector<Card> hand;
};

// ---------------------------------------------------------------- Sevens

struct SevensBoard {
  // Played ranks per suit as a closed interval, indexed by Suit.
  std::array<std::optional<std::pair<int, int>>, 4> runs;

  void Play(const StandardFace& face);
  // Every nonempty run is an interval containing 7.
  bool WellFormed() const;
};

bool SevensValid(const StandardFace& face, const SevensBoard& board);

class SevensGame {
 public:
  // Deals the standard deck round-robin. The holder of 7♦ is found by card
  // selection and opens with it; play continues from the next seat.
  SevensGame(std::vector<SeatKind> seats, RandomTape tape,
             std::uint64_t human_seed = 1);
  // Mid-game position with every seat virtual; `turn` acts next.
  SevensGame(std::vector<std::vector<Card>> hands, SevensBoard board, int turn,
             RandomTape tape);

  // Current seat plays (returns the face) or passes.
  std::optional<StandardFace> TakeTurn(const SelectionOptions& options = {});
  // Plays until a hand empties or `max_turns` turns pass.
  bool Run(int max_turns = 10000);

  int num_seats() const { return static_cast<int>(seats_.size()); }
  const std::vector<Card>& hand(int seat) const { return seats_.at(seat).hand; }
  const SevensBoard& board() const { return board_; }
  int turn() const { return turn_; }
  int turns() const { return turns_; }
  std::optional<int> winner() const { return winner_; }
  const Transcript& transcript() const { return table_.transcript; }
  Table& table() { return table_; }
  int played() const { return played_; }
  bool board_well_formed_throughout() const { return board_ok_; }

 private:
  void Open();
  void PlayFace(int seat, const StandardFace& face);

  std::vector<VariantSeat> seats_;
  SevensBoard board_;
  Table table_;
  RandomTape humans_;
  int turn_ = 0;
  int turns_ = 0;
  int played_ = 0;
  bool board_ok_ = true;
  std::optional<int> winner_;
};

// ---------------------------------------------------------------- Hearts

struct HeartsPlay {
  int seat = 0;
  StandardFace face;
};

struct TrickResult {
  int winner = 0;  // seat
  int points = 0;
};

int HeartsPoints(const StandardFace& face);
// Highest card of the led suit wins; points are hearts plus 13 for Q♠.
TrickResult HeartsScoreTrick(const std::vector<HeartsPlay>& plays);

class HeartsGame {
 public:
  // Four seats. Each round deals 13 cards each and a uniformly random seat
  // leads the first trick; the trick winner leads the next.
  HeartsGame(std::vector<SeatKind> seats, RandomTape tape,
             std::uint64_t human_seed = 1);
  // Mid-trick position with every seat virtual and no further rounds.
  HeartsGame(std::vector<std::vector<Card>> hands,
             std::vector<HeartsPlay> trick, int turn, RandomTape tape);

  // Current seat plays into the trick; the trick is scored when complete.
  StandardFace TakeTurn(const SelectionOptions& options = {});
  // Deals and plays one full round; returns the points each seat took.
  std::vector<int> PlayRound();
  // Rounds until someone reaches 100 points.
  bool Run(int max_rounds = 1000);

  const std::vector<Card>& hand(int seat) const { return seats_.at(seat).hand; }
  const std::vector<HeartsPlay>& trick() const { return trick_; }
  const std::vector<int>& scores() const { return scores_; }
  const std::vector<std::vector<int>>& round_points() const {
    return round_points_;
  }
  int turn() const { return turn_; }
  // Seats by ascending score; the last one lost.
  std::vector<int> Ranking() const;
  std::optional<int> loser() const { return loser_; }
  const Transcript& transcript() const { return table_.transcript; }
  Table& table() { return table_; }

 private:
  void Deal();

  std::vector<VariantSeat> seats_;
  std::vector<HeartsPlay> trick_;
  std::vector<int> scores_;
  std::vector<int> current_round_;
  std::vector<std::vector<int>> round_points_;
  Table table_;
  RandomTape humans_;
  int turn_ = 0;
  std::optional<int> loser_;
};

// ---------------------------------------------------------------- Muggins

// A line of dominoes with two open ends. A doublet sitting at an end counts
// both halves.
struct MugginsLayout {
  // Tiles as placed, left to right, each oriented (left pip, right pip).
  std::vector<std::pair<int, int>> chain;

  bool empty() const { return chain.empty(); }
  int left() const { return chain.front().first; }
  int right() const { return chain.back().second; }
  int OpenSum() const;
  // Ends the tile can go on: 0 = left, 1 = right. Any tile opens the line.
  std::vector<int> Options(const DominoFace& tile) const;
  void Place(const DominoFace& tile, int end);
  bool JunctionsMatch() const;
};

bool MugginsValid(const DominoFace& tile, const MugginsLayout& layout);
// Points for the current open ends: their sum when it is a positive
// multiple of five, else 0.
int MugginsScore(const MugginsLayout& layout);

struct FirstPlayer {
  int seat = 0;
  DominoFace doublet;
};

// Human seats announce their highest doublet. Each virtual seat then runs
// card selection for "a doublet above the current maximum" until it reports
// none; every selected doublet is shown and goes back to its holder. Returns
// nullopt when nobody holds a doublet.
std::optional<FirstPlayer> MugginsFirstPlayer(std::vector<VariantSeat>& seats,
                                              std::vector<Card>& boneyard,
                                              Table& table);

class MugginsGame {
 public:
  // 2 to 4 seats; 7 tiles each for two players, 5 otherwise. Redeals until
  // someone holds a doublet; the highest doublet opens.
  MugginsGame(std::vector<SeatKind> seats, RandomTape tape,
              std::uint64_t human_seed = 1);
  // Mid-game position with every seat virtual.
  MugginsGame(std::vector<std::vector<Card>> hands, std::vector<Card> boneyard,
              MugginsLayout layout, int turn, RandomTape tape);

  // Current seat draws as needed and plays, or passes. Returns the tile.
  std::optional<DominoFace> TakeTurn(const SelectionOptions& options = {});
  // Plays until a hand empties or every seat passes in a row.
  bool Run(int max_turns = 10000);

  int num_seats() const { return static_cast<int>(seats_.size()); }
  const std::vector<Card>& hand(int seat) const { return seats_.at(seat).hand; }
  const std::vector<Card>& boneyard() const { return boneyard_; }
  const MugginsLayout& layout() const { return layout_; }
  const std::vector<int>& scores() const { return scores_; }
  // Every nonzero award, in order.
  const std::vector<int>& awards() const { return awards_; }
  int turn() const { return turn_; }
  bool finished() const { return finished_; }
  // Highest score; ties go to the lower seat.
  std::optional<int> winner() const;
  std::optional<FirstPlayer> opener() const { return opener_; }
  int redeals() const { return redeals_; }
  const Transcript& transcript() const { return table_.transcript; }
  Table& table() { return table_; }

 private:
  void PlayTile(int seat, Card tile);

  std::vector<VariantSeat> seats_;
  std::vector<Card> boneyard_;
  MugginsLayout layout_;
  std::vector<int> scores_;
  std::vector<int> awards_;
  Table table_;
  RandomTape humans_;
  int turn_ = 0;
  int consecutive_passes_ = 0;
  int redeals_ = 0;
  bool finished_ = false;
  std::optional<FirstPlayer> opener_;
};

}  // namespace vplay

#endif  // VPLAY_VARIANTS_H_
