#ifndef VPLAY_TABLE_H_
#define VPLAY_TABLE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vplay/deck.h"

namespace vplay {

// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr std::uint32_t kNoSerial = 0xffffffffu;

enum class Orientation : std::uint8_t { kFaceUp, kFaceDown };

struct TableCard {
  Card card;
  Orientation orientation = Orientation::kFaceDown;

  bool face_up() const { return orientation == Orientation::kFaceUp; }
  const CardFace& face() const { return card.face; }
};

inline TableCard FaceDown(Card card) { return {std::move(card), Orientation::kFaceDown}; }
inline TableCard FaceUp(Card card) { return {std::move(card), Orientation::kFaceUp}; }

using Pile = std::vector<TableCard>;

// An ordered face-down pair of α/β cards: (α, β) is 0 and (β, α) is 1.
struct Commitment {
  TableCard left;
  TableCard right;
};

Commitment EncodeBit(bool bit, Card alpha, Card beta);
Commitment EncodeBit(bool bit);
bool IsWellFormed(const Commitment& c);
// Throws ContractViolation unless the pair is one α and one β.
bool Decode(const Commitment& c);
// Decodes a pair already revealed face-up.
bool DecodeFaces(const CardFace& left, const CardFace& right);

// Output position i receives input position perm[i].
using Permutation = std::vector<int>;

bool IsPermutation(const Permutation& perm);

// Source of every random choice a protocol makes. A seeded stream draws
// uniform permutations; an explicit tape hands out the given permutations in
// order; a custom source lets harnesses enumerate or bias the choices.
class RandomTape {
 public:
  static RandomTape Seeded(std::uint64_t seed);
  static RandomTape Explicit(std::vector<Permutation> perms);
  static RandomTape FromSource(std::function<Permutation(int)> source);

  Permutation Next(int n);
  // Uniform integer in [0, bound) straight from the seeded stream.
  // Only valid on seeded tapes; used for choices outside the protocols.
  std::uint64_t UniformBelow(std::uint64_t bound);

  int draws() const { return draws_; }
  bool is_seeded() const {
    return std::holds_alternative<std::mt19937_64>(source_);
  }

 private:
  struct ExplicitTape {
    std::vector<Permutation> perms;
    std::size_t next = 0;
  };
  using Source = std::variant<std::mt19937_64, ExplicitTape,
                              std::function<Permutation(int)>>;

  explicit RandomTape(Source source) : source_(std::move(source)) {}

  Source source_;
  int draws_ = 0;
};

enum class Region : std::uint8_t { kMain, kLottery, kAnd, kMarker, kPile, kHand };
const char* RegionName(Region region);

// 1-based matrix coordinates; row 0 addresses a whole column.
struct Position {
  Region region = Region::kMain;
  int row = 0;
  int col = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

std::string FormatPosition(const Position& pos);

enum class EventKind : std::uint8_t {
  kStep,
  kPlace,
  kReveal,
  kTurnDown,
  kShuffle,
  kRearrange,
  kMove,
  kRemove,
  kSupply,
  kGame,
};

struct ObservationEvent {
  EventKind kind = EventKind::kStep;
  Position pos;
  Position to;
  std::optional<CardFace> face;
  int a = 0;
  int b = 0;
  std::string text;
  // Physical card behind `face`; instrumentation only, never serialized.
  std::uint32_t serial = kNoSerial;
};

// One line per event: `REVEAL r1c2 7R`, `SHUFFLE m=4 k=3`, `PLACE r3c1 DOWN`.
std::string FormatEvent(const ObservationEvent& event);

// Append-only record of everything a bystander sees.
class Transcript {
 public:
  void Append(ObservationEvent event) { events_.push_back(std::move(event)); }
  void Step(std::string label);
  void Game(std::string text, std::optional<Card> shown = std::nullopt);
  void Supply(int delta);

  const std::vector<ObservationEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  int CountShuffles(std::size_t from = 0) const;

  std::string Serialize(std::size_t from = 0) const;
  std::vector<std::string> Lines(std::size_t from = 0) const;

 private:
  std::vector<ObservationEvent> events_;
};

// Pool of α/β/θ cards drawn from the extra decks. Takes and returns are
// public and logged as counts.
class AuxSupply {
 public:
  // Draws the given roles in order and logs one take of that size.
  std::vector<Card> Take(const std::vector<AuxRole>& roles,
                         Transcript& transcript);
  void Return(int count, Transcript& transcript);

  int taken() const { return taken_; }
  int outstanding() const { return outstanding_; }

 private:
  int taken_ = 0;
  int outstanding_ = 0;
  std::uint32_t next_serial_ = 0x80000000u;
};

// A physical table session: randomness, the public record and the aux pool.
struct Table {
  explicit Table(RandomTape t) : tape(std::move(t)) {}

  RandomTape tape;
  Transcript transcript;
  AuxSupply supply;
};

// Cards laid out as columns; a column is a pile read top to bottom as rows.
class Layout {
 public:
  explicit Layout(Region region) : region_(region) {}

  Region region() const { return region_; }
  int cols() const { return static_cast<int>(columns_.size()); }
  int height(int col) const;
  bool has(int row, int col) const;
  TableCard& at(int row, int col);
  const TableCard& at(int row, int col) const;

  std::vector<Pile>& columns() { return columns_; }
  const std::vector<Pile>& columns() const { return columns_; }
  Position pos(int row, int col) const { return {region_, row, col}; }

  // Removes a column; later columns shift left.
  Pile TakeColumn(int col);

 private:
  Region region_;
  std::vector<Pile> columns_;
};

// Turns the card face-up and logs it. Already face-up cards are returned
// without a new event. Throws ContractViolation on an empty position.
CardFace Reveal(Layout& layout, int row, int col, Transcript& transcript);

// Appends `card` to the bottom of column `col`; col == cols()+1 opens a new
// column. The face is logged only when the card is placed face-up.
void Place(Layout& layout, int col, TableCard card, Transcript& transcript);

void TurnDownAll(Layout& layout, Transcript& transcript);

// Rearranges all piles by one permutation from the tape. Logs a single
// SHUFFLE event with the pile count and pile size.
std::vector<Pile> PileScramble(std::vector<Pile> piles, RandomTape& tape,
                               Transcript& transcript);

// PileScramble with every column as one pile.
void ScrambleColumns(Layout& layout, RandomTape& tape, Transcript& transcript);

// Public fixed rearrangement of a single-row layout.
void RearrangeRow(Layout& layout, const Permutation& perm,
                  Transcript& transcript);

}  // namespace vplay

#endif  // VPLAY_TABLE_H_
