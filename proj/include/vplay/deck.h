#ifndef VPLAY_DECK_H_
#define VPLAY_DECK_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vplay {

enum class Color : std::uint8_t { kRed, kYellow, kGreen, kBlue };
inline constexpr Color kAllColors[] = {Color::kRed, Color::kYellow,
                                       Color::kGreen, Color::kBlue};

char ColorChar(Color color);
std::optional<Color> ColorFromChar(char c);

enum class UnoKind : std::uint8_t {
  kNumber,
  kSkip,
  kReverse,
  kDrawTwo,
  kWild,
  kWildDrawFour,
};

// A printed UNO card. Black kinds (Wild, WildDrawFour) carry no color; every
// other kind carries exactly one. `number` is meaningful only for kNumber.
struct UnoFace {
  UnoKind kind = UnoKind::kNumber;
  std::uint8_t number = 0;
  std::optional<Color> color;

  static UnoFace Number(int n, Color c);
  static UnoFace Skip(Color c) { return {UnoKind::kSkip, 0, c}; }
  static UnoFace Reverse(Color c) { return {UnoKind::kReverse, 0, c}; }
  static UnoFace DrawTwo(Color c) { return {UnoKind::kDrawTwo, 0, c}; }
  static UnoFace Wild() { return {UnoKind::kWild, 0, std::nullopt}; }
  static UnoFace WildDrawFour() {
    return {UnoKind::kWildDrawFour, 0, std::nullopt};
  }

  bool is_black() const {
    return kind == UnoKind::kWild || kind == UnoKind::kWildDrawFour;
  }

  auto operator<=>(const UnoFace&) const = default;
};

enum class Suit : std::uint8_t { kClubs, kDiamonds, kHearts, kSpades };
inline constexpr Suit kAllSuits[] = {Suit::kClubs, Suit::kDiamonds,
                                     Suit::kHearts, Suit::kSpades};

inline constexpr int kJack = 11;
inline constexpr int kQueen = 12;
inline constexpr int kKing = 13;
inline constexpr int kAce = 14;

// Rank runs 2..14 with Ace high.
struct StandardFace {
  Suit suit = Suit::kClubs;
  std::uint8_t rank = 2;

  auto operator<=>(const StandardFace&) const = default;
};

// Unordered pip pair, stored with lo <= hi.
struct DominoFace {
  std::uint8_t lo = 0;
  std::uint8_t hi = 0;

  static DominoFace Of(int a, int b);
  bool is_doublet() const { return lo == hi; }
  int pips() const { return lo + hi; }

  auto operator<=>(const DominoFace&) const = default;
};

// Auxiliary protocol cards: the two commitment symbols and the owner markers.
struct AuxRole {
  enum class Kind : std::uint8_t { kAlpha, kBeta, kTheta };
  Kind kind = Kind::kAlpha;
  std::uint16_t index = 0;  // Theta only, >= 1

  static AuxRole Alpha() { return {Kind::kAlpha, 0}; }
  static AuxRole Beta() { return {Kind::kBeta, 0}; }
  static AuxRole Theta(int i);

  auto operator<=>(const AuxRole&) const = default;
};

using CardFace = std::variant<UnoFace, StandardFace, DominoFace, AuxRole>;

bool IsAlpha(const CardFace& face);
bool IsBeta(const CardFace& face);
// Returns the theta index, or 0 when `face` is not a theta marker.
int ThetaIndex(const CardFace& face);

// Compact text tokens: `7R` `SY` `RG` `+B` `W` `D` for UNO, `7d` `Qs` `10h`
// for the standard deck, `5-6` for dominoes, `ALPHA` `BETA` `THETA3` for aux.
std::string ToToken(const CardFace& face);
std::string ToToken(Color color);
// Throws std::invalid_argument on malformed input.
CardFace ParseFace(std::string_view token);

// A physical card. The serial identifies the physical object for test
// instrumentation and is never part of any public serialization.
struct Card {
  std::uint32_t serial = 0;
  CardFace face;

  friend bool operator==(const Card&, const Card&) = default;
};

std::vector<Card> NumberCards(std::span<const CardFace> faces,
                              std::uint32_t first_serial = 0);
std::vector<CardFace> FacesOf(std::span<const Card> cards);

std::vector<CardFace> BuildUnoDeck();
std::vector<CardFace> BuildStandardDeck();
std::vector<CardFace> BuildDominoDeck();

// The 54 distinct UNO faces.
std::vector<UnoFace> AllUnoFaces();
// Copies of `face` in one UNO deck: 1 for zeros, 4 for black, 2 otherwise.
int UnoCopiesPerDeck(const UnoFace& face);

struct AuxProvision {
  int alpha = 0;
  int beta = 0;
  int theta = 0;
  // Per-party theta counts when hand sizes were supplied; empty otherwise.
  std::vector<int> theta_per_party;
  int extra_decks = 0;

  int total() const { return alpha + beta + theta; }
};

// Auxiliary cards for one card-selection run over `k` cards and `n_parties`
// owners (seated players plus the unplayed deck). α and β each need k+2
// copies: one per column commitment plus the lottery's token and spare pair.
// `extra_decks` is the fewest additional UNO decks whose faces can realize
// every role with a distinct face type. Without `hand_sizes` the bound holds
// for any split of k among the parties.
AuxProvision ProvisionAux(int n_parties, int k,
                          std::span<const int> hand_sizes = {});

// Fewest decks such that each demand gets its own face type with enough
// copies. Returns -1 when there are more demands than face types.
int MinExtraDecks(std::vector<int> demands);

// Concrete faces standing in for α, β, θ1..θn, in that order.
std::vector<UnoFace> DefaultDesignation(int n_parties);

}  // namespace vplay

#endif  // VPLAY_DECK_H_
