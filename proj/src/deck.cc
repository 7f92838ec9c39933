#include "vplay/deck.h"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace vplay {

namespace {

constexpr char kColorChars[] = "RYGB";
constexpr char kSuitChars[] = "cdhs";

std::string RankToken(int rank) {
  switch (rank) {
    case kJack: return "J";
    case kQueen: return "Q";
    case kKing: return "K";
    case kAce: return "A";
    default: return std::to_string(rank);
  }
}

std::optional<int> RankFromToken(std::string_view s) {
  if (s == "J") return kJack;
  if (s == "Q") return kQueen;
  if (s == "K") return kKing;
  if (s == "A") return kAce;
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  if (value < 2 || value > 10) return std::nullopt;
  return value;
}

std::optional<int> ParseSmallInt(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return value;
}

[[noreturn]] void BadToken(std::string_view token) {
  throw std::invalid_argument("unrecognized card token '" +
                              std::string(token) + "'");
}

struct TokenVisitor {
  std::string operator()(const UnoFace& f) const {
    switch (f.kind) {
      case UnoKind::kWild: return "W";
      case UnoKind::kWildDrawFour: return "D";
      case UnoKind::kNumber:
        return std::string{static_cast<char>('0' + f.number),
                           ColorChar(*f.color)};
      case UnoKind::kSkip: return std::string{'S', ColorChar(*f.color)};
      case UnoKind::kReverse: return std::string{'R', ColorChar(*f.color)};
      case UnoKind::kDrawTwo: return std::string{'+', ColorChar(*f.color)};
    }
    return "?";
  }
  std::string operator()(const StandardFace& f) const {
    return RankToken(f.rank) + kSuitChars[static_cast<int>(f.suit)];
  }
  std::string operator()(const DominoFace& f) const {
    return std::to_string(f.lo) + "-" + std::to_string(f.hi);
  }
  std::string operator()(const AuxRole& r) const {
    switch (r.kind) {
      case AuxRole::Kind::kAlpha: return "ALPHA";
      case AuxRole::Kind::kBeta: return "BETA";
      case AuxRole::Kind::kTheta: return "THETA" + std::to_string(r.index);
    }
    return "?";
  }
};

}  // namespace

char ColorChar(Color color) { return kColorChars[static_cast<int>(color)]; }

std::optional<Color> ColorFromChar(char c) {
  for (Color color : kAllColors) {
    if (ColorChar(color) == c) return color;
  }
  return std::nullopt;
}

UnoFace UnoFace::Number(int n, Color c) {
  if (n < 0 || n > 9) throw std::invalid_argument("UNO number out of range");
  return {UnoKind::kNumber, static_cast<std::uint8_t>(n), c};
}

DominoFace DominoFace::Of(int a, int b) {
  if (a < 0 || a > 6 || b < 0 || b > 6) {
    throw std::invalid_argument("domino pips must be within 0..6");
  }
  return {static_cast<std::uint8_t>(std::min(a, b)),
          static_cast<std::uint8_t>(std::max(a, b))};
}

AuxRole AuxRole::Theta(int i) {
  if (i < 1) throw std::invalid_argument("theta index starts at 1");
  return {Kind::kTheta, static_cast<std::uint16_t>(i)};
}

bool IsAlpha(const CardFace& face) {
  const auto* aux = std::get_if<AuxRole>(&face);
  return aux != nullptr && aux->kind == AuxRole::Kind::kAlpha;
}

bool IsBeta(const CardFace& face) {
  const auto* aux = std::get_if<AuxRole>(&face);
  return aux != nullptr && aux->kind == AuxRole::Kind::kBeta;
}

int ThetaIndex(const CardFace& face) {
  const auto* aux = std::get_if<AuxRole>(&face);
  if (aux == nullptr || aux->kind != AuxRole::Kind::kTheta) return 0;
  return aux->index;
}

std::string ToToken(const CardFace& face) {
  return std::visit(TokenVisitor{}, face);
}

std::string ToToken(Color color) { return std::string(1, ColorChar(color)); }

CardFace ParseFace(std::string_view token) {
  if (token.empty()) BadToken(token);
  if (token == "W") return UnoFace::Wild();
  if (token == "D") return UnoFace::WildDrawFour();
  if (token == "ALPHA") return AuxRole::Alpha();
  if (token == "BETA") return AuxRole::Beta();
  if (token.starts_with("THETA")) {
    auto index = ParseSmallInt(token.substr(5));
    if (!index || *index < 1) BadToken(token);
    return AuxRole::Theta(*index);
  }
  if (auto dash = token.find('-'); dash != std::string_view::npos) {
    auto a = ParseSmallInt(token.substr(0, dash));
    auto b = ParseSmallInt(token.substr(dash + 1));
    if (!a || !b || *a > *b || *a < 0 || *b > 6) BadToken(token);
    return DominoFace::Of(*a, *b);
  }
  const char last = token.back();
  const std::string_view head = token.substr(0, token.size() - 1);
  if (auto color = ColorFromChar(last); color && head.size() == 1) {
    const char c = head[0];
    if (c >= '0' && c <= '9') return UnoFace::Number(c - '0', *color);
    if (c == 'S') return UnoFace::Skip(*color);
    if (c == 'R') return UnoFace::Reverse(*color);
    if (c == '+') return UnoFace::DrawTwo(*color);
    BadToken(token);
  }
  for (int s = 0; s < 4; ++s) {
    if (last != kSuitChars[s]) continue;
    auto rank = RankFromToken(head);
    if (!rank) BadToken(token);
    return StandardFace{static_cast<Suit>(s), static_cast<std::uint8_t>(*rank)};
  }
  BadToken(token);
}

std::vector<Card> NumberCards(std::span<const CardFace> faces,
                              std::uint32_t first_serial) {
  std::vector<Card> cards;
  cards.reserve(faces.size());
  for (const CardFace& face : faces) cards.push_back({first_serial++, face});
  return cards;
}

std::vector<CardFace> FacesOf(std::span<const Card> cards) {
  std::vector<CardFace> faces;
  faces.reserve(cards.size());
  for (const Card& card : cards) faces.push_back(card.face);
  return faces;
}

std::vector<UnoFace> AllUnoFaces() {
  std::vector<UnoFace> faces;
  faces.reserve(54);
  for (Color c : kAllColors) {
    for (int n = 0; n <= 9; ++n) faces.push_back(UnoFace::Number(n, c));
    faces.push_back(UnoFace::Skip(c));
    faces.push_back(UnoFace::Reverse(c));
    faces.push_back(UnoFace::DrawTwo(c));
  }
  faces.push_back(UnoFace::Wild());
  faces.push_back(UnoFace::WildDrawFour());
  return faces;
}

int UnoCopiesPerDeck(const UnoFace& face) {
  if (face.is_black()) return 4;
  if (face.kind == UnoKind::kNumber && face.number == 0) return 1;
  return 2;
}

std::vector<CardFace> BuildUnoDeck() {
  std::vector<CardFace> deck;
  deck.reserve(108);
  for (const UnoFace& face : AllUnoFaces()) {
    for (int i = 0; i < UnoCopiesPerDeck(face); ++i) deck.emplace_back(face);
  }
  return deck;
}

std::vector<CardFace> BuildStandardDeck() {
  std::vector<CardFace> deck;
  deck.reserve(52);
  for (Suit suit : kAllSuits) {
    for (int rank = 2; rank <= kAce; ++rank) {
      deck.emplace_back(StandardFace{suit, static_cast<std::uint8_t>(rank)});
    }
  }
  return deck;
}

std::vector<CardFace> BuildDominoDeck() {
  std::vector<CardFace> deck;
  deck.reserve(28);
  for (int lo = 0; lo <= 6; ++lo) {
    for (int hi = lo; hi <= 6; ++hi) deck.emplace_back(DominoFace::Of(lo, hi));
  }
  return deck;
}

namespace {

// Per-deck copy counts of every UNO face type, largest first.
std::vector<int> FaceCapacities() {
  std::vector<int> caps;
  for (const UnoFace& face : AllUnoFaces()) {
    caps.push_back(UnoCopiesPerDeck(face));
  }
  std::sort(caps.rbegin(), caps.rend());
  return caps;
}

}  // namespace

int MinExtraDecks(std::vector<int> demands) {
  static const std::vector<int> caps = FaceCapacities();
  if (demands.size() > caps.size()) return -1;
  // Pairing largest demand with largest capacity is optimal: any feasible
  // assignment can be exchanged into the sorted one.
  std::sort(demands.rbegin(), demands.rend());
  int decks = 0;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    decks = std::max(decks, (demands[i] + caps[i] - 1) / caps[i]);
  }
  return decks;
}

AuxProvision ProvisionAux(int n_parties, int k,
                          std::span<const int> hand_sizes) {
  if (n_parties < 2) throw std::invalid_argument("need at least two parties");
  if (k < 1) throw std::invalid_argument("need at least one card");
  AuxProvision p;
  p.alpha = k + 2;
  p.beta = k + 2;
  p.theta = k;
  std::vector<int> demands = {p.alpha, p.beta};
  if (!hand_sizes.empty()) {
    if (static_cast<int>(hand_sizes.size()) != n_parties) {
      throw std::invalid_argument("hand_sizes must list every party");
    }
    int sum = 0;
    for (int h : hand_sizes) {
      if (h < 0) throw std::invalid_argument("negative hand size");
      sum += h;
    }
    if (sum != k) throw std::invalid_argument("hand sizes must sum to k");
    p.theta_per_party.assign(hand_sizes.begin(), hand_sizes.end());
    demands.insert(demands.end(), hand_sizes.begin(), hand_sizes.end());
  } else {
    // Concentrating every card on one owner maximizes the requirement.
    demands.push_back(k);
    demands.insert(demands.end(), n_parties - 1, 0);
  }
  p.extra_decks = MinExtraDecks(std::move(demands));
  if (p.extra_decks < 0) {
    throw std::invalid_argument("more parties than distinct UNO faces");
  }
  return p;
}

std::vector<UnoFace> DefaultDesignation(int n_parties) {
  if (n_parties < 1 || n_parties + 2 > 54) {
    throw std::invalid_argument("cannot designate that many parties");
  }
  std::vector<UnoFace> roles = {UnoFace::Wild(), UnoFace::WildDrawFour()};
  std::vector<UnoFace> twos;
  std::vector<UnoFace> ones;
  for (const UnoFace& face : AllUnoFaces()) {
    if (face.is_black()) continue;
    (UnoCopiesPerDeck(face) == 2 ? twos : ones).push_back(face);
  }
  twos.insert(twos.end(), ones.begin(), ones.end());
  roles.insert(roles.end(), twos.begin(), twos.begin() + n_parties);
  return roles;
}

}  // namespace vplay
