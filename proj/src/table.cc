#include "vplay/table.h"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace vplay {

Commitment EncodeBit(bool bit, Card alpha, Card beta) {
  if (!IsAlpha(alpha.face) || !IsBeta(beta.face)) {
    throw ContractViolation("EncodeBit needs one α and one β card");
  }
  if (bit) return {FaceDown(std::move(beta)), FaceDown(std::move(alpha))};
  return {FaceDown(std::move(alpha)), FaceDown(std::move(beta))};
}

Commitment EncodeBit(bool bit) {
  return EncodeBit(bit, Card{kNoSerial, AuxRole::Alpha()},
                   Card{kNoSerial, AuxRole::Beta()});
}

bool IsWellFormed(const Commitment& c) {
  return (IsAlpha(c.left.face()) && IsBeta(c.right.face())) ||
         (IsBeta(c.left.face()) && IsAlpha(c.right.face()));
}

bool Decode(const Commitment& c) {
  return DecodeFaces(c.left.face(), c.right.face());
}

bool DecodeFaces(const CardFace& left, const CardFace& right) {
  if (IsAlpha(left) && IsBeta(right)) return false;
  if (IsBeta(left) && IsAlpha(right)) return true;
  throw ContractViolation("malformed commitment: expected one α and one β");
}

bool IsPermutation(const Permutation& perm) {
  std::vector<bool> seen(perm.size(), false);
  for (int v : perm) {
    if (v < 0 || v >= static_cast<int>(perm.size()) || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

namespace {

// Unbiased integer in [0, bound) by rejection.
std::uint64_t BoundedDraw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace

RandomTape RandomTape::Seeded(std::uint64_t seed) {
  return RandomTape(Source(std::in_place_type<std::mt19937_64>, seed));
}

RandomTape RandomTape::Explicit(std::vector<Permutation> perms) {
  return RandomTape(Source(ExplicitTape{std::move(perms), 0}));
}

RandomTape RandomTape::FromSource(std::function<Permutation(int)> source) {
  return RandomTape(Source(std::move(source)));
}

Permutation RandomTape::Next(int n) {
  if (n < 1) throw ContractViolation("permutation size must be positive");
  ++draws_;
  if (auto* rng = std::get_if<std::mt19937_64>(&source_)) {
    Permutation perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(BoundedDraw(*rng, i + 1));
      std::swap(perm[i], perm[j]);
    }
    return perm;
  }
  Permutation perm;
  if (auto* tape = std::get_if<ExplicitTape>(&source_)) {
    if (tape->next >= tape->perms.size()) {
      throw ContractViolation("explicit tape exhausted");
    }
    perm = tape->perms[tape->next++];
  } else {
    perm = std::get<std::function<Permutation(int)>>(source_)(n);
  }
  if (static_cast<int>(perm.size()) != n || !IsPermutation(perm)) {
    throw ContractViolation("tape permutation does not match shuffle size " +
                            std::to_string(n));
  }
  return perm;
}

std::uint64_t RandomTape::UniformBelow(std::uint64_t bound) {
  auto* rng = std::get_if<std::mt19937_64>(&source_);
  if (rng == nullptr) throw ContractViolation("UniformBelow needs a seeded tape");
  if (bound == 0) throw ContractViolation("empty range");
  return BoundedDraw(*rng, bound);
}

const char* RegionName(Region region) {
  switch (region) {
    case Region::kMain: return "main";
    case Region::kLottery: return "lot";
    case Region::kAnd: return "and";
    case Region::kMarker: return "mark";
    case Region::kPile: return "pile";
    case Region::kHand: return "hand";
  }
  return "?";
}

std::string FormatPosition(const Position& pos) {
  std::string out;
  if (pos.region == Region::kHand) {
    return std::string("hand:p") + std::to_string(pos.col);
  }
  if (pos.region != Region::kMain) {
    out += RegionName(pos.region);
    out += ':';
  }
  if (pos.row > 0) out += "r" + std::to_string(pos.row);
  out += "c" + std::to_string(pos.col);
  return out;
}

std::string FormatEvent(const ObservationEvent& e) {
  std::ostringstream out;
  switch (e.kind) {
    case EventKind::kStep:
      out << "STEP " << e.text;
      break;
    case EventKind::kPlace:
      out << "PLACE " << FormatPosition(e.pos);
      if (e.face) {
        out << " UP " << ToToken(*e.face);
      } else {
        out << " DOWN";
      }
      break;
    case EventKind::kReveal:
      out << "REVEAL " << FormatPosition(e.pos) << ' ' << ToToken(*e.face);
      break;
    case EventKind::kTurnDown:
      out << "TURNDOWN ";
      if (e.pos.region != Region::kMain) out << RegionName(e.pos.region) << ' ';
      out << "n=" << e.a;
      break;
    case EventKind::kShuffle:
      out << "SHUFFLE m=" << e.a << " k=" << e.b;
      break;
    case EventKind::kRearrange:
      out << "REARRANGE " << RegionName(e.pos.region) << ' ' << e.text;
      break;
    case EventKind::kMove:
      out << "MOVE " << FormatPosition(e.pos) << " -> " << FormatPosition(e.to);
      break;
    case EventKind::kRemove:
      out << "REMOVE " << FormatPosition(e.pos);
      break;
    case EventKind::kSupply:
      out << "SUPPLY " << (e.a >= 0 ? "take=" : "return=")
          << (e.a >= 0 ? e.a : -e.a);
      break;
    case EventKind::kGame:
      out << "GAME " << e.text;
      if (e.face) out << ' ' << ToToken(*e.face);
      break;
  }
  return out.str();
}

void Transcript::Step(std::string label) {
  ObservationEvent e;
  e.kind = EventKind::kStep;
  e.text = std::move(label);
  Append(std::move(e));
}

void Transcript::Game(std::string text, std::optional<Card> shown) {
  ObservationEvent e;
  e.kind = EventKind::kGame;
  e.text = std::move(text);
  if (shown) {
    e.face = shown->face;
    e.serial = shown->serial;
  }
  Append(std::move(e));
}

void Transcript::Supply(int delta) {
  ObservationEvent e;
  e.kind = EventKind::kSupply;
  e.a = delta;
  Append(std::move(e));
}

int Transcript::CountShuffles(std::size_t from) const {
  int count = 0;
  for (std::size_t i = from; i < events_.size(); ++i) {
    if (events_[i].kind == EventKind::kShuffle) ++count;
  }
  return count;
}

std::string Transcript::Serialize(std::size_t from) const {
  std::string out;
  for (std::size_t i = from; i < events_.size(); ++i) {
    out += FormatEvent(events_[i]);
    out += '\n';
  }
  return out;
}

std::vector<std::string> Transcript::Lines(std::size_t from) const {
  std::vector<std::string> lines;
  for (std::size_t i = from; i < events_.size(); ++i) {
    lines.push_back(FormatEvent(events_[i]));
  }
  return lines;
}

std::vector<Card> AuxSupply::Take(const std::vector<AuxRole>& roles,
                                  Transcript& transcript) {
  std::vector<Card> cards;
  cards.reserve(roles.size());
  for (const AuxRole& role : roles) cards.push_back({next_serial_++, role});
  const int n = static_cast<int>(roles.size());
  taken_ += n;
  outstanding_ += n;
  transcript.Supply(n);
  return cards;
}

void AuxSupply::Return(int count, Transcript& transcript) {
  if (count > outstanding_) {
    throw ContractViolation("returning more aux cards than were taken");
  }
  outstanding_ -= count;
  transcript.Supply(-count);
}

int Layout::height(int col) const {
  if (col < 1 || col > cols()) return 0;
  return static_cast<int>(columns_[col - 1].size());
}

bool Layout::has(int row, int col) const {
  return row >= 1 && row <= height(col);
}

TableCard& Layout::at(int row, int col) {
  if (!has(row, col)) {
    throw ContractViolation("no card at " + FormatPosition(pos(row, col)));
  }
  return columns_[col - 1][row - 1];
}

const TableCard& Layout::at(int row, int col) const {
  if (!has(row, col)) {
    throw ContractViolation("no card at " + FormatPosition(pos(row, col)));
  }
  return columns_[col - 1][row - 1];
}

Pile Layout::TakeColumn(int col) {
  if (col < 1 || col > cols()) throw ContractViolation("no such column");
  Pile pile = std::move(columns_[col - 1]);
  columns_.erase(columns_.begin() + (col - 1));
  return pile;
}

CardFace Reveal(Layout& layout, int row, int col, Transcript& transcript) {
  TableCard& card = layout.at(row, col);
  if (card.face_up()) return card.face();
  card.orientation = Orientation::kFaceUp;
  ObservationEvent e;
  e.kind = EventKind::kReveal;
  e.pos = layout.pos(row, col);
  e.face = card.face();
  e.serial = card.card.serial;
  transcript.Append(std::move(e));
  return card.face();
}

void Place(Layout& layout, int col, TableCard card, Transcript& transcript) {
  if (col < 1 || col > layout.cols() + 1) {
    throw ContractViolation("cannot place beyond the next free column");
  }
  if (col == layout.cols() + 1) layout.columns().emplace_back();
  ObservationEvent e;
  e.kind = EventKind::kPlace;
  e.pos = layout.pos(layout.height(col) + 1, col);
  if (card.face_up()) {
    e.face = card.face();
    e.serial = card.card.serial;
  }
  layout.columns()[col - 1].push_back(std::move(card));
  transcript.Append(std::move(e));
}

void TurnDownAll(Layout& layout, Transcript& transcript) {
  int flipped = 0;
  for (Pile& pile : layout.columns()) {
    for (TableCard& card : pile) {
      if (card.face_up()) {
        card.orientation = Orientation::kFaceDown;
        ++flipped;
      }
    }
  }
  if (flipped == 0) return;
  ObservationEvent e;
  e.kind = EventKind::kTurnDown;
  e.pos.region = layout.region();
  e.a = flipped;
  transcript.Append(std::move(e));
}

std::vector<Pile> PileScramble(std::vector<Pile> piles, RandomTape& tape,
                               Transcript& transcript) {
  if (piles.empty()) throw ContractViolation("pile scramble needs a pile");
  const std::size_t k = piles.front().size();
  if (k == 0) throw ContractViolation("pile scramble needs non-empty piles");
  for (const Pile& pile : piles) {
    if (pile.size() != k) {
      throw ContractViolation("pile scramble needs equal-sized piles");
    }
  }
  const int m = static_cast<int>(piles.size());
  const Permutation perm = tape.Next(m);
  std::vector<Pile> out(m);
  for (int i = 0; i < m; ++i) out[i] = std::move(piles[perm[i]]);
  ObservationEvent e;
  e.kind = EventKind::kShuffle;
  e.a = m;
  e.b = static_cast<int>(k);
  transcript.Append(std::move(e));
  return out;
}

void ScrambleColumns(Layout& layout, RandomTape& tape, Transcript& transcript) {
  layout.columns() =
      PileScramble(std::move(layout.columns()), tape, transcript);
}

void RearrangeRow(Layout& layout, const Permutation& perm,
                  Transcript& transcript) {
  if (static_cast<int>(perm.size()) != layout.cols() || !IsPermutation(perm)) {
    throw ContractViolation("rearrangement does not fit the row");
  }
  std::vector<Pile> out(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out[i] = std::move(layout.columns()[perm[i]]);
  }
  layout.columns() = std::move(out);
  std::string pattern;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (i > 0) pattern += ',';
    pattern += std::to_string(perm[i] + 1);
  }
  ObservationEvent e;
  e.kind = EventKind::kRearrange;
  e.pos.region = layout.region();
  e.text = std::move(pattern);
  transcript.Append(std::move(e));
}

}  // namespace vplay
