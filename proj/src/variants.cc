#include "vplay/variants.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vplay {

namespace {

std::string SeatName(int seat) { return "p" + std::to_string(seat + 1); }

// Scrambles the faces as single-card piles; the back element is the top.
std::vector<Card> ShuffledDeck(const std::vector<CardFace>& faces,
                               Table& table) {
  std::vector<Pile> piles;
  std::uint32_t serial = 0;
  for (const CardFace& f : faces) piles.push_back({FaceDown(Card{serial++, f})});
  piles = PileScramble(std::move(piles), table.tape, table.transcript);
  std::vector<Card> deck;
  for (auto it = piles.rbegin(); it != piles.rend(); ++it) {
    deck.push_back(std::move((*it)[0].card));
  }
  return deck;
}

std::vector<std::vector<Card>*> HandPointers(std::vector<VariantSeat>& seats) {
  std::vector<std::vector<Card>*> out;
  for (VariantSeat& s : seats) out.push_back(&s.hand);
  return out;
}

std::vector<VariantSeat> VirtualSeats(std::vector<std::vector<Card>> hands) {
  std::vector<VariantSeat> seats;
  for (auto& h : hands) seats.push_back({SeatKind::kVirtual, std::move(h)});
  return seats;
}

std::vector<VariantSeat> EmptySeats(const std::vector<SeatKind>& kinds) {
  std::vector<VariantSeat> seats;
  for (SeatKind k : kinds) seats.push_back({k, {}});
  return seats;
}

Card TakeFromHand(std::vector<Card>& hand, std::size_t index) {
  Card card = std::move(hand[index]);
  hand.erase(hand.begin() + static_cast<std::ptrdiff_t>(index));
  return card;
}

// Index of a uniformly chosen card of `hand` satisfying `valid`, or nullopt.
template <typename Pred>
std::optional<std::size_t> HumanChoice(const std::vector<Card>& hand,
                                       Pred valid, RandomTape& rng) {
  std::vector<std::size_t> legal;
  for (std::size_t i = 0; i < hand.size(); ++i) {
    if (valid(hand[i].face)) legal.push_back(i);
  }
  if (legal.empty()) return std::nullopt;
  return legal[rng.UniformBelow(legal.size())];
}

const StandardFace kSevenOfDiamonds{Suit::kDiamonds, 7};

}  // namespace

// ---------------------------------------------------------------- Sevens

void SevensBoard::Play(const StandardFace& face) {
  auto& run = runs[static_cast<int>(face.suit)];
  if (!run) {
    run.emplace(face.rank, face.rank);
  } else {
    run->first = std::min<int>(run->first, face.rank);
    run->second = std::max<int>(run->second, face.rank);
  }
}

bool SevensBoard::WellFormed() const {
  return std::all_of(runs.begin(), runs.end(), [](const auto& run) {
    return !run || (run->first <= 7 && 7 <= run->second && run->first >= 2 &&
                    run->second <= kAce);
  });
}

bool SevensValid(const StandardFace& face, const SevensBoard& board) {
  const auto& run = board.runs[static_cast<int>(face.suit)];
  if (!run) return face.rank == 7;
  return face.rank + 1 == run->first || face.rank == run->second + 1;
}

SevensGame::SevensGame(std::vector<SeatKind> seats, RandomTape tape,
                       std::uint64_t human_seed)
    : seats_(EmptySeats(seats)),
      table_(std::move(tape)),
      humans_(RandomTape::Seeded(human_seed)) {
  if (seats_.size() < 2 || seats_.size() > 8) {
    throw std::invalid_argument("Sevens needs 2 to 8 players");
  }
  table_.transcript.Step("sevens.deal");
  std::vector<Card> deck = ShuffledDeck(BuildStandardDeck(), table_);
  for (int i = 0; !deck.empty(); ++i) {
    seats_[i % seats_.size()].hand.push_back(std::move(deck.back()));
    deck.pop_back();
  }
  Open();
}

SevensGame::SevensGame(std::vector<std::vector<Card>> hands, SevensBoard board,
                       int turn, RandomTape tape)
    : seats_(VirtualSeats(std::move(hands))),
      board_(board),
      table_(std::move(tape)),
      humans_(RandomTape::Seeded(1)),
      turn_(turn) {}

void SevensGame::Open() {
  table_.transcript.Step("sevens.open");
  const int n = num_seats();
  for (int seat = 0; seat < n; ++seat) {
    std::vector<Card>& hand = seats_[seat].hand;
    if (seats_[seat].kind == SeatKind::kHuman) {
      auto it = std::find_if(hand.begin(), hand.end(), [](const Card& c) {
        return std::get<StandardFace>(c.face) == kSevenOfDiamonds;
      });
      if (it == hand.end()) {
        table_.transcript.Game("lacks " + SeatName(seat) + " 7d");
        continue;
      }
      Card card = TakeFromHand(hand, it - hand.begin());
      table_.transcript.Game("play " + SeatName(seat), card);
    } else {
      SelectionResult r = SelectForSeat(
          HandPointers(seats_), seat, nullptr,
          [](const CardFace& f) {
            return std::get<StandardFace>(f) == kSevenOfDiamonds;
          },
          table_);
      if (!r.selected) continue;
      table_.transcript.Game("play " + SeatName(seat), *r.selected);
    }
    PlayFace(seat, kSevenOfDiamonds);
    turn_ = (seat + 1) % n;
    return;
  }
  throw ContractViolation("nobody holds 7d");
}

void SevensGame::PlayFace(int seat, const StandardFace& face) {
  board_.Play(face);
  board_ok_ = board_ok_ && board_.WellFormed();
  ++played_;
  if (seats_[seat].hand.empty()) {
    winner_ = seat;
    table_.transcript.Game("win " + SeatName(seat));
  }
}

std::optional<StandardFace> SevensGame::TakeTurn(
    const SelectionOptions& options) {
  if (winner_) throw ContractViolation("game is over");
  const int seat = turn_;
  ++turns_;
  const SevensBoard board = board_;
  auto valid = [board](const CardFace& f) {
    return SevensValid(std::get<StandardFace>(f), board);
  };
  std::optional<Card> card;
  if (seats_[seat].kind == SeatKind::kVirtual) {
    card = SelectForSeat(HandPointers(seats_), seat, nullptr, valid, table_,
                         options)
               .selected;
  } else if (auto i = HumanChoice(seats_[seat].hand, valid, humans_)) {
    card = TakeFromHand(seats_[seat].hand, *i);
  }
  turn_ = (seat + 1) % num_seats();
  if (!card) {
    table_.transcript.Game("pass " + SeatName(seat));
    return std::nullopt;
  }
  const StandardFace face = std::get<StandardFace>(card->face);
  table_.transcript.Game("play " + SeatName(seat), *card);
  PlayFace(seat, face);
  return face;
}

bool SevensGame::Run(int max_turns) {
  while (!winner_ && turns_ < max_turns) TakeTurn();
  return winner_.has_value();
}

// ---------------------------------------------------------------- Hearts

int HeartsPoints(const StandardFace& face) {
  if (face.suit == Suit::kHearts) return 1;
  if (face.suit == Suit::kSpades && face.rank == kQueen) return 13;
  return 0;
}

TrickResult HeartsScoreTrick(const std::vector<HeartsPlay>& plays) {
  if (plays.empty()) throw ContractViolation("empty trick");
  const Suit led = plays.front().face.suit;
  TrickResult result;
  int best = -1;
  for (const HeartsPlay& p : plays) {
    result.points += HeartsPoints(p.face);
    if (p.face.suit == led && p.face.rank > best) {
      best = p.face.rank;
      result.winner = p.seat;
    }
  }
  return result;
}

HeartsGame::HeartsGame(std::vector<SeatKind> seats, RandomTape tape,
                       std::uint64_t human_seed)
    : seats_(EmptySeats(seats)),
      scores_(seats.size(), 0),
      table_(std::move(tape)),
      humans_(RandomTape::Seeded(human_seed)) {
  if (seats_.size() != 4) throw std::invalid_argument("Hearts needs 4 players");
}

HeartsGame::HeartsGame(std::vector<std::vector<Card>> hands,
                       std::vector<HeartsPlay> trick, int turn, RandomTape tape)
    : seats_(VirtualSeats(std::move(hands))),
      trick_(std::move(trick)),
      scores_(seats_.size(), 0),
      current_round_(seats_.size(), 0),
      table_(std::move(tape)),
      humans_(RandomTape::Seeded(1)),
      turn_(turn) {}

void HeartsGame::Deal() {
  table_.transcript.Step("hearts.deal");
  for (VariantSeat& s : seats_) s.hand.clear();
  std::vector<Card> deck = ShuffledDeck(BuildStandardDeck(), table_);
  for (int i = 0; !deck.empty(); ++i) {
    seats_[i % 4].hand.push_back(std::move(deck.back()));
    deck.pop_back();
  }
  trick_.clear();
  current_round_.assign(4, 0);
  turn_ = PublicChoice(4, table_);
  table_.transcript.Game("lead " + SeatName(turn_));
}

StandardFace HeartsGame::TakeTurn(const SelectionOptions& options) {
  const int seat = turn_;
  std::vector<Card>& hand = seats_[seat].hand;
  if (hand.empty()) throw ContractViolation("hand is empty");
  std::optional<Suit> led;
  if (!trick_.empty()) led = trick_.front().face.suit;
  auto follows = [led](const CardFace& f) {
    return !led || std::get<StandardFace>(f).suit == *led;
  };
  Card card;
  if (seats_[seat].kind == SeatKind::kVirtual) {
    SelectionOptions original = options;
    original.mode = LotteryMode::kOriginal;
    card = *SelectForSeat(HandPointers(seats_), seat, nullptr, follows,
                          table_, original)
                .selected;
  } else {
    auto i = HumanChoice(hand, follows, humans_);
    if (!i) i = HumanChoice(hand, [](const CardFace&) { return true; }, humans_);
    card = TakeFromHand(hand, *i);
  }
  const StandardFace face = std::get<StandardFace>(card.face);
  table_.transcript.Game("play " + SeatName(seat), card);
  trick_.push_back({seat, face});
  if (trick_.size() == seats_.size()) {
    const TrickResult r = HeartsScoreTrick(trick_);
    current_round_[r.winner] += r.points;
    table_.transcript.Game("trick " + SeatName(r.winner) +
                           " points=" + std::to_string(r.points));
    trick_.clear();
    turn_ = r.winner;
  } else {
    turn_ = (seat + 1) % static_cast<int>(seats_.size());
  }
  return face;
}

std::vector<int> HeartsGame::PlayRound() {
  Deal();
  for (int play = 0; play < 52; ++play) TakeTurn();
  round_points_.push_back(current_round_);
  for (int s = 0; s < 4; ++s) scores_[s] += current_round_[s];
  return current_round_;
}

bool HeartsGame::Run(int max_rounds) {
  for (int round = 0; round < max_rounds; ++round) {
    PlayRound();
    const auto top = std::max_element(scores_.begin(), scores_.end());
    if (*top >= 100) {
      loser_ = static_cast<int>(top - scores_.begin());
      table_.transcript.Game("lose " + SeatName(*loser_));
      return true;
    }
  }
  return false;
}

std::vector<int> HeartsGame::Ranking() const {
  std::vector<int> order(scores_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores_[a] < scores_[b]; });
  return order;
}

// ---------------------------------------------------------------- Muggins

int MugginsLayout::OpenSum() const {
  if (chain.empty()) return 0;
  if (chain.size() == 1) return chain[0].first + chain[0].second;
  const auto& l = chain.front();
  const auto& r = chain.back();
  return (l.first == l.second ? 2 : 1) * l.first +
         (r.first == r.second ? 2 : 1) * r.second;
}

std::vector<int> MugginsLayout::Options(const DominoFace& tile) const {
  if (chain.empty()) return {0};
  std::vector<int> ends;
  if (tile.lo == left() || tile.hi == left()) ends.push_back(0);
  if (tile.lo == right() || tile.hi == right()) ends.push_back(1);
  return ends;
}

void MugginsLayout::Place(const DominoFace& tile, int end) {
  if (chain.empty()) {
    chain.emplace_back(tile.lo, tile.hi);
    return;
  }
  const std::vector<int> ends = Options(tile);
  if (std::find(ends.begin(), ends.end(), end) == ends.end()) {
    throw ContractViolation("tile does not match that end");
  }
  if (end == 0) {
    if (tile.hi == left()) {
      chain.insert(chain.begin(), {tile.lo, tile.hi});
    } else {
      chain.insert(chain.begin(), {tile.hi, tile.lo});
    }
  } else if (tile.lo == right()) {
    chain.emplace_back(tile.lo, tile.hi);
  } else {
    chain.emplace_back(tile.hi, tile.lo);
  }
}

bool MugginsLayout::JunctionsMatch() const {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (chain[i].second != chain[i + 1].first) return false;
  }
  return true;
}

bool MugginsValid(const DominoFace& tile, const MugginsLayout& layout) {
  return !layout.Options(tile).empty();
}

int MugginsScore(const MugginsLayout& layout) {
  const int sum = layout.OpenSum();
  return sum > 0 && sum % 5 == 0 ? sum : 0;
}

std::optional<FirstPlayer> MugginsFirstPlayer(std::vector<VariantSeat>& seats,
                                              std::vector<Card>& boneyard,
                                              Table& table) {
  Transcript& tr = table.transcript;
  tr.Step("muggins.first");
  std::optional<FirstPlayer> best;
  const int n = static_cast<int>(seats.size());
  for (int seat = 0; seat < n; ++seat) {
    if (seats[seat].kind != SeatKind::kHuman) continue;
    const Card* top = nullptr;
    for (const Card& c : seats[seat].hand) {
      const DominoFace& d = std::get<DominoFace>(c.face);
      if (d.is_doublet() &&
          (top == nullptr || d.lo > std::get<DominoFace>(top->face).lo)) {
        top = &c;
      }
    }
    if (top == nullptr) {
      tr.Game("announce " + SeatName(seat) + " none");
      continue;
    }
    tr.Game("announce " + SeatName(seat), *top);
    const DominoFace d = std::get<DominoFace>(top->face);
    if (!best || d.lo > best->doublet.lo) best = FirstPlayer{seat, d};
  }
  for (int seat = 0; seat < n; ++seat) {
    if (seats[seat].kind != SeatKind::kVirtual) continue;
    for (;;) {
      const int threshold = best ? best->doublet.lo : -1;
      SelectionResult r = SelectForSeat(
          HandPointers(seats), seat, &boneyard,
          [threshold](const CardFace& f) {
            const DominoFace& d = std::get<DominoFace>(f);
            return d.is_doublet() && d.lo > threshold;
          },
          table);
      if (!r.selected) break;
      best = FirstPlayer{seat, std::get<DominoFace>(r.selected->face)};
      tr.Game("holds " + SeatName(seat), *r.selected);
      seats[seat].hand.push_back(std::move(*r.selected));
    }
  }
  return best;
}

MugginsGame::MugginsGame(std::vector<SeatKind> seats, RandomTape tape,
                         std::uint64_t human_seed)
    : seats_(EmptySeats(seats)),
      scores_(seats.size(), 0),
      table_(std::move(tape)),
      humans_(RandomTape::Seeded(human_seed)) {
  const int n = num_seats();
  if (n < 2 || n > 4) throw std::invalid_argument("Muggins needs 2 to 4 players");
  const int hand_size = n == 2 ? 7 : 5;
  for (;;) {
    table_.transcript.Step("muggins.deal");
    for (VariantSeat& s : seats_) s.hand.clear();
    boneyard_ = ShuffledDeck(BuildDominoDeck(), table_);
    for (int round = 0; round < hand_size; ++round) {
      for (VariantSeat& s : seats_) {
        s.hand.push_back(std::move(boneyard_.back()));
        boneyard_.pop_back();
      }
    }
    opener_ = MugginsFirstPlayer(seats_, boneyard_, table_);
    if (opener_) break;
    ++redeals_;
    table_.transcript.Game("redeal");
  }
  std::vector<Card>& hand = seats_[opener_->seat].hand;
  auto it = std::find_if(hand.begin(), hand.end(), [&](const Card& c) {
    return std::get<DominoFace>(c.face) == opener_->doublet;
  });
  PlayTile(opener_->seat, TakeFromHand(hand, it - hand.begin()));
  turn_ = (opener_->seat + 1) % n;
}

MugginsGame::MugginsGame(std::vector<std::vector<Card>> hands,
                         std::vector<Card> boneyard, MugginsLayout layout,
                         int turn, RandomTape tape)
    : seats_(VirtualSeats(std::move(hands))),
      boneyard_(std::move(boneyard)),
      layout_(std::move(layout)),
      scores_(seats_.size(), 0),
      table_(std::move(tape)),
      humans_(RandomTape::Seeded(1)),
      turn_(turn) {}

void MugginsGame::PlayTile(int seat, Card tile) {
  const DominoFace face = std::get<DominoFace>(tile.face);
  const std::vector<int> ends = layout_.Options(face);
  int end = ends.front();
  if (ends.size() == 2) {
    end = seats_[seat].kind == SeatKind::kVirtual
              ? PublicChoice(2, table_)
              : static_cast<int>(humans_.UniformBelow(2));
  }
  layout_.Place(face, end);
  table_.transcript.Game(
      "play " + SeatName(seat) + (end == 0 ? " left" : " right"), tile);
  const int points = MugginsScore(layout_);
  if (points > 0) {
    scores_[seat] += points;
    awards_.push_back(points);
    table_.transcript.Game("score " + SeatName(seat) +
                           " n=" + std::to_string(points));
  }
  consecutive_passes_ = 0;
  if (seats_[seat].hand.empty()) {
    finished_ = true;
    table_.transcript.Game("out " + SeatName(seat));
  }
}

std::optional<DominoFace> MugginsGame::TakeTurn(
    const SelectionOptions& options) {
  if (finished_) throw ContractViolation("game is over");
  const int seat = turn_;
  turn_ = (seat + 1) % num_seats();
  const MugginsLayout layout = layout_;
  auto valid = [layout](const CardFace& f) {
    return MugginsValid(std::get<DominoFace>(f), layout);
  };
  for (;;) {
    std::optional<Card> tile;
    if (seats_[seat].kind == SeatKind::kVirtual) {
      tile = SelectForSeat(HandPointers(seats_), seat, &boneyard_, valid,
                           table_, options)
                 .selected;
    } else if (auto i = HumanChoice(seats_[seat].hand, valid, humans_)) {
      tile = TakeFromHand(seats_[seat].hand, *i);
    }
    if (tile) {
      const DominoFace face = std::get<DominoFace>(tile->face);
      PlayTile(seat, std::move(*tile));
      return face;
    }
    if (boneyard_.empty()) break;
    seats_[seat].hand.push_back(std::move(boneyard_.back()));
    boneyard_.pop_back();
    table_.transcript.Game("draw " + SeatName(seat) + " n=1");
  }
  table_.transcript.Game("pass " + SeatName(seat));
  if (++consecutive_passes_ >= num_seats()) finished_ = true;
  return std::nullopt;
}

bool MugginsGame::Run(int max_turns) {
  for (int t = 0; t < max_turns && !finished_; ++t) TakeTurn();
  return finished_;
}

std::optional<int> MugginsGame::winner() const {
  if (!finished_) return std::nullopt;
  return static_cast<int>(std::max_element(scores_.begin(), scores_.end()) -
                          scores_.begin());
}

}  // namespace vplay
