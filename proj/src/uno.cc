#include "vplay/uno.h"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace vplay {

Color EffectiveColor(const MatchState& match) {
  if (match.top.is_black()) {
    if (!match.designated_color) {
      throw ContractViolation("black top card without a designated color");
    }
    return *match.designated_color;
  }
  return *match.top.color;
}

bool UnoValid(const UnoFace& candidate, const MatchState& match) {
  if (candidate.is_black()) return true;
  if (*candidate.color == EffectiveColor(match)) return true;
  if (candidate.kind != match.top.kind) return false;
  return candidate.kind != UnoKind::kNumber ||
         candidate.number == match.top.number;
}

std::string_view GameEventName(GameEventKind kind) {
  switch (kind) {
    case GameEventKind::kStart: return "start";
    case GameEventKind::kFlip: return "flip";
    case GameEventKind::kPlay: return "play";
    case GameEventKind::kColor: return "color";
    case GameEventKind::kSkip: return "skip";
    case GameEventKind::kReverse: return "reverse";
    case GameEventKind::kDraw: return "draw";
    case GameEventKind::kPass: return "pass";
    case GameEventKind::kReshuffle: return "reshuffle";
    case GameEventKind::kTurn: return "turn";
    case GameEventKind::kWin: return "win";
  }
  return "?";
}

std::string_view MoveErrorName(MoveError error) {
  switch (error) {
    case MoveError::kNone: return "ok";
    case MoveError::kFinished: return "finished";
    case MoveError::kNotYourTurn: return "out-of-turn";
    case MoveError::kVirtualSeat: return "virtual-seat";
    case MoveError::kNotInHand: return "not-in-hand";
    case MoveError::kIllegal: return "illegal";
    case MoveError::kNeedColor: return "need-color";
    case MoveError::kMustPlayDrawn: return "must-play-drawn-or-pass";
    case MoveError::kNothingToPass: return "nothing-to-pass";
  }
  return "?";
}

namespace {

std::string SeatName(int seat) { return "p" + std::to_string(seat + 1); }

std::vector<UnoFace> StandardUniverse() {
  std::vector<UnoFace> faces;
  for (const CardFace& f : BuildUnoDeck()) faces.push_back(std::get<UnoFace>(f));
  return faces;
}

}  // namespace

UnoGame::UnoGame(UnoConfig config, RandomTape tape)
    : universe_(config.universe.empty() ? StandardUniverse()
                                        : std::move(config.universe)),
      table_(std::move(tape)) {
  const int n = static_cast<int>(config.seats.size());
  if (n < 2 || n > 10) {
    throw std::invalid_argument("UNO needs 2 to 10 players");
  }
  if (config.hand_size < 1 ||
      n * config.hand_size + 1 > static_cast<int>(universe_.size())) {
    throw std::invalid_argument("too many players for one deck");
  }
  for (SeatKind kind : config.seats) seats_.push_back({kind, {}});

  Transcript& tr = table_.transcript;
  tr.Step("uno.setup");
  std::vector<Pile> piles;
  std::uint32_t serial = 0;
  for (const UnoFace& face : universe_) {
    piles.push_back({FaceDown(Card{serial++, face})});
  }
  piles = PileScramble(std::move(piles), table_.tape, tr);
  // The first pile ends up on top.
  for (auto it = piles.rbegin(); it != piles.rend(); ++it) {
    unplayed_.push_back(std::move((*it)[0].card));
  }
  for (int round = 0; round < config.hand_size; ++round) {
    for (Seat& seat : seats_) {
      seat.hand.push_back(std::move(unplayed_.back()));
      unplayed_.pop_back();
    }
  }
  tr.Game("deal n=" + std::to_string(config.hand_size));

  tr.Step("uno.start");
  const int start = PublicChoice(n, table_);
  match_.direction = Direction::kClockwise;
  Emit({GameEventKind::kStart, start, std::nullopt, std::nullopt,
        config.hand_size});
  match_.turn = start;
  FlipInitial();
}

int UnoGame::Next(int seat, int steps) const {
  const int n = num_seats();
  const int delta = match_.direction == Direction::kClockwise ? steps : -steps;
  return ((seat + delta) % n + n) % n;
}

void UnoGame::Emit(GameEvent event, const Card* shown) {
  std::string text(GameEventName(event.kind));
  if (event.seat >= 0) text += " " + SeatName(event.seat);
  switch (event.kind) {
    case GameEventKind::kStart:
    case GameEventKind::kReverse:
      text += match_.direction == Direction::kClockwise ? " cw" : " ccw";
      break;
    case GameEventKind::kColor:
      text += " " + ToToken(*event.color);
      break;
    case GameEventKind::kDraw:
    case GameEventKind::kReshuffle:
      text += " n=" + std::to_string(event.count);
      break;
    default:
      break;
  }
  if (shown != nullptr) {
    table_.transcript.Game(std::move(text), *shown);
  } else {
    table_.transcript.Game(std::move(text));
  }
  events_.push_back(std::move(event));
}

void UnoGame::FlipInitial() {
  Transcript& tr = table_.transcript;
  const int start = match_.turn;
  for (;;) {
    Card card = std::move(unplayed_.back());
    unplayed_.pop_back();
    const UnoFace face = std::get<UnoFace>(card.face);
    Emit({GameEventKind::kFlip, -1, face, std::nullopt, 0}, &card);
    if (face.kind != UnoKind::kWildDrawFour) {
      discard_.push_back(std::move(card));
      match_.top = face;
      break;
    }
    unplayed_.push_back(std::move(card));
    tr.Step("uno.reflip");
    std::vector<Pile> piles;
    for (Card& c : unplayed_) piles.push_back({FaceDown(std::move(c))});
    unplayed_.clear();
    piles = PileScramble(std::move(piles), table_.tape, tr);
    for (auto it = piles.rbegin(); it != piles.rend(); ++it) {
      unplayed_.push_back(std::move((*it)[0].card));
    }
    Emit({GameEventKind::kReshuffle, -1, std::nullopt, std::nullopt,
          static_cast<int>(unplayed_.size())});
  }

  // The flipped card acts on the starting player as if played just before.
  int first = start;
  switch (match_.top.kind) {
    case UnoKind::kWild:
      match_.designated_color = DesignateColor(table_);
      Emit({GameEventKind::kColor, -1, std::nullopt, match_.designated_color,
            0});
      break;
    case UnoKind::kSkip:
      Emit({GameEventKind::kSkip, start, std::nullopt, std::nullopt, 0});
      first = Next(start);
      break;
    case UnoKind::kReverse:
      match_.direction = Direction::kCounterClockwise;
      Emit({GameEventKind::kReverse, -1, std::nullopt, std::nullopt, 0});
      if (num_seats() == 2) {
        Emit({GameEventKind::kSkip, start, std::nullopt, std::nullopt, 0});
        first = Next(start);
      }
      break;
    case UnoKind::kDrawTwo:
      DrawCards(start, 2);
      Emit({GameEventKind::kSkip, start, std::nullopt, std::nullopt, 0});
      first = Next(start);
      break;
    default:
      break;
  }
  BeginTurn(first);
}

bool UnoGame::RefillFromDiscard() {
  if (discard_.size() <= 1) return false;
  std::vector<Pile> piles;
  for (std::size_t i = 0; i + 1 < discard_.size(); ++i) {
    piles.push_back({FaceDown(std::move(discard_[i]))});
  }
  discard_.erase(discard_.begin(), discard_.end() - 1);
  table_.transcript.Step("uno.refill");
  piles = PileScramble(std::move(piles), table_.tape, table_.transcript);
  for (auto it = piles.rbegin(); it != piles.rend(); ++it) {
    unplayed_.push_back(std::move((*it)[0].card));
  }
  Emit({GameEventKind::kReshuffle, -1, std::nullopt, std::nullopt,
        static_cast<int>(unplayed_.size())});
  return true;
}

int UnoGame::DrawCards(int seat, int count) {
  int drawn = 0;
  for (; drawn < count; ++drawn) {
    if (unplayed_.empty() && !RefillFromDiscard()) break;
    seats_[seat].hand.push_back(std::move(unplayed_.back()));
    unplayed_.pop_back();
  }
  if (drawn > 0) {
    Emit({GameEventKind::kDraw, seat, std::nullopt, std::nullopt, drawn});
  }
  return drawn;
}

void UnoGame::BeginTurn(int seat) {
  match_.turn = seat;
  ++turns_;
  Emit({GameEventKind::kTurn, seat, std::nullopt, std::nullopt, 0});
}

void UnoGame::PlayCard(int seat, Card card, std::optional<Color> color) {
  const UnoFace face = std::get<UnoFace>(card.face);
  pending_drawn_.reset();
  Emit({GameEventKind::kPlay, seat, face, std::nullopt, 0}, &card);
  discard_.push_back(std::move(card));
  match_.top = face;
  match_.designated_color.reset();
  if (face.is_black()) {
    match_.designated_color = color;
    Emit({GameEventKind::kColor, seat, std::nullopt, color, 0});
  }
  if (seats_[seat].hand.empty()) {
    winner_ = seat;
    Emit({GameEventKind::kWin, seat, std::nullopt, std::nullopt, 0});
    return;
  }

  const int n = num_seats();
  int next = Next(seat);
  switch (face.kind) {
    case UnoKind::kSkip:
      Emit({GameEventKind::kSkip, next, std::nullopt, std::nullopt, 0});
      next = Next(seat, 2);
      break;
    case UnoKind::kReverse:
      if (n == 2) {
        Emit({GameEventKind::kSkip, next, std::nullopt, std::nullopt, 0});
        next = seat;
      } else {
        match_.direction = match_.direction == Direction::kClockwise
                               ? Direction::kCounterClockwise
                               : Direction::kClockwise;
        Emit({GameEventKind::kReverse, seat, std::nullopt, std::nullopt, 0});
        next = Next(seat);
      }
      break;
    case UnoKind::kDrawTwo:
    case UnoKind::kWildDrawFour:
      DrawCards(next, face.kind == UnoKind::kDrawTwo ? 2 : 4);
      Emit({GameEventKind::kSkip, next, std::nullopt, std::nullopt, 0});
      next = Next(seat, 2);
      break;
    default:
      break;
  }
  BeginTurn(next);
}

std::vector<UnoFace> UnoGame::LegalPlays(int seat) const {
  std::vector<UnoFace> legal;
  if (finished() || seat != match_.turn) return legal;
  for (const Card& card : seats_[seat].hand) {
    if (pending_drawn_ && card.serial != *pending_drawn_) continue;
    const UnoFace& face = std::get<UnoFace>(card.face);
    if (UnoValid(face, match_) &&
        std::find(legal.begin(), legal.end(), face) == legal.end()) {
      legal.push_back(face);
    }
  }
  return legal;
}

SeatView UnoGame::View(int seat) const {
  SeatView v;
  v.seat = seat;
  for (const Card& c : seats_.at(seat).hand) {
    v.hand.push_back(std::get<UnoFace>(c.face));
  }
  for (const Seat& s : seats_) {
    v.hand_counts.push_back(static_cast<int>(s.hand.size()));
    v.kinds.push_back(s.kind);
  }
  v.unplayed_count = static_cast<int>(unplayed_.size());
  v.discard_count = static_cast<int>(discard_.size());
  v.top = match_.top;
  v.effective_color = EffectiveColor(match_);
  v.designated_color = match_.designated_color;
  v.direction = match_.direction;
  v.turn = match_.turn;
  if (pending_drawn_ && seat == match_.turn) {
    for (const Card& c : seats_[seat].hand) {
      if (c.serial == *pending_drawn_) v.drawn = std::get<UnoFace>(c.face);
    }
  }
  v.legal = LegalPlays(seat);
  v.finished = finished();
  v.winner = winner_;
  return v;
}

MoveError UnoGame::Play(int seat, const UnoFace& face,
                        std::optional<Color> color) {
  if (finished()) return MoveError::kFinished;
  if (seat != match_.turn) return MoveError::kNotYourTurn;
  if (seats_[seat].kind != SeatKind::kHuman) return MoveError::kVirtualSeat;
  std::vector<Card>& hand = seats_[seat].hand;
  auto it = std::find_if(hand.begin(), hand.end(), [&](const Card& c) {
    if (pending_drawn_ && c.serial != *pending_drawn_) return false;
    return std::get<UnoFace>(c.face) == face;
  });
  if (it == hand.end()) {
    if (pending_drawn_) return MoveError::kMustPlayDrawn;
    return MoveError::kNotInHand;
  }
  if (!UnoValid(face, match_)) return MoveError::kIllegal;
  if (face.is_black() && !color) return MoveError::kNeedColor;
  Card card = std::move(*it);
  hand.erase(it);
  PlayCard(seat, std::move(card), face.is_black() ? color : std::nullopt);
  return MoveError::kNone;
}

MoveError UnoGame::Draw(int seat) {
  if (finished()) return MoveError::kFinished;
  if (seat != match_.turn) return MoveError::kNotYourTurn;
  if (seats_[seat].kind != SeatKind::kHuman) return MoveError::kVirtualSeat;
  if (pending_drawn_) return MoveError::kMustPlayDrawn;
  if (DrawCards(seat, 1) == 1) {
    const Card& card = seats_[seat].hand.back();
    if (UnoValid(std::get<UnoFace>(card.face), match_)) {
      pending_drawn_ = card.serial;
      return MoveError::kNone;
    }
  }
  Emit({GameEventKind::kPass, seat, std::nullopt, std::nullopt, 0});
  BeginTurn(Next(seat));
  return MoveError::kNone;
}

MoveError UnoGame::Pass(int seat) {
  if (finished()) return MoveError::kFinished;
  if (seat != match_.turn) return MoveError::kNotYourTurn;
  if (seats_[seat].kind != SeatKind::kHuman) return MoveError::kVirtualSeat;
  if (!pending_drawn_) return MoveError::kNothingToPass;
  pending_drawn_.reset();
  Emit({GameEventKind::kPass, seat, std::nullopt, std::nullopt, 0});
  BeginTurn(Next(seat));
  return MoveError::kNone;
}

SelectionResult UnoGame::SelectFor(int seat, const SelectionOptions& options) {
  std::vector<std::vector<Card>*> hands;
  for (Seat& s : seats_) hands.push_back(&s.hand);
  const MatchState match = match_;
  return SelectForSeat(
      std::move(hands), seat, &unplayed_,
      [match](const CardFace& face) {
        return UnoValid(std::get<UnoFace>(face), match);
      },
      table_, options);
}

TurnOutcome UnoGame::VirtualTurn(const SelectionOptions& options) {
  const int seat = match_.turn;
  if (finished()) throw ContractViolation("game is over");
  if (seats_[seat].kind != SeatKind::kVirtual) {
    throw ContractViolation("current seat is not virtual");
  }
  TurnOutcome out;
  out.seat = seat;
  SelectionResult r = SelectFor(seat, options);
  ++out.selections;
  if (!r.selected) {
    out.drawn = DrawCards(seat, 1);
    if (out.drawn == 1) {
      r = SelectFor(seat, options);
      ++out.selections;
    }
    if (!r.selected) {
      Emit({GameEventKind::kPass, seat, std::nullopt, std::nullopt, 0});
      BeginTurn(Next(seat));
      return out;
    }
  }
  const UnoFace face = std::get<UnoFace>(r.selected->face);
  std::optional<Color> color;
  if (face.is_black()) color = DesignateColor(table_);
  out.played = face;
  PlayCard(seat, std::move(*r.selected), color);
  return out;
}

bool UnoGame::Conserved() const {
  std::vector<int> seen(universe_.size(), 0);
  auto mark = [&](const Card& c) {
    if (c.serial >= universe_.size()) return false;
    if (!(std::get<UnoFace>(c.face) == universe_[c.serial])) return false;
    return ++seen[c.serial] == 1;
  };
  for (const Seat& s : seats_) {
    for (const Card& c : s.hand) {
      if (!mark(c)) return false;
    }
  }
  for (const Card& c : unplayed_) {
    if (!mark(c)) return false;
  }
  for (const Card& c : discard_) {
    if (!mark(c)) return false;
  }
  return std::all_of(seen.begin(), seen.end(), [](int x) { return x == 1; });
}

RunResult RunGame(UnoGame& game, const HumanMoveSource& humans, int max_turns) {
  RunResult result;
  result.conserved_throughout = game.Conserved();
  while (!game.finished() && game.turns() <= max_turns) {
    const int seat = game.match().turn;
    if (game.kind(seat) == SeatKind::kVirtual) {
      game.VirtualTurn();
    } else {
      std::optional<HumanMove> move = humans ? humans(game, seat) : std::nullopt;
      if (!move) {
        result.aborted = true;
        break;
      }
      MoveError err = MoveError::kNone;
      switch (move->kind) {
        case MoveKind::kPlay:
          err = move->face ? game.Play(seat, *move->face, move->color)
                           : MoveError::kNotInHand;
          break;
        case MoveKind::kDraw:
          err = game.Draw(seat);
          break;
        case MoveKind::kPass:
          err = game.Pass(seat);
          break;
      }
      if (err != MoveError::kNone) {
        result.aborted = true;
        break;
      }
    }
    if (!game.Conserved()) result.conserved_throughout = false;
  }
  result.winner = game.winner();
  result.turns = game.turns();
  return result;
}

HumanMoveSource RandomHuman(std::uint64_t seed) {
  auto rng = std::make_shared<RandomTape>(RandomTape::Seeded(seed));
  return [rng](const UnoGame& game, int seat) -> std::optional<HumanMove> {
    const std::vector<UnoFace> legal = game.LegalPlays(seat);
    if (legal.empty()) {
      return HumanMove{game.awaiting_drawn_decision() ? MoveKind::kPass
                                                      : MoveKind::kDraw,
                       std::nullopt, std::nullopt};
    }
    HumanMove move{MoveKind::kPlay, legal[rng->UniformBelow(legal.size())],
                   std::nullopt};
    if (move.face->is_black()) move.color = kAllColors[rng->UniformBelow(4)];
    return move;
  };
}

HumanMoveSource ScriptedHuman(std::vector<HumanMove> moves) {
  auto state = std::make_shared<std::pair<std::vector<HumanMove>, std::size_t>>(
      std::move(moves), 0);
  return [state](const UnoGame&, int) -> std::optional<HumanMove> {
    if (state->second >= state->first.size()) return std::nullopt;
    return state->first[state->second++];
  };
}

}  // namespace vplay
