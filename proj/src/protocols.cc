#include "vplay/protocols.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace vplay {

namespace {

// x, 0, y  ->  x0 0 0 x1 y0 y1
const Permutation kAndFirstRearrangement = {0, 2, 3, 1, 4, 5};
// c1 c2 c3 c4 c5 c6  ->  c1 c4 c2 c3 c5 c6
const Permutation kAndSecondRearrangement = {0, 3, 1, 2, 4, 5};

Card TakeCard(TableCard& card) { return std::move(card.card); }

Commitment PairFrom(Layout& row, int first_col) {
  return {row.columns()[first_col - 1][0], row.columns()[first_col][0]};
}

}  // namespace

AndOutput SixCardAnd(Commitment x, Commitment y, Card spare_alpha,
                     Card spare_beta, Table& table) {
  if (!IsWellFormed(x) || !IsWellFormed(y)) {
    throw ContractViolation("AND inputs must be α/β commitments");
  }
  Transcript& tr = table.transcript;
  Layout row(Region::kAnd);

  tr.Step("and.1");
  Place(row, 1, FaceDown(x.left.card), tr);
  Place(row, 2, FaceDown(x.right.card), tr);
  Place(row, 3, FaceUp(std::move(spare_alpha)), tr);
  Place(row, 4, FaceUp(std::move(spare_beta)), tr);
  Place(row, 5, FaceDown(y.left.card), tr);
  Place(row, 6, FaceDown(y.right.card), tr);
  TurnDownAll(row, tr);

  tr.Step("and.2");
  RearrangeRow(row, kAndFirstRearrangement, tr);

  tr.Step("and.3");
  std::vector<Pile> piles(2);
  for (int c = 0; c < 6; ++c) {
    piles[c / 3].push_back(std::move(row.columns()[c][0]));
  }
  piles = PileScramble(std::move(piles), table.tape, tr);
  for (int c = 0; c < 6; ++c) {
    row.columns()[c][0] = std::move(piles[c / 3][c % 3]);
  }

  tr.Step("and.4");
  RearrangeRow(row, kAndSecondRearrangement, tr);

  tr.Step("and.5");
  const CardFace first = Reveal(row, 1, 1, tr);
  const CardFace second = Reveal(row, 1, 2, tr);
  const bool flipped = DecodeFaces(first, second);

  Commitment middle = PairFrom(row, 3);
  Commitment right = PairFrom(row, 5);
  Card c1 = TakeCard(row.columns()[0][0]);
  Card c2 = TakeCard(row.columns()[1][0]);
  if (flipped) std::swap(c1, c2);

  AndOutput out;
  out.spare_alpha = std::move(c1);
  out.spare_beta = std::move(c2);
  if (!flipped) {
    out.and_pair = std::move(middle);
    out.nand_side = std::move(right);
  } else {
    out.and_pair = std::move(right);
    out.nand_side = std::move(middle);
  }
  return out;
}

LotteryOutcome CovertLottery(LotteryInput input, Table& table,
                             const LotteryProbe* probe) {
  const int m = static_cast<int>(input.cards.size());
  if (m < 1) throw ContractViolation("lottery needs at least one card");
  if (static_cast<int>(input.validity.size()) != m) {
    throw ContractViolation("lottery needs one validity commitment per card");
  }
  for (const Commitment& c : input.validity) {
    if (!IsWellFormed(c)) {
      throw ContractViolation("malformed validity commitment");
    }
  }
  Transcript& tr = table.transcript;
  Layout lot(Region::kLottery);

  tr.Step("lot.1");
  for (int i = 0; i < m; ++i) {
    Place(lot, i + 1, FaceDown(std::move(input.cards[i].card)), tr);
    Place(lot, i + 1, FaceDown(std::move(input.validity[i].left.card)), tr);
    Place(lot, i + 1, FaceDown(std::move(input.validity[i].right.card)), tr);
  }

  tr.Step("lot.2");
  ScrambleColumns(lot, table.tape, tr);

  tr.Step("lot.3");
  std::vector<Card> extras = table.supply.Take(
      {AuxRole::Alpha(), AuxRole::Alpha(), AuxRole::Beta(), AuxRole::Beta()},
      tr);
  Layout marker(Region::kMarker);
  Place(marker, 1, FaceUp(extras[2]), tr);  // token t = 1 is (β, α)
  Place(marker, 2, FaceUp(extras[0]), tr);
  TurnDownAll(marker, tr);
  Commitment token = {marker.columns()[0][0], marker.columns()[1][0]};
  marker.columns().clear();
  Card spare_alpha = std::move(extras[1]);
  Card spare_beta = std::move(extras[3]);

  std::vector<bool> shuffled_validity;
  if (probe != nullptr) {
    for (int i = 1; i <= m; ++i) {
      shuffled_validity.push_back(
          Decode({lot.at(2, i), lot.at(3, i)}));
    }
  }

  tr.Step("lot.4");
  const int iterations = input.mode == LotteryMode::kModified ? m : m - 1;
  auto pop_pair = [&](int col) {
    Pile& pile = lot.columns()[col - 1];
    Commitment pair{pile[1], pile[2]};
    pile.resize(1);
    return pair;
  };
  for (int i = 1; i <= iterations; ++i) {
    AndOutput out = SixCardAnd(pop_pair(i), std::move(token),
                               std::move(spare_alpha), std::move(spare_beta),
                               table);
    Place(lot, i, FaceDown(std::move(out.and_pair.left.card)), tr);
    Place(lot, i, FaceDown(std::move(out.and_pair.right.card)), tr);
    Layout next_token(Region::kMarker);
    Place(next_token, 1, FaceDown(out.nand_side.left.card), tr);
    Place(next_token, 2, FaceDown(out.nand_side.right.card), tr);
    token = std::move(out.nand_side);
    spare_alpha = std::move(out.spare_alpha);
    spare_beta = std::move(out.spare_beta);
  }
  std::vector<Card> returned_extras;
  if (input.mode == LotteryMode::kOriginal) {
    // The last validity pair is set aside and the token becomes y_m.
    Commitment unused = pop_pair(m);
    Place(lot, m, FaceDown(std::move(token.left.card)), tr);
    Place(lot, m, FaceDown(std::move(token.right.card)), tr);
    returned_extras.push_back(std::move(unused.left.card));
    returned_extras.push_back(std::move(unused.right.card));
  } else {
    returned_extras.push_back(std::move(token.left.card));
    returned_extras.push_back(std::move(token.right.card));
  }
  returned_extras.push_back(std::move(spare_alpha));
  returned_extras.push_back(std::move(spare_beta));

  tr.Step("lot.5");
  if (probe != nullptr && probe->before_second_scramble) {
    std::vector<bool> chain;
    for (int i = 1; i <= m; ++i) {
      chain.push_back(Decode({lot.at(2, i), lot.at(3, i)}));
    }
    probe->before_second_scramble(shuffled_validity, chain);
  }

  tr.Step("lot.6");
  ScrambleColumns(lot, table.tape, tr);

  tr.Step("lot.7");
  LotteryOutcome outcome;
  for (int i = 1; i <= m; ++i) {
    const CardFace left = Reveal(lot, 2, i, tr);
    const CardFace right = Reveal(lot, 3, i, tr);
    if (DecodeFaces(left, right)) {
      if (outcome.selected_col != 0) {
        throw ContractViolation("lottery produced more than one winner");
      }
      outcome.selected_col = i;
    }
  }
  if (input.mode == LotteryMode::kOriginal && outcome.selected_col == 0) {
    throw ContractViolation("original lottery must select a card");
  }
  for (int i = 1; i <= m; ++i) {
    Pile& pile = lot.columns()[i - 1];
    outcome.spent_commitments.push_back(std::move(pile[1].card));
    outcome.spent_commitments.push_back(std::move(pile[2].card));
    if (i == outcome.selected_col) {
      outcome.selected = std::move(pile[0]);
    } else {
      outcome.leftover.push_back(std::move(pile[0]));
      outcome.leftover_cols.push_back(i);
    }
  }
  table.supply.Return(static_cast<int>(returned_extras.size()), tr);
  return outcome;
}

namespace {

constexpr std::pair<Mutation, std::string_view> kMutationNames[] = {
    {Mutation::kNone, "none"},
    {Mutation::kDropFirstShuffle, "drop-first-shuffle"},
    {Mutation::kDropSecondShuffle, "drop-shuffle"},
    {Mutation::kDropReturnShuffle, "drop-return-shuffle"},
    {Mutation::kExtraShuffle, "extra-shuffle"},
    {Mutation::kHideCard, "hide-card"},
    {Mutation::kSwapMarker, "swap-marker"},
    {Mutation::kExtraAux, "extra-aux"},
};

}  // namespace

std::string_view MutationName(Mutation m) {
  for (const auto& [mutation, name] : kMutationNames) {
    if (mutation == m) return name;
  }
  return "?";
}

Mutation ParseMutation(std::string_view name) {
  for (const auto& [mutation, n] : kMutationNames) {
    if (n == name) return mutation;
  }
  throw std::invalid_argument("unknown mutation '" + std::string(name) + "'");
}

std::vector<Mutation> AllMutations() {
  std::vector<Mutation> all;
  for (const auto& [mutation, name] : kMutationNames) {
    if (mutation != Mutation::kNone) all.push_back(mutation);
  }
  return all;
}

SelectionResult CardSelection(SelectionContext ctx, Table& table,
                              const SelectionOptions& options) {
  const int n = static_cast<int>(ctx.hands.size());
  if (n < 2) {
    throw ContractViolation("card selection needs the acting hand and a deck");
  }
  if (!ctx.is_valid) throw ContractViolation("missing validity predicate");
  Transcript& tr = table.transcript;
  const std::size_t start = tr.size();
  const int taken_before = table.supply.taken();

  SelectionResult result;
  if (ctx.hands[0].empty()) {
    tr.Step("sel.empty");
    result.hands = std::move(ctx.hands);
    return result;
  }

  const Mutation mutation = options.mutation;
  // Held-back card and its owner for kHideCard.
  std::optional<std::pair<int, Card>> hidden;
  if (mutation == Mutation::kHideCard) {
    for (int owner = n - 1; owner >= 1 && !hidden; --owner) {
      if (!ctx.hands[owner].empty()) {
        hidden.emplace(owner, std::move(ctx.hands[owner].back()));
        ctx.hands[owner].pop_back();
      }
    }
  }

  std::vector<int> owners;
  Layout matrix(Region::kMain);
  tr.Step("sel.begin");
  tr.Step("sel.1");
  for (int owner = 0; owner < n; ++owner) {
    for (Card& card : ctx.hands[owner]) {
      Place(matrix, matrix.cols() + 1, FaceDown(std::move(card)), tr);
      owners.push_back(owner + 1);
    }
    ctx.hands[owner].clear();
  }
  const int k = matrix.cols();

  tr.Step("sel.2");
  if (mutation == Mutation::kSwapMarker) {
    const auto it = std::find(owners.begin(), owners.end(), 2);
    if (it != owners.end()) *it = n > 2 ? n : 1;
  }
  std::vector<AuxRole> marker_roles;
  for (int owner : owners) marker_roles.push_back(AuxRole::Theta(owner));
  std::vector<Card> markers = table.supply.Take(marker_roles, tr);
  std::optional<Card> surplus_marker;
  if (mutation == Mutation::kExtraAux) {
    surplus_marker = table.supply.Take({AuxRole::Theta(1)}, tr).front();
  }
  for (int c = 1; c <= k; ++c) {
    Place(matrix, c, FaceUp(std::move(markers[c - 1])), tr);
  }

  tr.Step("sel.3");
  TurnDownAll(matrix, tr);

  tr.Step("sel.4");
  if (mutation != Mutation::kDropFirstShuffle) {
    ScrambleColumns(matrix, table.tape, tr);
  }

  tr.Step("sel.5");
  std::vector<bool> valid(k);
  for (int c = 1; c <= k; ++c) {
    valid[c - 1] = ctx.is_valid(Reveal(matrix, 1, c, tr));
  }

  tr.Step("sel.6");
  std::vector<AuxRole> pair_roles;
  for (int c = 0; c < k; ++c) {
    pair_roles.push_back(AuxRole::Alpha());
    pair_roles.push_back(AuxRole::Beta());
  }
  std::vector<Card> pair_cards = table.supply.Take(pair_roles, tr);
  for (int c = 1; c <= k; ++c) {
    Commitment bit = EncodeBit(valid[c - 1], pair_cards[2 * (c - 1)],
                               pair_cards[2 * (c - 1) + 1]);
    Place(matrix, c, FaceUp(std::move(bit.left.card)), tr);
    Place(matrix, c, FaceUp(std::move(bit.right.card)), tr);
  }

  tr.Step("sel.7");
  TurnDownAll(matrix, tr);

  tr.Step("sel.8");
  if (mutation != Mutation::kDropSecondShuffle) {
    ScrambleColumns(matrix, table.tape, tr);
  }
  if (mutation == Mutation::kExtraShuffle) {
    ScrambleColumns(matrix, table.tape, tr);
  }

  tr.Step("sel.9");
  std::vector<int> column_owner(k);
  for (int c = 1; c <= k; ++c) {
    column_owner[c - 1] = ThetaIndex(Reveal(matrix, 2, c, tr));
  }

  tr.Step("sel.10");
  LotteryInput lottery;
  lottery.mode = options.mode;
  int acting_markers = 0;
  std::vector<Pile> acting_columns;
  {
    int out_col = 0;
    for (int c = 1; c <= matrix.cols();) {
      if (column_owner[c - 1] == 1) {
        ObservationEvent e;
        e.kind = EventKind::kMove;
        e.pos = matrix.pos(0, c);
        e.to = {Region::kLottery, 0, ++out_col};
        tr.Append(std::move(e));
        acting_columns.push_back(matrix.TakeColumn(c));
        column_owner.erase(column_owner.begin() + (c - 1));
        ++acting_markers;
      } else {
        ++c;
      }
    }
  }
  if (acting_markers > 0) table.supply.Return(acting_markers, tr);

  std::vector<Card> returned_to_actor;
  if (!acting_columns.empty()) {
    for (Pile& pile : acting_columns) {
      lottery.cards.push_back(std::move(pile[0]));
      lottery.validity.push_back({std::move(pile[2]), std::move(pile[3])});
    }
    LotteryOutcome outcome = CovertLottery(std::move(lottery), table,
                                           options.probe);
    table.supply.Return(static_cast<int>(outcome.spent_commitments.size()),
                        tr);

    tr.Step("sel.11");
    for (std::size_t i = 0; i < outcome.leftover.size(); ++i) {
      ObservationEvent e;
      e.kind = EventKind::kMove;
      e.pos = {Region::kLottery, 1, outcome.leftover_cols[i]};
      e.to = {Region::kHand, 0, 1};
      tr.Append(std::move(e));
      returned_to_actor.push_back(std::move(outcome.leftover[i].card));
    }
    if (outcome.selected) {
      result.selected = std::move(outcome.selected->card);
      ObservationEvent e;
      e.kind = EventKind::kMove;
      e.pos = {Region::kLottery, 1, outcome.selected_col};
      e.to = {Region::kPile, 0, 1};
      tr.Append(std::move(e));
    }
  } else {
    tr.Step("sel.11");
  }

  std::vector<std::vector<Card>> restored(n);
  restored[0] = std::move(returned_to_actor);

  tr.Step("sel.12");
  const int remaining = matrix.cols();
  if (remaining > 0) {
    for (Pile& pile : matrix.columns()) pile.resize(2);
    table.supply.Return(2 * remaining, tr);
    TurnDownAll(matrix, tr);

    tr.Step("sel.13");
    if (mutation != Mutation::kDropReturnShuffle) {
      ScrambleColumns(matrix, table.tape, tr);
    }

    tr.Step("sel.14");
    std::vector<int> owner_of(remaining);
    for (int c = 1; c <= remaining; ++c) {
      owner_of[c - 1] = ThetaIndex(Reveal(matrix, 2, c, tr));
    }

    tr.Step("sel.15");
    std::vector<int> order(remaining);
    for (int i = 0; i < remaining; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return owner_of[a] < owner_of[b];
    });
    for (int idx : order) {
      const int owner = owner_of[idx];
      ObservationEvent e;
      e.kind = EventKind::kMove;
      e.pos = matrix.pos(1, idx + 1);
      e.to = {Region::kHand, 0, owner};
      tr.Append(std::move(e));
      restored[owner - 1].push_back(
          std::move(matrix.columns()[idx][0].card));
    }
    table.supply.Return(remaining, tr);
  }
  if (surplus_marker) table.supply.Return(1, tr);
  if (hidden) restored[hidden->first].push_back(std::move(hidden->second));

  if (result.selected) {
    tr.Step("sel.out");
    Layout output(Region::kPile);
    Place(output, 1, FaceDown(*result.selected), tr);
    Reveal(output, 1, 1, tr);
  }
  tr.Step("sel.end");

  result.hands = std::move(restored);
  result.shuffles = tr.CountShuffles(start);
  result.aux_taken = table.supply.taken() - taken_before;
  return result;
}

SelectionResult SelectForSeat(std::vector<std::vector<Card>*> seat_hands,
                              int actor, std::vector<Card>* deck,
                              ValidityPredicate is_valid, Table& table,
                              const SelectionOptions& options) {
  const int n = static_cast<int>(seat_hands.size());
  SelectionContext ctx;
  for (int i = 0; i < n; ++i) {
    ctx.hands.push_back(std::move(*seat_hands[(actor + i) % n]));
  }
  std::vector<Card> empty_deck;
  ctx.hands.push_back(std::move(deck != nullptr ? *deck : empty_deck));
  ctx.is_valid = std::move(is_valid);
  SelectionResult result = CardSelection(std::move(ctx), table, options);
  for (int i = 0; i < n; ++i) {
    *seat_hands[(actor + i) % n] = std::move(result.hands[i]);
  }
  if (deck != nullptr) *deck = std::move(result.hands[n]);
  return result;
}

int PublicChoice(int options, Table& table) {
  if (options < 1 || options > 10) {
    throw ContractViolation("public choice supports 1..10 options");
  }
  Transcript& tr = table.transcript;
  Layout markers(Region::kMarker);
  tr.Step("choice.1");
  for (int i = 0; i < options; ++i) {
    Place(markers, i + 1,
          FaceUp(Card{kNoSerial, UnoFace::Number(i, Color::kRed)}), tr);
  }
  TurnDownAll(markers, tr);
  tr.Step("choice.2");
  ScrambleColumns(markers, table.tape, tr);
  tr.Step("choice.3");
  const CardFace shown = Reveal(markers, 1, 1, tr);
  return std::get<UnoFace>(shown).number;
}

Color DesignateColor(Table& table) {
  Transcript& tr = table.transcript;
  Layout markers(Region::kMarker);
  tr.Step("color.1");
  for (int i = 0; i < 4; ++i) {
    Place(markers, i + 1,
          FaceUp(Card{kNoSerial, UnoFace::Number(0, kAllColors[i])}), tr);
  }
  TurnDownAll(markers, tr);
  tr.Step("color.2");
  ScrambleColumns(markers, table.tape, tr);
  tr.Step("color.3");
  return *std::get<UnoFace>(Reveal(markers, 1, 1, tr)).color;
}

}  // namespace vplay
