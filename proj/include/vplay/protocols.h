#ifndef VPLAY_PROTOCOLS_H_
#define VPLAY_PROTOCOLS_H_

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "vplay/deck.h"
#include "vplay/table.h"

namespace vplay {

struct AndOutput {
  Commitment and_pair;   // x ∧ y
  Commitment nand_side;  // x̄ ∧ y
  // The two cards turned up in the last step, handed back as α then β.
  Card spare_alpha;
  Card spare_beta;
};

// Six-card AND. Lays out x, a fresh 0 from the spare pair, and y; applies the
// two fixed rearrangements around one two-pile scramble; reveals the leftmost
// pair and reads the middle/right pairs accordingly. Exactly one shuffle.
AndOutput SixCardAnd(Commitment x, Commitment y, Card spare_alpha,
                     Card spare_beta, Table& table);

enum class LotteryMode {
  kModified,  // may report that no card is valid
  kOriginal,  // always selects; uniform over all cards when none is valid
};

struct LotteryInput {
  std::vector<TableCard> cards;
  std::vector<Commitment> validity;
  LotteryMode mode = LotteryMode::kModified;
};

struct LotteryOutcome {
  std::optional<TableCard> selected;
  // Unselected cards in final column order; m-1 of them after a selection.
  std::vector<TableCard> leftover;
  // 1-based lottery columns of the selected card and of each leftover.
  int selected_col = 0;
  std::vector<int> leftover_cols;
  // The revealed result pairs, owed back to the aux supply by the caller.
  std::vector<Card> spent_commitments;

  bool none_valid() const { return !selected.has_value(); }
};

// White-box hook: sees the shuffled validity bits and the chained results
// just before the second scramble. Test use only.
struct LotteryProbe {
  std::function<void(const std::vector<bool>& shuffled_validity,
                     const std::vector<bool>& chain)>
      before_second_scramble;
};

// Covert lottery over m face-down cards with validity commitments. Takes four
// spare cards (α, α, β, β) from the table's supply and returns four. Modified
// mode runs m ANDs (m+2 shuffles); original mode runs m-1 ANDs and reuses the
// final token as the last result (m+1 shuffles).
LotteryOutcome CovertLottery(LotteryInput input, Table& table,
                             const LotteryProbe* probe = nullptr);

// Deliberate protocol defects for the verification harness.
enum class Mutation {
  kNone,
  kDropFirstShuffle,   // no scramble before the first-row reveal
  kDropSecondShuffle,  // no scramble before the marker reveal
  kDropReturnShuffle,  // no scramble before returning cards to owners
  kExtraShuffle,       // one additional scramble of the full matrix
  kHideCard,           // one card is held back from the layout
  kSwapMarker,         // one card gets another owner's marker
  kExtraAux,           // one more marker than needed is taken
};

std::string_view MutationName(Mutation m);
// Throws std::invalid_argument for unknown names.
Mutation ParseMutation(std::string_view name);
std::vector<Mutation> AllMutations();

using ValidityPredicate = std::function<bool(const CardFace&)>;

struct SelectionContext {
  // hands[0] is the acting player; the last entry is the unplayed deck
  // (possibly empty). Owners are numbered 1..n in this order.
  std::vector<std::vector<Card>> hands;
  ValidityPredicate is_valid;
};

struct SelectionOptions {
  LotteryMode mode = LotteryMode::kModified;
  Mutation mutation = Mutation::kNone;
  const LotteryProbe* probe = nullptr;
};

struct SelectionResult {
  std::optional<Card> selected;
  // Every owner's cards after the run; hands[0] no longer holds `selected`.
  std::vector<std::vector<Card>> hands;
  int shuffles = 0;
  int aux_taken = 0;

  bool none_valid() const { return !selected.has_value(); }
};

// Card selection for the acting player: picks a uniformly random valid card
// from hands[0] (or reports none) and returns every other card to its owner.
// The selected card is revealed at the end of the run. With an empty acting
// hand no protocol runs and the result is NoneValid.
SelectionResult CardSelection(SelectionContext ctx, Table& table,
                              const SelectionOptions& options = {});

// CardSelection for seat `actor` of a game: hands are passed as the actor,
// the following seats in seat order, then `deck`. Every card goes back where
// it came from; the selected card is left out of the actor's hand.
SelectionResult SelectForSeat(std::vector<std::vector<Card>*> seat_hands,
                              int actor, std::vector<Card>* deck,
                              ValidityPredicate is_valid, Table& table,
                              const SelectionOptions& options = {});

// Uniform color by scrambling four marker cards and revealing the first.
Color DesignateColor(Table& table);

// Uniform index in [0, options) the same way, with numbered marker cards.
int PublicChoice(int options, Table& table);

}  // namespace vplay

#endif  // VPLAY_PROTOCOLS_H_
