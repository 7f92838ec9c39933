#include "vplay/protocols.h"

#include <algorithm>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "test_util.h"

namespace vplay {
namespace {

using testing::AllPermutations;
using testing::CardsOf;
using testing::ChiSquaredPValue;
using testing::ForEachTape;
using testing::SortedTokens;

Commitment Bit(bool b, std::uint32_t serial) {
  return EncodeBit(b, Card{serial, AuxRole::Alpha()},
                   Card{serial + 1, AuxRole::Beta()});
}

TEST(SixCardAnd, TruthTableOnBothTapes) {
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (const Permutation& p : AllPermutations(2)) {
        Table table(RandomTape::Explicit({p}));
        AndOutput out = SixCardAnd(Bit(x, 10), Bit(y, 20),
                                   Card{30, AuxRole::Alpha()},
                                   Card{31, AuxRole::Beta()}, table);
        EXPECT_EQ(Decode(out.and_pair), x && y);
        EXPECT_EQ(Decode(out.nand_side), !x && y);
        EXPECT_TRUE(IsAlpha(out.spare_alpha.face));
        EXPECT_TRUE(IsBeta(out.spare_beta.face));
        EXPECT_EQ(table.transcript.CountShuffles(), 1);
        // The revealed pair encodes x or its negation depending on the tape
        // alone, never on y.
        const auto lines = table.transcript.Lines();
        const auto first_reveal =
            std::find_if(lines.begin(), lines.end(), [](const std::string& l) {
              return l.rfind("REVEAL", 0) == 0;
            });
        ASSERT_NE(first_reveal, lines.end());
        const bool shows_alpha = first_reveal->find("ALPHA") != std::string::npos;
        EXPECT_EQ(shows_alpha, (x == 0) == (p[0] == 0));
      }
    }
  }
}

TEST(SixCardAnd, RejectsMalformedInput) {
  Table table(RandomTape::Seeded(1));
  Commitment bad = Bit(false, 10);
  bad.left = bad.right;
  EXPECT_THROW(SixCardAnd(bad, Bit(true, 20), Card{30, AuxRole::Alpha()},
                          Card{31, AuxRole::Beta()}, table),
               ContractViolation);
}

LotteryInput MakeLottery(const std::vector<bool>& validity, LotteryMode mode) {
  LotteryInput in;
  in.mode = mode;
  for (std::size_t i = 0; i < validity.size(); ++i) {
    in.cards.push_back(FaceDown(
        Card{static_cast<std::uint32_t>(i),
             UnoFace::Number(static_cast<int>(i), Color::kBlue)}));
    in.validity.push_back(Bit(validity[i], 100 + 2 * static_cast<std::uint32_t>(i)));
  }
  return in;
}

int SelectedIndex(const LotteryOutcome& out) {
  if (!out.selected) return -1;
  return std::get<UnoFace>(out.selected->face()).number;
}

// Reference lottery: after the first scramble the first valid column wins; in
// original mode the last column wins when none is valid. The second scramble
// only moves the winner.
struct ModelOutcome {
  int card = -1;
  int col = 0;
};

ModelOutcome ModelLottery(const std::vector<bool>& validity, LotteryMode mode,
                          const Permutation& first, const Permutation& second) {
  const int m = static_cast<int>(validity.size());
  int winner_slot = -1;
  for (int i = 0; i < m && winner_slot < 0; ++i) {
    if (validity[first[i]]) winner_slot = i;
  }
  if (winner_slot < 0 && mode == LotteryMode::kOriginal) winner_slot = m - 1;
  ModelOutcome out;
  if (winner_slot < 0) return out;
  out.card = first[winner_slot];
  for (int j = 0; j < m; ++j) {
    if (second[j] == winner_slot) out.col = j + 1;
  }
  return out;
}

std::vector<int> LotterySizes(int m, LotteryMode mode) {
  const int ands = mode == LotteryMode::kModified ? m : m - 1;
  std::vector<int> sizes = {m};
  for (int i = 0; i < ands; ++i) sizes.push_back(2);
  sizes.push_back(m);
  return sizes;
}

TEST(CovertLottery, TwoValidCardsEachWinHalfTheTapes) {
  std::map<int, int> wins;
  int tapes = 0;
  ForEachTape(LotterySizes(2, LotteryMode::kModified), [&](auto tape) {
    Table table(RandomTape::Explicit(tape));
    ++wins[SelectedIndex(
        CovertLottery(MakeLottery({true, true}, LotteryMode::kModified), table))];
    ++tapes;
  });
  EXPECT_EQ(tapes, 16);
  EXPECT_EQ(wins, (std::map<int, int>{{0, 8}, {1, 8}}));
}

TEST(CovertLottery, OriginalModeWithNoValidCardIsUniform) {
  std::map<int, int> wins;
  int tapes = 0;
  ForEachTape(LotterySizes(2, LotteryMode::kOriginal), [&](auto tape) {
    Table table(RandomTape::Explicit(tape));
    ++wins[SelectedIndex(
        CovertLottery(MakeLottery({false, false}, LotteryMode::kOriginal), table))];
    ++tapes;
  });
  EXPECT_EQ(tapes, 8);
  EXPECT_EQ(wins, (std::map<int, int>{{0, 4}, {1, 4}}));
}

TEST(CovertLottery, MatchesReferenceModelOnEveryTape) {
  const int m = 3;
  for (LotteryMode mode : {LotteryMode::kModified, LotteryMode::kOriginal}) {
    for (int mask = 0; mask < (1 << m); ++mask) {
      std::vector<bool> validity;
      for (int i = 0; i < m; ++i) validity.push_back(mask >> i & 1);
      ForEachTape(LotterySizes(m, mode), [&](std::vector<Permutation> tape) {
        const ModelOutcome want =
            ModelLottery(validity, mode, tape.front(), tape.back());
        Table table(RandomTape::Explicit(tape));
        LotteryOutcome got = CovertLottery(MakeLottery(validity, mode), table);
        ASSERT_EQ(SelectedIndex(got), want.card);
        ASSERT_EQ(got.selected_col, want.col);
        ASSERT_EQ(got.leftover.size() + (got.selected ? 1 : 0),
                  static_cast<std::size_t>(m));
      });
    }
  }
}

TEST(CovertLottery, ChainMarksOnlyTheFirstValidColumn) {
  RandomTape tape = RandomTape::Seeded(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + trial % 6;
    std::vector<bool> validity;
    for (int i = 0; i < m; ++i) validity.push_back(tape.UniformBelow(2));
    LotteryProbe probe;
    bool called = false;
    probe.before_second_scramble = [&](const std::vector<bool>& shuffled,
                                       const std::vector<bool>& chain) {
      called = true;
      bool seen = false;
      for (int i = 0; i < m; ++i) {
        EXPECT_EQ(chain[i], shuffled[i] && !seen);
        seen = seen || shuffled[i];
      }
    };
    Table table(RandomTape::Seeded(trial));
    CovertLottery(MakeLottery(validity, LotteryMode::kModified), table, &probe);
    EXPECT_TRUE(called);
  }
}

TEST(CovertLottery, ShuffleAndAuxCounts) {
  for (int m = 1; m <= 6; ++m) {
    for (LotteryMode mode : {LotteryMode::kModified, LotteryMode::kOriginal}) {
      Table table(RandomTape::Seeded(m));
      std::vector<bool> validity(m, false);
      validity[m / 2] = true;
      LotteryOutcome out = CovertLottery(MakeLottery(validity, mode), table);
      EXPECT_EQ(table.transcript.CountShuffles(),
                mode == LotteryMode::kModified ? m + 2 : m + 1);
      EXPECT_EQ(table.supply.taken(), 4);
      EXPECT_EQ(table.supply.outstanding(), 0);
      EXPECT_EQ(out.spent_commitments.size(), static_cast<std::size_t>(2 * m));
    }
  }
}

TEST(CovertLottery, RejectsMalformedCommitment) {
  Table table(RandomTape::Seeded(1));
  LotteryInput in = MakeLottery({true, false}, LotteryMode::kModified);
  in.validity[1].right = in.validity[1].left;
  EXPECT_THROW(CovertLottery(in, table), ContractViolation);
  in = MakeLottery({true, false}, LotteryMode::kModified);
  in.validity.pop_back();
  EXPECT_THROW(CovertLottery(in, table), ContractViolation);
}

// UNO legality against a top card, written out independently of the game
// module.
ValidityPredicate MatchesTop(const UnoFace& top) {
  return [top](const CardFace& face) {
    const UnoFace& f = std::get<UnoFace>(face);
    if (f.is_black()) return true;
    if (f.color == top.color) return true;
    if (f.kind != top.kind) return false;
    return f.kind != UnoKind::kNumber || f.number == top.number;
  };
}

std::vector<int> SelectionSizes(int k, int k1) {
  std::vector<int> sizes = {k, k};
  if (k1 > 0) {
    sizes.push_back(k1);
    for (int i = 0; i < k1; ++i) sizes.push_back(2);
    sizes.push_back(k1);
  }
  if (k - k1 > 0) sizes.push_back(k - k1);
  return sizes;
}

void ExpectRestored(const std::vector<std::vector<Card>>& before,
                    const SelectionResult& r) {
  ASSERT_EQ(before.size(), r.hands.size());
  for (std::size_t o = 0; o < before.size(); ++o) {
    std::vector<Card> want = before[o];
    if (o == 0 && r.selected) {
      auto it = std::find_if(want.begin(), want.end(), [&](const Card& c) {
        return c.serial == r.selected->serial;
      });
      ASSERT_NE(it, want.end());
      want.erase(it);
    }
    std::vector<std::uint32_t> a, b;
    for (const Card& c : want) a.push_back(c.serial);
    for (const Card& c : r.hands[o]) b.push_back(c.serial);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b) << "owner " << o + 1;
  }
}

TEST(CardSelection, PicksOnlyValidCardsUniformly) {
  const std::vector<std::vector<Card>> hands = {
      CardsOf({"7R", "4G", "W"}, 1), CardsOf({"9B"}, 10)};
  std::map<std::string, int> wins;
  int tapes = 0;
  ForEachTape(SelectionSizes(4, 3), [&](std::vector<Permutation> tape) {
    Table table(RandomTape::Explicit(tape));
    SelectionResult r = CardSelection(
        {hands, MatchesTop(UnoFace::Number(2, Color::kRed))}, table);
    ASSERT_TRUE(r.selected.has_value());
    ++wins[ToToken(r.selected->face)];
    ExpectRestored(hands, r);
    ++tapes;
  });
  EXPECT_EQ(tapes, 24 * 24 * 6 * 8 * 6);
  EXPECT_EQ(wins, (std::map<std::string, int>{{"7R", tapes / 2}, {"W", tapes / 2}}));
}

TEST(CardSelection, NoValidCardLeavesHandsAlone) {
  const std::vector<std::vector<Card>> hands = {CardsOf({"4G", "5B"}, 1),
                                                CardsOf({"9Y", "3R"}, 10)};
  Table table(RandomTape::Seeded(3));
  SelectionResult r = CardSelection(
      {hands, MatchesTop(UnoFace::Number(2, Color::kRed))}, table);
  EXPECT_TRUE(r.none_valid());
  ExpectRestored(hands, r);
  EXPECT_EQ(r.shuffles, 2 + 2 + 2 + 1);
}

TEST(CardSelection, ExhaustiveTwoPlusTwo) {
  const std::vector<std::vector<Card>> hands = {CardsOf({"3R", "+G"}, 1),
                                                CardsOf({"5R", "SB"}, 10)};
  std::map<std::string, int> wins;
  int tapes = 0;
  const auto sizes = SelectionSizes(4, 2);
  EXPECT_EQ(sizes, (std::vector<int>{4, 4, 2, 2, 2, 2, 2}));
  ForEachTape(sizes, [&](std::vector<Permutation> tape) {
    Table table(RandomTape::Explicit(tape));
    SelectionResult r = CardSelection(
        {hands, MatchesTop(UnoFace::Number(3, Color::kYellow))}, table);
    ASSERT_TRUE(r.selected.has_value());
    ++wins[ToToken(r.selected->face)];
    EXPECT_EQ(r.shuffles, 2 + 5);
    EXPECT_EQ(r.aux_taken, 3 * 4 + 4);
    EXPECT_EQ(table.supply.outstanding(), 0);
    ExpectRestored(hands, r);
    ++tapes;
  });
  EXPECT_EQ(tapes, 18432);
  EXPECT_EQ(wins, (std::map<std::string, int>{{"3R", tapes}}));
}

TEST(CardSelection, ResourceCountsAcrossShapes) {
  RandomTape dealer = RandomTape::Seeded(11);
  const auto faces = AllUnoFaces();
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 4;
    std::vector<std::vector<Card>> hands(n);
    std::uint32_t serial = 0;
    for (int o = 0; o < n; ++o) {
      const int size = (o == 0 ? 1 : 0) + dealer.UniformBelow(4);
      for (int i = 0; i < size; ++i) {
        hands[o].push_back({serial++, faces[dealer.UniformBelow(faces.size())]});
      }
    }
    int k = 0;
    for (const auto& h : hands) k += h.size();
    const int k1 = hands[0].size();
    Table table(RandomTape::Seeded(trial));
    const UnoFace top = faces[dealer.UniformBelow(52)];
    SelectionResult r = CardSelection({hands, MatchesTop(top)}, table);
    EXPECT_EQ(r.shuffles, k1 + 5 - (k == k1 ? 1 : 0));
    EXPECT_EQ(r.aux_taken, 3 * k + 4);
    EXPECT_EQ(table.supply.outstanding(), 0);
    ExpectRestored(hands, r);
    const bool any_valid =
        std::any_of(hands[0].begin(), hands[0].end(),
                    [&](const Card& c) { return MatchesTop(top)(c.face); });
    EXPECT_EQ(r.selected.has_value(), any_valid);
    if (r.selected) EXPECT_TRUE(MatchesTop(top)(r.selected->face));
  }
}

TEST(CardSelection, EmptyActingHandRunsNothing) {
  const std::vector<std::vector<Card>> hands = {{}, CardsOf({"9Y"}, 10)};
  Table table(RandomTape::Explicit({}));
  SelectionResult r = CardSelection(
      {hands, MatchesTop(UnoFace::Number(2, Color::kRed))}, table);
  EXPECT_TRUE(r.none_valid());
  EXPECT_EQ(r.shuffles, 0);
  EXPECT_EQ(r.aux_taken, 0);
  ExpectRestored(hands, r);
}

TEST(CardSelection, SelectedCardIsRevealedLast) {
  const std::vector<std::vector<Card>> hands = {CardsOf({"7R", "4G"}, 1),
                                                CardsOf({"9B"}, 10)};
  Table table(RandomTape::Seeded(8));
  SelectionResult r = CardSelection(
      {hands, MatchesTop(UnoFace::Number(2, Color::kRed))}, table);
  const auto lines = table.transcript.Lines();
  ASSERT_GE(lines.size(), 2u);
  EXPECT_EQ(lines[lines.size() - 1], "STEP sel.end");
  EXPECT_EQ(lines[lines.size() - 2], "REVEAL pile:r1c1 7R");
  // Outside the anonymous step-5 reveal the other acting card never shows.
  bool in_step5 = false;
  for (const std::string& l : lines) {
    if (l.rfind("STEP ", 0) == 0) in_step5 = l == "STEP sel.5";
    if (!in_step5) EXPECT_EQ(l.find("4G"), std::string::npos) << l;
  }
}

TEST(DesignateColor, ForcedTape) {
  Table table(RandomTape::Explicit({{2, 0, 1, 3}}));
  EXPECT_EQ(DesignateColor(table), Color::kGreen);
  EXPECT_EQ(table.transcript.CountShuffles(), 1);
}

TEST(DesignateColor, EachColorOnSixOfTwentyFourTapes) {
  std::map<Color, int> counts;
  for (const Permutation& p : AllPermutations(4)) {
    Table table(RandomTape::Explicit({p}));
    ++counts[DesignateColor(table)];
  }
  for (Color c : kAllColors) EXPECT_EQ(counts[c], 6);
}

TEST(DesignateColor, SeededRunsAreUniform) {
  Table table(RandomTape::Seeded(77));
  std::vector<double> observed(4, 0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    observed[static_cast<int>(DesignateColor(table))] += 1;
  }
  EXPECT_GT(ChiSquaredPValue(observed, std::vector<double>(4, n / 4.0)), 0.01);
}

TEST(PublicChoice, UniformOverOptions) {
  for (int options = 1; options <= 5; ++options) {
    std::map<int, int> counts;
    for (const Permutation& p : AllPermutations(options)) {
      Table table(RandomTape::Explicit({p}));
      ++counts[PublicChoice(options, table)];
    }
    EXPECT_EQ(static_cast<int>(counts.size()), options);
    for (const auto& [v, c] : counts) EXPECT_EQ(c, counts.begin()->second);
  }
  Table table(RandomTape::Seeded(1));
  EXPECT_THROW(PublicChoice(0, table), ContractViolation);
  EXPECT_THROW(PublicChoice(11, table), ContractViolation);
}

TEST(Mutation, NamesRoundTrip) {
  for (Mutation m : AllMutations()) EXPECT_EQ(ParseMutation(MutationName(m)), m);
  EXPECT_THROW(ParseMutation("bogus"), std::invalid_argument);
}

}  // namespace
}  // namespace vplay
