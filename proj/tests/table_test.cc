#include "vplay/table.h"

#include <map>
#include <random>

#include <gtest/gtest.h>

#include "test_util.h"

namespace vplay {
namespace {

using testing::ChiSquaredPValue;

Pile NumberedPile(std::initializer_list<int> numbers) {
  Pile pile;
  for (int n : numbers) {
    pile.push_back(FaceDown(
        Card{static_cast<std::uint32_t>(n), UnoFace::Number(n, Color::kRed)}));
  }
  return pile;
}

std::vector<int> Numbers(const std::vector<Pile>& piles) {
  std::vector<int> out;
  for (const Pile& p : piles) {
    for (const TableCard& c : p) out.push_back(std::get<UnoFace>(c.face()).number);
  }
  return out;
}

TEST(PileScramble, IdentityTapeKeepsOrder) {
  Transcript tr;
  RandomTape tape = RandomTape::Explicit({{0, 1}});
  auto out = PileScramble({NumberedPile({1, 2, 3}), NumberedPile({4, 5, 6})},
                          tape, tr);
  EXPECT_EQ(Numbers(out), (std::vector<int>{1, 2, 3, 4, 5, 6}));
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_EQ(FormatEvent(tr.events()[0]), "SHUFFLE m=2 k=3");
}

TEST(PileScramble, SwapTapeExchangesPiles) {
  Transcript tr;
  RandomTape tape = RandomTape::Explicit({{1, 0}});
  auto out = PileScramble({NumberedPile({1, 2, 3}), NumberedPile({4, 5, 6})},
                          tape, tr);
  EXPECT_EQ(Numbers(out), (std::vector<int>{4, 5, 6, 1, 2, 3}));
}

TEST(PileScramble, SinglePileUnchanged) {
  Transcript tr;
  RandomTape tape = RandomTape::Seeded(3);
  auto out = PileScramble({NumberedPile({1, 2, 3})}, tape, tr);
  EXPECT_EQ(Numbers(out), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(tr.Serialize(), "SHUFFLE m=1 k=3\n");
}

TEST(PileScramble, RejectsUnequalPiles) {
  Transcript tr;
  RandomTape tape = RandomTape::Seeded(3);
  EXPECT_THROW(PileScramble({NumberedPile({1, 2}), NumberedPile({3})}, tape, tr),
               ContractViolation);
  EXPECT_THROW(PileScramble({}, tape, tr), ContractViolation);
}

TEST(PileScramble, SeededStreamIsUniformOverFourPiles) {
  RandomTape tape = RandomTape::Seeded(20240601);
  std::map<Permutation, double> counts;
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[tape.Next(4)] += 1;
  ASSERT_EQ(counts.size(), 24u);
  std::vector<double> observed;
  for (const auto& [perm, c] : counts) observed.push_back(c);
  const std::vector<double> expected(24, n / 24.0);
  EXPECT_GT(ChiSquaredPValue(observed, expected), 0.001);
}

TEST(RandomTape, ExplicitTapeChecksSizeAndLength) {
  RandomTape tape = RandomTape::Explicit({{1, 0}});
  EXPECT_THROW(tape.Next(3), ContractViolation);
  RandomTape empty = RandomTape::Explicit({});
  EXPECT_THROW(empty.Next(2), ContractViolation);
  RandomTape bad = RandomTape::Explicit({{0, 0}});
  EXPECT_THROW(bad.Next(2), ContractViolation);
}

TEST(RandomTape, SameSeedSameStream) {
  RandomTape a = RandomTape::Seeded(99);
  RandomTape b = RandomTape::Seeded(99);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(a.Next(7), b.Next(7));
}

TEST(Commitment, EncodesAlphaBetaOrder) {
  const Commitment zero = EncodeBit(false);
  EXPECT_TRUE(IsAlpha(zero.left.face()));
  EXPECT_TRUE(IsBeta(zero.right.face()));
  EXPECT_FALSE(zero.left.face_up());
  EXPECT_FALSE(zero.right.face_up());
  const Commitment one = EncodeBit(true);
  EXPECT_TRUE(IsBeta(one.left.face()));
  EXPECT_TRUE(IsAlpha(one.right.face()));
  EXPECT_FALSE(Decode(zero));
  EXPECT_TRUE(Decode(one));
}

TEST(Commitment, RejectsMalformedPair) {
  Commitment bad = EncodeBit(false);
  bad.right = bad.left;
  EXPECT_FALSE(IsWellFormed(bad));
  EXPECT_THROW(Decode(bad), ContractViolation);
}

Layout RowWithSevenRedAt(int col) {
  Layout layout(Region::kMain);
  Transcript scratch;
  for (int c = 1; c <= col; ++c) {
    Place(layout, c,
          FaceDown(Card{static_cast<std::uint32_t>(c),
                        UnoFace::Number(c == col ? 7 : 1, Color::kRed)}),
          scratch);
  }
  return layout;
}

TEST(Reveal, TurnsCardUpAndLogsIt) {
  Layout layout = RowWithSevenRedAt(2);
  Transcript tr;
  EXPECT_EQ(Reveal(layout, 1, 2, tr), CardFace(UnoFace::Number(7, Color::kRed)));
  EXPECT_EQ(tr.Serialize(), "REVEAL r1c2 7R\n");
  EXPECT_TRUE(layout.at(1, 2).face_up());
}

TEST(Reveal, FaceUpCardLogsNothingNew) {
  Layout layout = RowWithSevenRedAt(2);
  Transcript tr;
  Reveal(layout, 1, 2, tr);
  EXPECT_EQ(Reveal(layout, 1, 2, tr), CardFace(UnoFace::Number(7, Color::kRed)));
  EXPECT_EQ(tr.size(), 1u);
}

TEST(Reveal, EmptyPositionThrows) {
  Layout layout = RowWithSevenRedAt(2);
  Transcript tr;
  EXPECT_THROW(Reveal(layout, 2, 1, tr), ContractViolation);
  EXPECT_THROW(Reveal(layout, 1, 3, tr), ContractViolation);
}

TEST(TurnDownAll, FlipsOnlyFaceUpCards) {
  Layout layout = RowWithSevenRedAt(3);
  Transcript tr;
  TurnDownAll(layout, tr);
  EXPECT_EQ(tr.size(), 0u);
  Reveal(layout, 1, 1, tr);
  Reveal(layout, 1, 3, tr);
  TurnDownAll(layout, tr);
  EXPECT_EQ(tr.Lines().back(), "TURNDOWN n=2");
  for (int c = 1; c <= 3; ++c) EXPECT_FALSE(layout.at(1, c).face_up());
  for (int c = 1; c <= 3; ++c) Reveal(layout, 1, c, tr);
  TurnDownAll(layout, tr);
  EXPECT_EQ(tr.Lines().back(), "TURNDOWN n=3");
}

TEST(Place, LogsFaceOnlyWhenUp) {
  Layout layout(Region::kLottery);
  Transcript tr;
  Place(layout, 1, FaceUp(Card{1, AuxRole::Theta(2)}), tr);
  Place(layout, 1, FaceDown(Card{2, AuxRole::Alpha()}), tr);
  EXPECT_EQ(tr.Lines(), (std::vector<std::string>{"PLACE lot:r1c1 UP THETA2",
                                                  "PLACE lot:r2c1 DOWN"}));
  EXPECT_THROW(Place(layout, 3, FaceDown(Card{3, AuxRole::Beta()}), tr),
               ContractViolation);
}

// Random table programs never log a face that is down when logged.
TEST(Transcript, NeverShowsFaceDownCards) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Layout layout(Region::kMain);
    Transcript tr;
    RandomTape tape = RandomTape::Seeded(trial);
    std::uint32_t serial = 0;
    const int cols = 1 + rng() % 5;
    const int rows = 1 + rng() % 3;
    for (int r = 0; r < rows; ++r) {
      for (int c = 1; c <= cols; ++c) {
        Card card{serial++, UnoFace::Number(rng() % 10, kAllColors[rng() % 4])};
        Place(layout, c, rng() % 2 ? FaceUp(card) : FaceDown(card), tr);
      }
    }
    std::size_t checked = 0;
    auto check_new = [&] {
      for (; checked < tr.size(); ++checked) {
        const auto& e = tr.events()[checked];
        if (!e.face) continue;
        bool found = false;
        for (const Pile& p : layout.columns()) {
          for (const TableCard& c : p) {
            if (c.card.serial == e.serial) {
              found = true;
              EXPECT_TRUE(c.face_up()) << FormatEvent(e);
            }
          }
        }
        EXPECT_TRUE(found);
      }
    };
    check_new();
    for (int op = 0; op < 30; ++op) {
      switch (rng() % 3) {
        case 0:
          Reveal(layout, 1 + rng() % rows, 1 + rng() % cols, tr);
          break;
        case 1:
          TurnDownAll(layout, tr);
          break;
        case 2:
          ScrambleColumns(layout, tape, tr);
          break;
      }
      check_new();
    }
  }
}

TEST(Transcript, ExplicitTapeRunsAreByteIdentical) {
  auto run = [] {
    Layout layout = RowWithSevenRedAt(4);
    Transcript tr;
    RandomTape tape = RandomTape::Explicit({{3, 1, 0, 2}, {2, 3, 1, 0}});
    ScrambleColumns(layout, tape, tr);
    Reveal(layout, 1, 1, tr);
    TurnDownAll(layout, tr);
    ScrambleColumns(layout, tape, tr);
    Reveal(layout, 1, 2, tr);
    return tr.Serialize();
  };
  EXPECT_EQ(run(), run());
  EXPECT_EQ(run(),
            "SHUFFLE m=4 k=1\nREVEAL r1c1 7R\nTURNDOWN n=1\nSHUFFLE m=4 k=1\n"
            "REVEAL r1c2 1R\n");
}

TEST(AuxSupply, CountsTakesAndReturns) {
  AuxSupply supply;
  Transcript tr;
  auto cards = supply.Take({AuxRole::Alpha(), AuxRole::Beta()}, tr);
  EXPECT_EQ(cards.size(), 2u);
  EXPECT_NE(cards[0].serial, cards[1].serial);
  EXPECT_EQ(supply.outstanding(), 2);
  supply.Return(2, tr);
  EXPECT_EQ(supply.outstanding(), 0);
  EXPECT_EQ(supply.taken(), 2);
  EXPECT_THROW(supply.Return(1, tr), ContractViolation);
  EXPECT_EQ(tr.Lines(), (std::vector<std::string>{"SUPPLY take=2", "SUPPLY return=2"}));
}

}  // namespace
}  // namespace vplay
