#ifndef VPLAY_TESTS_TEST_UTIL_H_
#define VPLAY_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "vplay/deck.h"
#include "vplay/table.h"

namespace vplay::testing {

// All permutations of size n in lexicographic order.
inline std::vector<Permutation> AllPermutations(int n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> all;
  do {
    all.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return all;
}

// Every explicit tape for a fixed sequence of shuffle sizes.
inline void ForEachTape(const std::vector<int>& sizes,
                        const std::function<void(std::vector<Permutation>)>& f) {
  std::vector<std::vector<Permutation>> choices;
  for (int n : sizes) choices.push_back(AllPermutations(n));
  std::vector<std::size_t> idx(sizes.size(), 0);
  for (;;) {
    std::vector<Permutation> tape;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      tape.push_back(choices[i][idx[i]]);
    }
    f(std::move(tape));
    std::size_t d = sizes.size();
    while (d > 0) {
      --d;
      if (++idx[d] < choices[d].size()) break;
      idx[d] = 0;
      if (d == 0) return;
    }
    if (sizes.empty()) return;
  }
}

// Upper-tail p-value of Pearson's statistic against expected counts.
inline double ChiSquaredPValue(const std::vector<double>& observed,
                               const std::vector<double>& expected) {
  double stat = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  if (observed.size() < 2) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Serves `prefix` first, then identity permutations, or random ones from an
// independent generator when `seed` is nonzero.
inline RandomTape PrefixedTape(std::vector<Permutation> prefix,
                               std::uint64_t seed = 0) {
  struct State {
    std::vector<Permutation> prefix;
    std::size_t next = 0;
    std::mt19937_64 rng;
  };
  auto state = std::make_shared<State>(State{std::move(prefix), 0,
                                             std::mt19937_64(seed)});
  const bool random = seed != 0;
  return RandomTape::FromSource([state, random](int n) {
    if (state->next < state->prefix.size()) return state->prefix[state->next++];
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    if (random) std::shuffle(p.begin(), p.end(), state->rng);
    return p;
  });
}

inline Permutation Identity(int n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline std::vector<std::string> SortedTokens(const std::vector<Card>& cards) {
  std::vector<std::string> out;
  for (const Card& c : cards) out.push_back(ToToken(c.face));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Card> CardsOf(const std::vector<std::string>& tokens,
                                 std::uint32_t first_serial) {
  std::vector<Card> cards;
  for (const std::string& t : tokens) {
    cards.push_back({first_serial++, ParseFace(t)});
  }
  return cards;
}

}  // namespace vplay::testing

#endif  // VPLAY_TESTS_TEST_UTIL_H_
