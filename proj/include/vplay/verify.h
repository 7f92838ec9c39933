#ifndef VPLAY_VERIFY_H_
#define VPLAY_VERIFY_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "vplay/deck.h"
#include "vplay/protocols.h"
#include "vplay/table.h"
#include "vplay/uno.h"

namespace vplay {

using Rational = boost::rational<std::int64_t>;
// Outcome label -> exact probability.
using Distribution = std::map<std::string, Rational>;

inline constexpr std::uint64_t kDefaultTapeCeiling = 1'000'000;

class TapeCeilingExceeded : public std::runtime_error {
 public:
  TapeCeilingExceeded(std::uint64_t count, std::uint64_t ceiling);
};

// Every explicit tape for a fixed sequence of shuffle sizes, in odometer
// order (last shuffle varies fastest).
class TapeEnumeration {
 public:
  explicit TapeEnumeration(std::vector<int> sizes);

  // Sizes of the shuffles `run` performs, found by running it once.
  static std::vector<int> Probe(const std::function<void(RandomTape)>& run);

  const std::vector<int>& sizes() const { return sizes_; }
  // Product of the factorials; saturates at UINT64_MAX.
  std::uint64_t count() const;
  void ForEach(const std::function<void(std::vector<Permutation>)>& f) const;

 private:
  std::vector<int> sizes_;
};

// Runs `run` on every tape and weights outcomes by tape count. The run must
// draw the same shuffle sizes on every tape. Throws TapeCeilingExceeded
// before running anything when there are more than `ceiling` tapes.
Distribution ExactDistribution(const std::function<std::string(RandomTape)>& run,
                               std::uint64_t ceiling = kDefaultTapeCeiling);
std::string FormatDistribution(const Distribution& d);

struct CheckReport {
  std::string name;
  bool pass = false;
  double statistic = 0;
  std::optional<double> p_value;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string detail;
};

std::string FormatReport(const CheckReport& r);
// Machine-readable summary of a batch of reports.
std::string ReportsToJson(const std::vector<CheckReport>& reports);
bool AllPass(const std::vector<CheckReport>& reports);

// Seed of run `i` under a suite seed; the same for any job count.
std::uint64_t RunSeed(std::uint64_t seed, std::uint64_t i);
// Calls f(i) for every i in [0, count) spread over `jobs` threads.
void ParallelFor(std::uint64_t count, int jobs,
                 const std::function<void(std::uint64_t)>& f);

struct ChiSquaredResult {
  double statistic = 0;
  double df = 0;
  double p_value = 1;
};

// Pearson goodness of fit; bins with zero expectation must be empty.
ChiSquaredResult GoodnessOfFit(const std::vector<double>& observed,
                               const std::vector<double>& expected);
// Homogeneity of two samples over the union of their labels.
ChiSquaredResult TwoSample(const std::map<std::string, double>& a,
                           const std::map<std::string, double>& b);

// A card-selection problem: hands[0] acts, the last entry is the deck.
struct SelectionInstance {
  std::vector<std::vector<Card>> hands;
  ValidityPredicate is_valid;
  LotteryMode mode = LotteryMode::kModified;
};

// "NONE" or the selected face's token.
std::string OutcomeLabel(const SelectionResult& r);

using TapeMaker = std::function<RandomTape(std::uint64_t seed)>;

// Selects `runs` times and tests the selected faces for uniformity over the
// valid faces in the acting hand (which must be distinct). Passes iff every
// selection is valid and the goodness-of-fit p-value exceeds `significance`.
CheckReport UniformityTest(const std::string& name,
                           const SelectionInstance& instance,
                           std::uint64_t runs, std::uint64_t seed,
                           double significance, Mutation mutation = {},
                           int jobs = 1, const TapeMaker& tapes = {});

// What everyone knows before a selection run.
struct PublicView {
  std::vector<CardFace> undiscarded;
  // Cards per owner, deck last.
  std::vector<int> hand_sizes;
  LotteryMode mode = LotteryMode::kModified;
};

PublicView PublicViewOf(const std::vector<std::vector<Card>>& hands,
                        LotteryMode mode = LotteryMode::kModified);

// Checks one card-selection run recorded in `transcript` from `from` on:
// (a) the first-row reveal shows exactly the undiscarded cards, (b) the
// marker reveal shows each owner's hand size, (c) the return reveal shows it
// for everyone but the actor, (d) shuffle count, (e) aux cards taken.
std::vector<CheckReport> StructuralChecks(const Transcript& transcript,
                                          std::size_t from,
                                          const PublicView& view);

// Two hidden assignments with the same public view: equal hand sizes, equal
// undiscarded multiset, equal valid multiset in the acting hand.
class WorldPair {
 public:
  // Throws std::invalid_argument naming the first condition that fails.
  WorldPair(std::vector<std::vector<Card>> a, std::vector<std::vector<Card>> b,
            ValidityPredicate is_valid);

  const std::vector<std::vector<Card>>& a() const { return a_; }
  const std::vector<std::vector<Card>>& b() const { return b_; }
  const ValidityPredicate& is_valid() const { return is_valid_; }

 private:
  std::vector<std::vector<Card>> a_;
  std::vector<std::vector<Card>> b_;
  ValidityPredicate is_valid_;
};

// Exact transcript distributions of both worlds must be identical.
CheckReport LeakageAuditExact(const std::string& name, const WorldPair& pair,
                              Mutation mutation = {},
                              std::uint64_t ceiling = kDefaultTapeCeiling);

// Two-sample chi-squared tests at p > 0.001 on transcript projections: a
// 64-bucket transcript hash, the pairing of the first revealed face with the
// first revealed marker, and the selected face.
std::vector<CheckReport> LeakageAuditMonteCarlo(const std::string& name,
                                                const WorldPair& pair,
                                                std::uint64_t runs,
                                                std::uint64_t seed,
                                                Mutation mutation = {},
                                                int jobs = 1);

// Every play in the game satisfied the rules against the public state
// rebuilt from the event log.
bool PlaysLegal(const UnoGame& game, std::string* why = nullptr);
// No hidden face appears in the transcript outside the anonymous first-row
// reveal of a selection, its output, or a public play/flip.
bool NoHiddenFaces(const Transcript& transcript, std::uint32_t hidden_serials,
                   std::string* why = nullptr);

struct VerifyConfig {
  std::uint64_t seed = 20240601;
  Mutation mutation = Mutation::kNone;
  bool oracle_only = false;
  // Overrides the default N of the statistical suites.
  std::optional<std::uint64_t> runs;
  int jobs = 1;
  int uno_games = 1000;
};

std::vector<CheckReport> DeckSuite();
std::vector<CheckReport> AndSuite();
std::vector<CheckReport> LotterySuite(const VerifyConfig& config);
std::vector<CheckReport> ResourceSuite(const VerifyConfig& config);
std::vector<CheckReport> SelectionSuite(const VerifyConfig& config);
std::vector<CheckReport> UniformitySuite(const VerifyConfig& config);
std::vector<CheckReport> LeakageSuite(const VerifyConfig& config);
std::vector<CheckReport> StructuralSuite(const VerifyConfig& config);
// Runs every protocol mutation against the structural, selection and leakage
// checks; each report passes iff its mutation is caught.
std::vector<CheckReport> MutationSuite(const VerifyConfig& config);
std::vector<CheckReport> GameSuite(const VerifyConfig& config);

// All suites, or only the exact ones with `oracle_only`.
std::vector<CheckReport> RunVerifySuites(const VerifyConfig& config);

}  // namespace vplay

#endif  // VPLAY_VERIFY_H_
