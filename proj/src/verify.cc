#include "vplay/verify.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <utility>

#include <boost/math/distributions/chi_squared.hpp>

#include "json.hpp"
#include "vplay/variants.h"

namespace vplay {

// ------------------------------------------------------------ oracle core

TapeCeilingExceeded::TapeCeilingExceeded(std::uint64_t count,
                                         std::uint64_t ceiling)
    : std::runtime_error("tape count " + std::to_string(count) +
                         " exceeds ceiling " + std::to_string(ceiling)) {}

TapeEnumeration::TapeEnumeration(std::vector<int> sizes)
    : sizes_(std::move(sizes)) {
  for (int n : sizes_) {
    if (n < 1) throw std::invalid_argument("shuffle size must be positive");
  }
}

std::vector<int> TapeEnumeration::Probe(
    const std::function<void(RandomTape)>& run) {
  auto sizes = std::make_shared<std::vector<int>>();
  run(RandomTape::FromSource([sizes](int n) {
    sizes->push_back(n);
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
  }));
  return *sizes;
}

std::uint64_t TapeEnumeration::count() const {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  for (int n : sizes_) {
    for (int f = 2; f <= n; ++f) {
      if (total > kMax / static_cast<std::uint64_t>(f)) return kMax;
      total *= static_cast<std::uint64_t>(f);
    }
  }
  return total;
}

void TapeEnumeration::ForEach(
    const std::function<void(std::vector<Permutation>)>& f) const {
  std::vector<Permutation> tape;
  for (int n : sizes_) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    tape.push_back(std::move(p));
  }
  for (;;) {
    f(tape);
    std::size_t d = tape.size();
    for (;;) {
      if (d == 0) return;
      --d;
      // next_permutation wraps to the identity when it returns false.
      if (std::next_permutation(tape[d].begin(), tape[d].end())) break;
    }
  }
}

Distribution ExactDistribution(const std::function<std::string(RandomTape)>& run,
                               std::uint64_t ceiling) {
  const TapeEnumeration tapes(
      TapeEnumeration::Probe([&](RandomTape t) { run(std::move(t)); }));
  const std::uint64_t total = tapes.count();
  if (total > ceiling) throw TapeCeilingExceeded(total, ceiling);

  std::map<std::string, std::int64_t> counts;
  tapes.ForEach([&](std::vector<Permutation> perms) {
    auto state = std::make_shared<std::pair<std::vector<Permutation>,
                                            std::size_t>>(std::move(perms), 0);
    std::string outcome = run(RandomTape::FromSource([state](int n) {
      auto& [list, next] = *state;
      if (next >= list.size() || static_cast<int>(list[next].size()) != n) {
        throw std::logic_error("shuffle sizes differ between tapes");
      }
      return list[next++];
    }));
    if (state->second != state->first.size()) {
      throw std::logic_error("shuffle sizes differ between tapes");
    }
    ++counts[std::move(outcome)];
  });

  Distribution d;
  for (const auto& [label, n] : counts) {
    d[label] = Rational(n, static_cast<std::int64_t>(total));
  }
  return d;
}

std::string FormatDistribution(const Distribution& d) {
  std::ostringstream out;
  bool first = true;
  out << "{";
  for (const auto& [label, p] : d) {
    if (!first) out << ", ";
    first = false;
    out << label << ": " << p.numerator();
    if (p.denominator() != 1) out << "/" << p.denominator();
  }
  out << "}";
  return out.str();
}

// ---------------------------------------------------------------- reports

std::string FormatReport(const CheckReport& r) {
  std::ostringstream out;
  out << (r.pass ? "PASS " : "FAIL ") << r.name;
  if (r.p_value) {
    out << std::setprecision(4) << "  stat=" << r.statistic
        << " p=" << *r.p_value;
  }
  if (r.n > 0) out << "  n=" << r.n;
  if (r.seed != 0) out << " seed=" << r.seed;
  if (!r.detail.empty()) out << "  " << r.detail;
  return out.str();
}

std::string ReportsToJson(const std::vector<CheckReport>& reports) {
  nlohmann::json list = nlohmann::json::array();
  for (const CheckReport& r : reports) {
    nlohmann::json j;
    j["name"] = r.name;
    j["pass"] = r.pass;
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json();
    j["n"] = r.n;
    j["seed"] = r.seed;
    j["detail"] = r.detail;
    list.push_back(std::move(j));
  }
  nlohmann::json doc;
  doc["pass"] = AllPass(reports);
  doc["reports"] = std::move(list);
  return doc.dump(2);
}

bool AllPass(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const CheckReport& r) { return r.pass; });
}

std::uint64_t RunSeed(std::uint64_t seed, std::uint64_t i) {
  // SplitMix64 finalizer over the suite seed and run index.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void ParallelFor(std::uint64_t count, int jobs,
                 const std::function<void(std::uint64_t)>& f) {
  if (jobs <= 1 || count <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next = count;
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  const auto n = std::min<std::uint64_t>(static_cast<std::uint64_t>(jobs), count);
  for (std::uint64_t t = 0; t < n; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

// ------------------------------------------------------------- statistics

namespace {

double UpperTail(double statistic, double df) {
  if (std::isinf(statistic)) return 0.0;
  if (df < 1) return 1.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace

ChiSquaredResult GoodnessOfFit(const std::vector<double>& observed,
                               const std::vector<double>& expected) {
  if (observed.size() != expected.size()) {
    throw std::invalid_argument("observed and expected differ in length");
  }
  ChiSquaredResult r;
  int bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0) {
      if (observed[i] > 0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    ++bins;
    const double d = observed[i] - expected[i];
    r.statistic += d * d / expected[i];
  }
  r.df = std::max(bins - 1, 0);
  r.p_value = UpperTail(r.statistic, r.df);
  return r;
}

ChiSquaredResult TwoSample(const std::map<std::string, double>& a,
                           const std::map<std::string, double>& b) {
  double na = 0;
  double nb = 0;
  for (const auto& [k, v] : a) na += v;
  for (const auto& [k, v] : b) nb += v;
  std::map<std::string, std::pair<double, double>> table;
  for (const auto& [k, v] : a) table[k].first += v;
  for (const auto& [k, v] : b) table[k].second += v;

  ChiSquaredResult r;
  const double n = na + nb;
  int bins = 0;
  for (const auto& [k, cell] : table) {
    const double row = cell.first + cell.second;
    if (row <= 0) continue;
    ++bins;
    const double ea = row * na / n;
    const double eb = row * nb / n;
    r.statistic += (cell.first - ea) * (cell.first - ea) / ea +
                   (cell.second - eb) * (cell.second - eb) / eb;
  }
  r.df = std::max(bins - 1, 0);
  r.p_value = UpperTail(r.statistic, r.df);
  return r;
}

// ------------------------------------------------------------- uniformity

std::string OutcomeLabel(const SelectionResult& r) {
  return r.selected ? ToToken(r.selected->face) : "NONE";
}

CheckReport UniformityTest(const std::string& name,
                           const SelectionInstance& instance,
                           std::uint64_t runs, std::uint64_t seed,
                           double significance, Mutation mutation, int jobs,
                           const TapeMaker& tapes) {
  if (runs < 1000) throw std::invalid_argument("uniformity needs N >= 1000");
  if (instance.hands.size() < 2 || instance.hands[0].empty()) {
    throw std::invalid_argument("uniformity needs a nonempty acting hand");
  }
  std::vector<std::string> targets;
  for (const Card& c : instance.hands[0]) {
    if (instance.is_valid(c.face)) targets.push_back(ToToken(c.face));
  }
  if (targets.empty()) {
    if (instance.mode == LotteryMode::kOriginal) {
      for (const Card& c : instance.hands[0]) targets.push_back(ToToken(c.face));
    } else {
      targets.push_back("NONE");
    }
  }
  std::vector<std::string> sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("acting hand faces must be distinct");
  }

  std::vector<std::string> outcomes(runs);
  ParallelFor(runs, jobs, [&](std::uint64_t i) {
    const std::uint64_t s = RunSeed(seed, i);
    Table table(tapes ? tapes(s) : RandomTape::Seeded(s));
    SelectionOptions options;
    options.mode = instance.mode;
    options.mutation = mutation;
    outcomes[i] = OutcomeLabel(
        CardSelection({instance.hands, instance.is_valid}, table, options));
  });

  std::map<std::string, double> freq;
  for (const std::string& o : outcomes) ++freq[o];
  std::vector<double> observed;
  std::vector<double> expected;
  double stray = 0;
  for (const std::string& t : targets) {
    observed.push_back(freq.count(t) ? freq[t] : 0.0);
    expected.push_back(static_cast<double>(runs) / targets.size());
  }
  for (const auto& [label, n] : freq) {
    if (std::find(targets.begin(), targets.end(), label) == targets.end()) {
      stray += n;
    }
  }

  CheckReport r;
  r.name = name;
  r.n = runs;
  r.seed = seed;
  std::ostringstream detail;
  detail << "v=" << targets.size();
  if (stray > 0) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    detail << " selected outside the valid set " << stray << " times";
  } else if (targets.size() == 1) {
    // Single target: the frequency must be exactly 1.
    r.statistic = 0;
    r.p_value = 1.0;
    detail << " freq(" << targets[0] << ")=1";
  } else {
    const ChiSquaredResult chi = GoodnessOfFit(observed, expected);
    r.statistic = chi.statistic;
    r.p_value = chi.p_value;
  }
  r.pass = stray == 0 && *r.p_value > significance;
  r.detail = detail.str();
  return r;
}

// ------------------------------------------------------------- structural

PublicView PublicViewOf(const std::vector<std::vector<Card>>& hands,
                        LotteryMode mode) {
  PublicView view;
  view.mode = mode;
  for (const auto& hand : hands) {
    view.hand_sizes.push_back(static_cast<int>(hand.size()));
    for (const Card& c : hand) view.undiscarded.push_back(c.face);
  }
  return view;
}

namespace {

std::vector<std::string> Tokens(const std::vector<CardFace>& faces) {
  std::vector<std::string> out;
  for (const CardFace& f : faces) out.push_back(ToToken(f));
  std::sort(out.begin(), out.end());
  return out;
}

std::string JoinCounts(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

// Events of one selection run with the step each belongs to.
struct SelectionSlice {
  std::vector<std::pair<std::string, const ObservationEvent*>> events;
  bool found = false;
};

SelectionSlice SliceRun(const Transcript& transcript, std::size_t from) {
  SelectionSlice slice;
  const auto& events = transcript.events();
  std::string step;
  for (std::size_t i = from; i < events.size(); ++i) {
    const ObservationEvent& e = events[i];
    if (e.kind == EventKind::kStep) {
      if (e.text == "sel.begin") slice.found = true;
      step = e.text;
      if (slice.found && step == "sel.end") break;
      continue;
    }
    if (slice.found) slice.events.emplace_back(step, &e);
  }
  return slice;
}

std::vector<int> ThetaCounts(const SelectionSlice& slice,
                             const std::string& step, int owners) {
  std::vector<int> counts(owners, 0);
  for (const auto& [s, e] : slice.events) {
    if (s != step || e->kind != EventKind::kReveal || !e->face) continue;
    const int t = ThetaIndex(*e->face);
    if (t >= 1 && t <= owners) {
      ++counts[t - 1];
    } else if (t > owners) {
      counts.push_back(1);  // out-of-range owner never matches
    }
  }
  return counts;
}

}  // namespace

std::vector<CheckReport> StructuralChecks(const Transcript& transcript,
                                          std::size_t from,
                                          const PublicView& view) {
  const SelectionSlice slice = SliceRun(transcript, from);
  std::vector<CheckReport> out(5);
  const char* names[] = {"structural.a", "structural.b", "structural.c",
                         "structural.d", "structural.e"};
  for (int i = 0; i < 5; ++i) out[i].name = names[i];
  if (!slice.found) {
    for (CheckReport& r : out) r.detail = "no selection run in transcript";
    return out;
  }
  const int owners = static_cast<int>(view.hand_sizes.size());
  const int k = std::accumulate(view.hand_sizes.begin(), view.hand_sizes.end(), 0);
  const int k1 = view.hand_sizes.empty() ? 0 : view.hand_sizes[0];

  // (a) the first-row reveal is the undiscarded multiset.
  {
    std::vector<CardFace> shown;
    for (const auto& [s, e] : slice.events) {
      if (s == "sel.5" && e->kind == EventKind::kReveal && e->face) {
        shown.push_back(*e->face);
      }
    }
    const bool ok = Tokens(shown) == Tokens(view.undiscarded);
    out[0].pass = ok;
    out[0].detail = "sel.5 revealed " + std::to_string(shown.size()) +
                    " cards, expected " +
                    std::to_string(view.undiscarded.size()) +
                    (ok ? "" : " (multiset differs)");
  }
  // (b) marker counts equal hand sizes.
  {
    const std::vector<int> counts = ThetaCounts(slice, "sel.9", owners);
    out[1].pass = counts == view.hand_sizes;
    out[1].detail = "sel.9 markers per owner " + JoinCounts(counts) +
                    ", hand sizes " + JoinCounts(view.hand_sizes);
  }
  // (c) return markers equal hand sizes for every owner but the actor.
  {
    const std::vector<int> counts = ThetaCounts(slice, "sel.14", owners);
    std::vector<int> want = view.hand_sizes;
    if (!want.empty()) want[0] = 0;
    out[2].pass = counts == want;
    out[2].detail = "sel.14 markers per owner " + JoinCounts(counts) +
                    ", expected " + JoinCounts(want);
  }
  // (d) shuffle count.
  {
    int shuffles = 0;
    for (const auto& [s, e] : slice.events) {
      if (e->kind == EventKind::kShuffle) ++shuffles;
    }
    int want = k1 + 5;
    if (k == k1) --want;  // nothing left to return, so no return scramble
    if (view.mode == LotteryMode::kOriginal) --want;
    out[3].pass = shuffles == want;
    out[3].statistic = shuffles;
    out[3].detail = "shuffles " + std::to_string(shuffles) + ", expected " +
                    std::to_string(want) + " (steps sel.4, sel.8, lottery, sel.13)";
  }
  // (e) aux cards taken and all returned.
  {
    int taken = 0;
    int returned = 0;
    for (const auto& [s, e] : slice.events) {
      if (e->kind != EventKind::kSupply) continue;
      if (e->a >= 0) {
        taken += e->a;
      } else {
        returned -= e->a;
      }
    }
    const int want = 3 * k + 4;
    out[4].pass = taken == want && returned == taken;
    out[4].statistic = taken;
    out[4].detail = "aux taken " + std::to_string(taken) + ", returned " +
                    std::to_string(returned) + ", expected " +
                    std::to_string(want) + " (steps sel.2, sel.6, lottery)";
  }
  return out;
}

// ---------------------------------------------------------------- leakage

namespace {

std::vector<std::string> AllTokens(const std::vector<std::vector<Card>>& hands) {
  std::vector<std::string> out;
  for (const auto& h : hands) {
    for (const Card& c : h) out.push_back(ToToken(c.face));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> ValidTokens(const std::vector<Card>& hand,
                                     const ValidityPredicate& is_valid) {
  std::vector<std::string> out;
  for (const Card& c : hand) {
    if (is_valid(c.face)) out.push_back(ToToken(c.face));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Two FNV-1a passes with different offsets; 128 bits as hex.
struct Digest {
  std::uint64_t a = 0xcbf29ce484222325ull;
  std::uint64_t b = 0x84222325cbf29ce4ull;

  void Add(std::string_view s) {
    for (unsigned char c : s) {
      a = (a ^ c) * 0x100000001b3ull;
      b = (b ^ c) * 0x100000001b3ull;
      b ^= b >> 29;
    }
  }
  std::string Hex() const {
    std::ostringstream out;
    out << std::hex << std::setfill('0') << std::setw(16) << a << std::setw(16)
        << b;
    return out.str();
  }
};

Digest DigestOf(const Transcript& transcript) {
  Digest d;
  for (const ObservationEvent& e : transcript.events()) {
    d.Add(FormatEvent(e));
    d.Add("\n");
  }
  return d;
}

SelectionResult RunSelection(const std::vector<std::vector<Card>>& hands,
                             const ValidityPredicate& is_valid, Table& table,
                             Mutation mutation,
                             LotteryMode mode = LotteryMode::kModified) {
  SelectionOptions options;
  options.mode = mode;
  options.mutation = mutation;
  return CardSelection({hands, is_valid}, table, options);
}

}  // namespace

WorldPair::WorldPair(std::vector<std::vector<Card>> a,
                     std::vector<std::vector<Card>> b,
                     ValidityPredicate is_valid)
    : a_(std::move(a)), b_(std::move(b)), is_valid_(std::move(is_valid)) {
  if (!is_valid_) throw std::invalid_argument("missing validity predicate");
  if (a_.size() != b_.size() || a_.size() < 2) {
    throw std::invalid_argument("worlds differ in number of owners");
  }
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (a_[i].size() != b_[i].size()) {
      throw std::invalid_argument("worlds differ in hand sizes");
    }
  }
  if (AllTokens(a_) != AllTokens(b_)) {
    throw std::invalid_argument("worlds differ in undiscarded cards");
  }
  if (ValidTokens(a_[0], is_valid_) != ValidTokens(b_[0], is_valid_)) {
    throw std::invalid_argument("worlds differ in the actor's valid cards");
  }
}

CheckReport LeakageAuditExact(const std::string& name, const WorldPair& pair,
                              Mutation mutation, std::uint64_t ceiling) {
  auto world = [&](const std::vector<std::vector<Card>>& hands) {
    return ExactDistribution(
        [&](RandomTape tape) {
          Table table(std::move(tape));
          RunSelection(hands, pair.is_valid(), table, mutation);
          return DigestOf(table.transcript).Hex();
        },
        ceiling);
  };
  const Distribution da = world(pair.a());
  const Distribution db = world(pair.b());
  CheckReport r;
  r.name = name;
  r.pass = da == db;
  r.n = TapeEnumeration(TapeEnumeration::Probe([&](RandomTape t) {
          Table table(std::move(t));
          RunSelection(pair.a(), pair.is_valid(), table, mutation);
        })).count();
  std::ostringstream detail;
  detail << "distinct transcripts " << da.size() << " vs " << db.size();
  if (!r.pass) {
    std::size_t differing = 0;
    for (const auto& [label, p] : da) {
      auto it = db.find(label);
      if (it == db.end() || it->second != p) ++differing;
    }
    detail << ", " << differing << " differ in probability";
  }
  r.detail = detail.str();
  return r;
}

std::vector<CheckReport> LeakageAuditMonteCarlo(const std::string& name,
                                                const WorldPair& pair,
                                                std::uint64_t runs,
                                                std::uint64_t seed,
                                                Mutation mutation, int jobs) {
  constexpr int kProjections = 3;
  const char* suffix[kProjections] = {".transcript-hash", ".face-marker",
                                      ".output"};
  struct Sample {
    std::string hash;
    std::string linkage;
    std::string output;
  };
  auto sample = [&](const std::vector<std::vector<Card>>& hands,
                    std::uint64_t world_seed) {
    std::vector<Sample> samples(runs);
    ParallelFor(runs, jobs, [&](std::uint64_t i) {
      Table table(RandomTape::Seeded(RunSeed(world_seed, i)));
      const SelectionResult result =
          RunSelection(hands, pair.is_valid(), table, mutation);
      Sample& s = samples[i];
      s.hash = std::to_string(DigestOf(table.transcript).a % 64);
      s.output = OutcomeLabel(result);
      std::string step;
      std::string face;
      std::string marker;
      for (const ObservationEvent& e : table.transcript.events()) {
        if (e.kind == EventKind::kStep) step = e.text;
        if (e.kind != EventKind::kReveal || !e.face || e.pos.col != 1) continue;
        if (step == "sel.5" && face.empty()) face = ToToken(*e.face);
        if (step == "sel.9" && marker.empty()) marker = ToToken(*e.face);
      }
      s.linkage = face + "/" + marker;
    });
    std::vector<std::map<std::string, double>> freq(kProjections);
    for (const Sample& s : samples) {
      ++freq[0][s.hash];
      ++freq[1][s.linkage];
      ++freq[2][s.output];
    }
    return freq;
  };
  const auto fa = sample(pair.a(), RunSeed(seed, 0));
  const auto fb = sample(pair.b(), RunSeed(seed, 1));

  std::vector<CheckReport> reports;
  for (int p = 0; p < kProjections; ++p) {
    const ChiSquaredResult chi = TwoSample(fa[p], fb[p]);
    CheckReport r;
    r.name = name + suffix[p];
    r.statistic = chi.statistic;
    r.p_value = chi.p_value;
    r.pass = chi.p_value > 0.001;
    r.n = runs;
    r.seed = seed;
    r.detail = "df=" + std::to_string(static_cast<int>(chi.df));
    reports.push_back(std::move(r));
  }
  return reports;
}

// ------------------------------------------------------------ game checks

bool PlaysLegal(const UnoGame& game, std::string* why) {
  std::optional<MatchState> m;
  for (const GameEvent& e : game.events()) {
    switch (e.kind) {
      case GameEventKind::kFlip:
        m = MatchState{*e.face, std::nullopt};
        break;
      case GameEventKind::kPlay:
        if (!m || !UnoValid(*e.face, *m)) {
          if (why) {
            *why = "illegal play " + ToToken(*e.face) + " by seat " +
                   std::to_string(e.seat + 1);
          }
          return false;
        }
        m = MatchState{*e.face, std::nullopt};
        break;
      case GameEventKind::kColor:
        if (m) m->designated_color = e.color;
        break;
      default:
        break;
    }
  }
  return true;
}

bool NoHiddenFaces(const Transcript& transcript, std::uint32_t hidden_serials,
                   std::string* why) {
  std::string step;
  for (const ObservationEvent& e : transcript.events()) {
    if (e.kind == EventKind::kStep) step = e.text;
    if (!e.face || e.serial >= hidden_serials) continue;
    if (e.kind == EventKind::kGame) continue;
    const bool anonymous_row = e.kind == EventKind::kReveal && step == "sel.5" &&
                               e.pos.region == Region::kMain && e.pos.row == 1;
    const bool output = e.kind == EventKind::kReveal && step == "sel.out" &&
                        e.pos.region == Region::kPile;
    if (!anonymous_row && !output) {
      if (why) *why = step + ": " + FormatEvent(e);
      return false;
    }
  }
  return true;
}

// ----------------------------------------------------------------- suites

namespace {

std::vector<std::vector<Card>> Hands(
    const std::vector<std::vector<std::string>>& tokens) {
  std::vector<std::vector<Card>> hands;
  std::uint32_t serial = 0;
  for (const auto& hand : tokens) {
    hands.emplace_back();
    for (const std::string& t : hand) hands.back().push_back({serial++, ParseFace(t)});
  }
  return hands;
}

bool IsRed(const CardFace& face) {
  const auto* u = std::get_if<UnoFace>(&face);
  return u && u->color == Color::kRed;
}

bool RedOrSeven(const CardFace& face) {
  const auto* u = std::get_if<UnoFace>(&face);
  return u && (u->color == Color::kRed ||
               (u->kind == UnoKind::kNumber && u->number == 7));
}

CheckReport Report(std::string name, bool pass, std::string detail,
                   std::uint64_t n = 0, std::uint64_t seed = 0) {
  CheckReport r;
  r.name = std::move(name);
  r.pass = pass;
  r.detail = std::move(detail);
  r.n = n;
  r.seed = seed;
  return r;
}

std::uint64_t Runs(const VerifyConfig& config, std::uint64_t fallback) {
  return config.runs.value_or(fallback);
}

Distribution Uniform(const std::vector<std::string>& labels) {
  Distribution d;
  for (const std::string& l : labels) {
    d[l] += Rational(1, static_cast<std::int64_t>(labels.size()));
  }
  return d;
}

bool SumsToOne(const Distribution& d) {
  Rational total = 0;
  for (const auto& [label, p] : d) total += p;
  return total == Rational(1);
}

LotteryInput MakeLottery(const std::vector<bool>& validity, LotteryMode mode) {
  LotteryInput in;
  in.mode = mode;
  for (std::size_t i = 0; i < validity.size(); ++i) {
    const auto s = static_cast<std::uint32_t>(i);
    in.cards.push_back(
        FaceDown(Card{s, UnoFace::Number(static_cast<int>(i) + 1, Color::kBlue)}));
    in.validity.push_back(EncodeBit(validity[i], Card{100 + 2 * s, AuxRole::Alpha()},
                                    Card{101 + 2 * s, AuxRole::Beta()}));
  }
  return in;
}

std::string LotteryLabel(const LotteryOutcome& o) {
  return o.selected ? ToToken(o.selected->face()) : "NONE";
}

std::string BitString(const std::vector<bool>& bits) {
  std::string s;
  for (bool b : bits) s += b ? '1' : '0';
  return s;
}

double TotalVariation(const std::map<std::string, double>& freq, double n,
                      const Distribution& exact) {
  std::map<std::string, double> all;
  for (const auto& [l, c] : freq) all[l] += c / n;
  for (const auto& [l, p] : exact) {
    all[l] -= boost::rational_cast<double>(p);
  }
  double tv = 0;
  for (const auto& [l, d] : all) tv += std::abs(d);
  return tv / 2;
}

// Serial multiset of every owner, for restoration checks.
std::vector<std::vector<std::uint32_t>> Serials(
    const std::vector<std::vector<Card>>& hands) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& h : hands) {
    out.emplace_back();
    for (const Card& c : h) out.back().push_back(c.serial);
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

struct ExhaustiveSelection {
  CheckReport report;
  Distribution distribution;
};

// Exact run of one selection instance over every tape, checking each tape's
// result: valid pick, NoneValid iff nothing valid, hands restored.
ExhaustiveSelection ExhaustiveSelectionCheck(
    const std::string& name, const std::vector<std::vector<Card>>& hands,
    const ValidityPredicate& is_valid, Mutation mutation,
    LotteryMode mode = LotteryMode::kModified) {
  const auto before = Serials(hands);
  std::vector<std::string> valid;
  for (const Card& c : hands[0]) {
    if (is_valid(c.face)) valid.push_back(ToToken(c.face));
  }
  std::uint64_t bad = 0;
  std::string first_bad;
  std::uint64_t tapes = 0;
  auto note = [&](std::string why) {
    if (bad++ == 0) first_bad = std::move(why);
  };
  const Distribution d = ExactDistribution([&](RandomTape tape) -> std::string {
    ++tapes;
    Table table(std::move(tape));
    SelectionResult r = RunSelection(hands, is_valid, table, mutation, mode);
    if (r.selected && !is_valid(r.selected->face) && !valid.empty()) {
      note("selected invalid " + ToToken(r.selected->face));
    }
    if (mode == LotteryMode::kModified && r.none_valid() != valid.empty()) {
      note("NoneValid does not match the valid set");
    }
    auto after = r.hands;
    if (r.selected) after[0].push_back(*r.selected);
    if (Serials(after) != before) note("hands not restored");
    return OutcomeLabel(r);
  });
  // The probe run is not part of the enumeration.
  --tapes;

  std::vector<std::string> want_labels = valid;
  if (want_labels.empty()) {
    if (mode == LotteryMode::kOriginal) {
      for (const Card& c : hands[0]) want_labels.push_back(ToToken(c.face));
    } else {
      want_labels.push_back("NONE");
    }
  }
  const Distribution want = Uniform(want_labels);
  const bool uniform = d == want;
  std::string detail = FormatDistribution(d);
  if (bad > 0) detail += "; " + std::to_string(bad) + " bad tapes: " + first_bad;
  if (!uniform) detail += "; expected " + FormatDistribution(want);
  return {Report(name, bad == 0 && uniform && SumsToOne(d), detail, tapes), d};
}

// Actor with `v` valid distinct faces against a 5G top, two opponents and
// the rest of one UNO deck.
SelectionInstance GameScaleHand(int v) {
  const std::vector<std::string> valid = {"3G", "7G", "5Y", "+G"};
  const std::vector<std::string> invalid = {"1R", "2Y", "9B", "SR",
                                            "RB", "4Y", "8B"};
  std::vector<std::string> actor(valid.begin(), valid.begin() + v);
  for (int i = 0; static_cast<int>(actor.size()) < 7; ++i) actor.push_back(invalid[i]);

  std::vector<CardFace> pool = BuildUnoDeck();
  auto take = [&](const std::string& token) {
    const CardFace f = ParseFace(token);
    auto it = std::find(pool.begin(), pool.end(), f);
    pool.erase(it);
  };
  take("5G");  // top of the discard pile
  for (const std::string& t : actor) take(t);

  SelectionInstance inst;
  std::uint32_t serial = 0;
  inst.hands.resize(4);
  for (const std::string& t : actor) inst.hands[0].push_back({serial++, ParseFace(t)});
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const std::size_t owner = i < 7 ? 1 : i < 14 ? 2 : 3;
    inst.hands[owner].push_back({serial++, pool[i]});
  }
  const MatchState top{UnoFace::Number(5, Color::kGreen), std::nullopt};
  inst.is_valid = [top](const CardFace& f) {
    const auto* u = std::get_if<UnoFace>(&f);
    return u && UnoValid(*u, top);
  };
  return inst;
}

struct Family {
  std::string name;
  WorldPair pair;
};

std::vector<Family> TinyFamilies() {
  std::vector<Family> out;
  out.push_back({"leakage.hand-deck-swap",
                 WorldPair(Hands({{"7R"}, {"5B"}, {"9Y", "3G"}}),
                           Hands({{"7R"}, {"9Y"}, {"5B", "3G"}}), RedOrSeven)});
  out.push_back({"leakage.actor-invalid-swap",
                 WorldPair(Hands({{"7R", "4G"}, {"5B", "3Y"}}),
                           Hands({{"7R", "5B"}, {"4G", "3Y"}}), RedOrSeven)});
  return out;
}

std::vector<Family> LargeFamilies() {
  std::vector<Family> out;
  out.push_back(
      {"leakage.hand-deck-swap.mc",
       WorldPair(Hands({{"7R", "2R", "9B"}, {"5B", "3Y", "1G"},
                        {"9Y", "3G", "6B", "8Y"}}),
                 Hands({{"7R", "2R", "9B"}, {"9Y", "3Y", "1G"},
                        {"5B", "3G", "6B", "8Y"}}),
                 RedOrSeven)});
  out.push_back(
      {"leakage.actor-invalid-swap.mc",
       WorldPair(Hands({{"7R", "2R", "4G", "6B"}, {"1Y", "3Y", "1G"},
                        {"5B", "3G", "9Y"}}),
                 Hands({{"7R", "2R", "5B", "6B"}, {"1Y", "3Y", "1G"},
                        {"4G", "3G", "9Y"}}),
                 RedOrSeven)});
  return out;
}

struct StructuralCase {
  std::string name;
  std::vector<std::vector<Card>> hands;
  ValidityPredicate is_valid;
  LotteryMode mode = LotteryMode::kModified;
};

std::vector<StructuralCase> StructuralCases() {
  return {
      {"one-in-hand", Hands({{"7R"}, {"5B"}, {"9Y", "3G"}}), RedOrSeven},
      {"three-owners",
       Hands({{"7R", "2R", "9B"}, {"5B", "3Y", "1G"}, {"9Y", "3G", "6B", "8Y"}}),
       RedOrSeven},
      {"none-valid", Hands({{"4G", "9B"}, {"5B"}, {"1R"}}), IsRed},
      {"all-in-hand", Hands({{"7R", "4G", "2Y"}, {}}), RedOrSeven},
      {"original-mode", Hands({{"4G", "9B"}, {"5B"}, {"1R", "2R"}}), IsRed,
       LotteryMode::kOriginal},
  };
}

// Structural checks of every case under `mutation`, one report per check.
std::vector<CheckReport> RunStructural(Mutation mutation, std::uint64_t seed) {
  std::vector<CheckReport> merged(5);
  bool first = true;
  std::uint64_t i = 0;
  for (const StructuralCase& c : StructuralCases()) {
    Table table(RandomTape::Seeded(RunSeed(seed, i++)));
    RunSelection(c.hands, c.is_valid, table, mutation, c.mode);
    const auto reports =
        StructuralChecks(table.transcript, 0, PublicViewOf(c.hands, c.mode));
    for (std::size_t j = 0; j < reports.size(); ++j) {
      if (first) {
        merged[j] = reports[j];
        merged[j].pass = true;
        merged[j].detail.clear();
        merged[j].statistic = 0;
      }
      ++merged[j].n;
      if (!reports[j].pass && merged[j].pass) {
        merged[j].pass = false;
        merged[j].detail = c.name + ": " + reports[j].detail;
      }
    }
    first = false;
  }
  for (CheckReport& r : merged) {
    r.seed = seed;
    if (r.pass) r.detail = "all cases";
  }
  return merged;
}

}  // namespace

std::vector<CheckReport> DeckSuite() {
  const std::vector<CardFace> deck = BuildUnoDeck();
  std::map<std::string, int> counts;
  for (const CardFace& f : deck) ++counts[ToToken(f)];
  // Composition rebuilt from the rules: per color one 0, two each of 1-9,
  // Skip, Reverse, DrawTwo; four each of Wild and WildDrawFour.
  std::map<std::string, int> want;
  for (const char c : std::string("RYGB")) {
    const std::string col(1, c);
    want["0" + col] = 1;
    for (int n = 1; n <= 9; ++n) want[std::to_string(n) + col] = 2;
    want["S" + col] = 2;
    want["R" + col] = 2;
    want["+" + col] = 2;
  }
  want["W"] = 4;
  want["D"] = 4;
  return {Report("deck.composition", deck.size() == 108 && counts == want,
                 std::to_string(deck.size()) + " cards, " +
                     std::to_string(counts.size()) + " faces")};
}

std::vector<CheckReport> AndSuite() {
  bool ok = true;
  std::string detail;
  std::uint64_t tapes = 0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const Distribution d = ExactDistribution([&](RandomTape tape) {
        Table table(std::move(tape));
        AndOutput out = SixCardAnd(
            EncodeBit(x, Card{0, AuxRole::Alpha()}, Card{1, AuxRole::Beta()}),
            EncodeBit(y, Card{2, AuxRole::Alpha()}, Card{3, AuxRole::Beta()}),
            Card{4, AuxRole::Alpha()}, Card{5, AuxRole::Beta()}, table);
        return std::to_string(Decode(out.and_pair)) +
               std::to_string(Decode(out.nand_side));
      });
      const std::string want =
          std::to_string(x && y) + std::to_string(!x && y);
      const bool pass = d == Distribution{{want, Rational(1)}};
      ok = ok && pass;
      tapes += 2;
      detail += (detail.empty() ? "" : " ") + std::to_string(x) +
                std::to_string(y) + "->" + FormatDistribution(d);
    }
  }
  return {Report("and.truth-table", ok, detail, tapes)};
}

std::vector<CheckReport> LotterySuite(const VerifyConfig& config) {
  std::vector<CheckReport> out;
  // Modified lottery: uniform over valid cards, NONE when all are invalid.
  {
    bool ok = true;
    std::string detail;
    int cases = 0;
    for (int m = 1; m <= 3; ++m) {
      for (int mask = 0; mask < (1 << m); ++mask) {
        std::vector<bool> validity;
        std::vector<std::string> valid;
        for (int i = 0; i < m; ++i) {
          validity.push_back(mask >> i & 1);
          if (validity.back()) {
            valid.push_back(ToToken(UnoFace::Number(i + 1, Color::kBlue)));
          }
        }
        const Distribution d = ExactDistribution([&](RandomTape tape) {
          Table table(std::move(tape));
          return LotteryLabel(
              CovertLottery(MakeLottery(validity, LotteryMode::kModified), table));
        });
        const Distribution want =
            valid.empty() ? Distribution{{"NONE", Rational(1)}} : Uniform(valid);
        ++cases;
        if (d != want || !SumsToOne(d)) {
          ok = false;
          detail = "m=" + std::to_string(m) + " validity " +
                   BitString(validity) + " gave " + FormatDistribution(d);
        }
      }
    }
    out.push_back(Report("lottery.modified-uniform", ok,
                         ok ? std::to_string(cases) + " validity vectors, m<=3"
                            : detail));
  }
  // Original lottery with nothing valid: uniform over all m cards.
  {
    bool ok = true;
    std::string detail;
    for (int m = 1; m <= 3; ++m) {
      const std::vector<bool> validity(m, false);
      std::vector<std::string> all;
      for (int i = 0; i < m; ++i) {
        all.push_back(ToToken(UnoFace::Number(i + 1, Color::kBlue)));
      }
      const Distribution d = ExactDistribution([&](RandomTape tape) {
        Table table(std::move(tape));
        return LotteryLabel(
            CovertLottery(MakeLottery(validity, LotteryMode::kOriginal), table));
      });
      if (d != Uniform(all)) {
        ok = false;
        detail = "m=" + std::to_string(m) + " gave " + FormatDistribution(d);
      } else {
        detail += (detail.empty() ? "" : " ") + FormatDistribution(d);
      }
    }
    out.push_back(Report("lottery.original-all-invalid", ok, detail));
  }
  if (config.oracle_only) return out;

  // Monte Carlo against the oracle on tiny instances.
  {
    const std::uint64_t n = Runs(config, 50000);
    const std::vector<bool> validity = {true, false, true};
    const Distribution exact = ExactDistribution([&](RandomTape tape) {
      Table table(std::move(tape));
      return LotteryLabel(
          CovertLottery(MakeLottery(validity, LotteryMode::kModified), table));
    });
    std::vector<std::string> labels(n);
    ParallelFor(n, config.jobs, [&](std::uint64_t i) {
      Table table(RandomTape::Seeded(RunSeed(config.seed, i)));
      labels[i] = LotteryLabel(
          CovertLottery(MakeLottery(validity, LotteryMode::kModified), table));
    });
    std::map<std::string, double> freq;
    for (const std::string& l : labels) ++freq[l];
    const double tv = TotalVariation(freq, static_cast<double>(n), exact);
    CheckReport r = Report("lottery.monte-carlo-agreement", tv < 0.02,
                           "TV=" + std::to_string(tv) + " vs " +
                               FormatDistribution(exact),
                           n, config.seed);
    r.statistic = tv;
    out.push_back(std::move(r));
  }
  {
    const std::uint64_t n = Runs(config, 50000);
    const auto hands = Hands({{"7R", "4G"}, {"5B", "3Y"}});
    const Distribution exact =
        ExhaustiveSelectionCheck("", hands, RedOrSeven, config.mutation)
            .distribution;
    std::vector<std::string> labels(n);
    const std::uint64_t seed = RunSeed(config.seed, 1);
    ParallelFor(n, config.jobs, [&](std::uint64_t i) {
      Table table(RandomTape::Seeded(RunSeed(seed, i)));
      labels[i] = OutcomeLabel(
          RunSelection(hands, RedOrSeven, table, config.mutation));
    });
    std::map<std::string, double> freq;
    for (const std::string& l : labels) ++freq[l];
    const double tv = TotalVariation(freq, static_cast<double>(n), exact);
    CheckReport r = Report("selection.monte-carlo-agreement", tv < 0.02,
                           "TV=" + std::to_string(tv) + " vs " +
                               FormatDistribution(exact),
                           n, seed);
    r.statistic = tv;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckReport> ResourceSuite(const VerifyConfig& config) {
  constexpr std::uint64_t kRuns = 1000;
  std::vector<std::uint8_t> lottery_ok(kRuns);
  std::vector<std::uint8_t> shuffles_ok(kRuns);
  std::vector<std::uint8_t> aux_ok(kRuns);
  const std::vector<std::string> faces = {"1R", "2R", "3Y", "4G", "5B", "6R",
                                          "7Y", "8G", "9B", "SR", "RY", "+G"};
  ParallelFor(kRuns, config.jobs, [&](std::uint64_t i) {
    const std::uint64_t seed = RunSeed(config.seed, i);
    std::mt19937_64 rng(seed);
    auto below = [&](int n) {
      return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
    };
    {
      const int m = 1 + below(5);
      std::vector<bool> validity;
      for (int j = 0; j < m; ++j) validity.push_back(below(2) == 1);
      Table table(RandomTape::Seeded(seed));
      CovertLottery(MakeLottery(validity, LotteryMode::kModified), table);
      lottery_ok[i] = table.transcript.CountShuffles() == m + 2;
    }
    {
      const int owners = 2 + below(3);
      std::vector<std::vector<Card>> hands(owners);
      std::uint32_t serial = 0;
      const int k1 = 1 + below(4);
      for (int j = 0; j < k1; ++j) {
        hands[0].push_back({serial++, ParseFace(faces[below(12)])});
      }
      // Owner 1 plays the unplayed deck, which always holds a card.
      for (int o = 1; o < owners; ++o) {
        const int size = o == 1 ? 1 + below(3) : below(4);
        for (int j = 0; j < size; ++j) {
          hands[o].push_back({serial++, ParseFace(faces[below(12)])});
        }
      }
      int k = 0;
      for (const auto& h : hands) k += static_cast<int>(h.size());
      Table table(RandomTape::Seeded(seed ^ 1));
      const SelectionResult r =
          RunSelection(hands, RedOrSeven, table, config.mutation);
      shuffles_ok[i] = r.shuffles == k1 + 5;
      aux_ok[i] = r.aux_taken == 3 * k + 4 &&
                  table.supply.outstanding() == 0;
    }
  });
  auto count = [](const std::vector<std::uint8_t>& v) {
    return static_cast<std::uint64_t>(std::count(v.begin(), v.end(), 1));
  };
  auto report = [&](const std::string& name, const std::vector<std::uint8_t>& v,
                    const std::string& what) {
    const std::uint64_t good = count(v);
    return Report(name, good == kRuns,
                  std::to_string(good) + "/" + std::to_string(kRuns) + " runs " +
                      what,
                  kRuns, config.seed);
  };
  return {report("resources.lottery-shuffles", lottery_ok, "with m+2 shuffles"),
          report("resources.selection-shuffles", shuffles_ok,
                 "with k1+5 shuffles"),
          report("resources.selection-aux", aux_ok,
                 "taking 3k+4 aux cards, all returned")};
}

std::vector<CheckReport> SelectionSuite(const VerifyConfig& config) {
  // k = 4 cards over the actor and the deck, every split with k1 < k and
  // every count of valid cards in the actor's hand.
  const std::vector<std::string> red = {"1R", "2R", "3R"};
  const std::vector<std::string> other = {"4G", "5B", "6Y", "8G"};
  std::vector<CheckReport> out;
  for (int k1 = 1; k1 <= 3; ++k1) {
    for (int v = 0; v <= k1; ++v) {
      std::vector<std::string> actor(red.begin(), red.begin() + v);
      std::vector<std::string> rest = other;
      while (static_cast<int>(actor.size()) < k1) {
        actor.push_back(rest.back());
        rest.pop_back();
      }
      rest.resize(4 - k1);
      const std::string name = "selection.exhaustive.k1=" + std::to_string(k1) +
                               ".v=" + std::to_string(v);
      out.push_back(ExhaustiveSelectionCheck(name, Hands({actor, rest}), IsRed,
                                             config.mutation)
                        .report);
    }
  }
  return out;
}

std::vector<CheckReport> UniformitySuite(const VerifyConfig& config) {
  std::vector<CheckReport> out;
  const std::uint64_t n = Runs(config, 10000);
  for (int v = 1; v <= 4; ++v) {
    out.push_back(UniformityTest("uniformity.game-hand.v=" + std::to_string(v),
                                 GameScaleHand(v), std::max<std::uint64_t>(n, 1000),
                                 RunSeed(config.seed, v), 0.01, config.mutation,
                                 config.jobs));
  }
  // A tape that never shuffles must be rejected.
  CheckReport self = UniformityTest(
      "uniformity.self-test", GameScaleHand(3), 1000, config.seed, 0.01,
      Mutation::kNone, config.jobs, [](std::uint64_t) {
        return RandomTape::FromSource([](int k) {
          Permutation p(k);
          std::iota(p.begin(), p.end(), 0);
          return p;
        });
      });
  self.pass = !self.pass;
  self.detail = "identity tape " +
                std::string(self.pass ? "rejected" : "accepted") + "; " +
                self.detail;
  out.push_back(std::move(self));
  return out;
}

std::vector<CheckReport> LeakageSuite(const VerifyConfig& config) {
  std::vector<CheckReport> out;
  for (const Family& f : TinyFamilies()) {
    out.push_back(LeakageAuditExact(f.name + ".exact", f.pair, config.mutation));
  }
  if (config.oracle_only) return out;
  const std::uint64_t n = Runs(config, 50000);
  std::uint64_t i = 0;
  for (const Family& f : LargeFamilies()) {
    for (CheckReport& r : LeakageAuditMonteCarlo(
             f.name, f.pair, n, RunSeed(config.seed, 100 + i++), config.mutation,
             config.jobs)) {
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<CheckReport> StructuralSuite(const VerifyConfig& config) {
  return RunStructural(config.mutation, config.seed);
}

std::vector<CheckReport> MutationSuite(const VerifyConfig& config) {
  std::vector<CheckReport> out;
  const std::map<Mutation, std::string> expected = {
      {Mutation::kDropFirstShuffle, "structural.d"},
      {Mutation::kDropSecondShuffle, "leakage"},
      {Mutation::kDropReturnShuffle, "structural.d"},
      {Mutation::kExtraShuffle, "structural.d"},
      {Mutation::kHideCard, "structural.a"},
      {Mutation::kSwapMarker, "structural.b"},
      {Mutation::kExtraAux, "structural.e"},
  };
  for (Mutation m : AllMutations()) {
    std::vector<std::string> caught;
    try {
      for (const CheckReport& r : RunStructural(m, config.seed)) {
        if (!r.pass) caught.push_back(r.name);
      }
      const auto& want = expected.at(m);
      if (want == "leakage" || caught.empty()) {
        const Family f = TinyFamilies().front();
        if (!LeakageAuditExact(f.name, f.pair, m).pass) caught.push_back("leakage");
      }
      if (caught.empty()) {
        const auto hands = Hands({{"7R", "4G"}, {"5B", "3Y"}});
        if (!ExhaustiveSelectionCheck("", hands, RedOrSeven, m).report.pass) {
          caught.push_back("selection");
        }
      }
    } catch (const std::exception& e) {
      caught.push_back(std::string("exception: ") + e.what());
    }
    const std::string& want = expected.at(m);
    const bool named =
        std::find(caught.begin(), caught.end(), want) != caught.end();
    std::string detail = "expected " + want + "; failing:";
    for (const std::string& c : caught) detail += " " + c;
    if (caught.empty()) detail += " none";
    out.push_back(Report("mutation." + std::string(MutationName(m)), named,
                         detail, 0, config.seed));
  }
  return out;
}

std::vector<CheckReport> GameSuite(const VerifyConfig& config) {
  std::vector<CheckReport> out;
  {
    const auto games = static_cast<std::uint64_t>(config.uno_games);
    constexpr int kTurnCeiling = 5000;
    struct Result {
      bool finished = false;
      bool conserved = false;
      bool legal = false;
      bool secret = false;
      int turns = 0;
      std::string why;
    };
    std::vector<Result> results(games);
    ParallelFor(games, config.jobs, [&](std::uint64_t i) {
      UnoConfig uc;
      uc.seats.assign(2 + static_cast<int>(i % 3), SeatKind::kVirtual);
      UnoGame game(uc, RandomTape::Seeded(RunSeed(config.seed, i)));
      const RunResult run = RunGame(
          game, [](const UnoGame&, int) { return std::nullopt; }, kTurnCeiling);
      Result& r = results[i];
      r.finished = run.winner.has_value() && !run.aborted;
      r.conserved = run.conserved_throughout && game.Conserved();
      r.legal = PlaysLegal(game, &r.why);
      r.secret = NoHiddenFaces(game.transcript(),
                               static_cast<std::uint32_t>(game.universe().size()),
                               &r.why);
      r.turns = run.turns;
    });
    std::uint64_t finished = 0, conserved = 0, legal = 0, secret = 0;
    int max_turns = 0;
    std::string why;
    for (const Result& r : results) {
      finished += r.finished;
      conserved += r.conserved;
      legal += r.legal;
      secret += r.secret;
      max_turns = std::max(max_turns, r.turns);
      if (why.empty()) why = r.why;
    }
    auto frac = [&](std::uint64_t k) {
      return std::to_string(k) + "/" + std::to_string(games);
    };
    out.push_back(Report("games.uno.terminate", finished == games,
                         frac(finished) + " finished within " +
                             std::to_string(kTurnCeiling) +
                             " turns, longest " + std::to_string(max_turns),
                         games, config.seed));
    out.push_back(Report("games.uno.conservation", conserved == games,
                         frac(conserved) + " conserved 108 cards every turn",
                         games, config.seed));
    out.push_back(Report("games.uno.legal-plays", legal == games,
                         frac(legal) + (legal == games ? "" : "; " + why), games,
                         config.seed));
    out.push_back(Report("games.uno.secrecy", secret == games,
                         frac(secret) + (secret == games ? "" : "; " + why),
                         games, config.seed));
  }
  const std::uint64_t smoke = std::max(1, config.uno_games / 100);
  {
    bool ok = true;
    std::string detail;
    for (std::uint64_t i = 0; i < smoke; ++i) {
      SevensGame g(std::vector<SeatKind>(3 + i % 3, SeatKind::kVirtual),
                   RandomTape::Seeded(RunSeed(config.seed ^ 7, i)));
      const bool won = g.Run();
      if (!won || !g.board_well_formed_throughout()) {
        ok = false;
        detail = "game " + std::to_string(i) + (won ? " broke a run" : " stalled");
      }
    }
    out.push_back(Report("games.sevens", ok,
                         ok ? "runs stayed intervals around 7" : detail, smoke,
                         config.seed));
  }
  {
    bool ok = true;
    std::string detail;
    for (std::uint64_t i = 0; i < smoke; ++i) {
      HeartsGame g(std::vector<SeatKind>(4, SeatKind::kVirtual),
                   RandomTape::Seeded(RunSeed(config.seed ^ 11, i)));
      for (int round = 0; round < 2; ++round) {
        const std::vector<int> pts = g.PlayRound();
        if (std::accumulate(pts.begin(), pts.end(), 0) != 26) {
          ok = false;
          detail = "game " + std::to_string(i) + " round summed to " +
                   std::to_string(std::accumulate(pts.begin(), pts.end(), 0));
        }
      }
    }
    out.push_back(Report("games.hearts", ok,
                         ok ? "every round dealt out 26 points" : detail, smoke,
                         config.seed));
  }
  {
    bool ok = true;
    std::string detail;
    for (std::uint64_t i = 0; i < smoke; ++i) {
      MugginsGame g(std::vector<SeatKind>(2 + i % 3, SeatKind::kVirtual),
                    RandomTape::Seeded(RunSeed(config.seed ^ 13, i)));
      const bool done = g.Run();
      bool fives = true;
      for (int a : g.awards()) fives = fives && a > 0 && a % 5 == 0;
      if (!done || !fives || !g.layout().JunctionsMatch()) {
        ok = false;
        detail = "game " + std::to_string(i) +
                 (!done ? " stalled" : !fives ? " scored off five" : " mismatched");
      }
    }
    out.push_back(Report("games.muggins", ok,
                         ok ? "every award a multiple of five" : detail, smoke,
                         config.seed));
  }
  return out;
}

std::vector<CheckReport> RunVerifySuites(const VerifyConfig& config) {
  std::vector<CheckReport> all;
  auto add = [&](std::vector<CheckReport> reports) {
    for (CheckReport& r : reports) all.push_back(std::move(r));
  };
  add(DeckSuite());
  add(AndSuite());
  add(LotterySuite(config));
  add(SelectionSuite(config));
  add(StructuralSuite(config));
  add(LeakageSuite(config));
  if (config.oracle_only) return all;
  add(ResourceSuite(config));
  add(UniformitySuite(config));
  if (config.mutation == Mutation::kNone) add(MutationSuite(config));
  add(GameSuite(config));
  return all;
}

}  // namespace vplay
