#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vplay/http.h"
#include "vplay/replay.h"
#include "vplay/service.h"
#include "vplay/variants.h"
#include "vplay/verify.h"

namespace vplay {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20240601;

const CLI::Validator kPositive(
    [](std::string& v) -> std::string {
      const bool digits = !v.empty() && v.find_first_not_of("0123456789") ==
                                            std::string::npos;
      if (!digits || v.find_first_not_of('0') == std::string::npos) {
        return "must be a positive whole number, got '" + v + "'";
      }
      return "";
    },
    "POSITIVE");

std::string Family(std::string_view label) {
  const std::string prefix(label.substr(0, label.find('.')));
  if (prefix == "sel") return "card-selection";
  if (prefix == "lot") return "lottery";
  if (prefix == "color" || prefix == "choice" || prefix == "and") return prefix;
  return "";
}

struct GameStats {
  std::optional<int> winner;
  int turns = 0;
  bool completed = false;
  std::string violation;
  std::map<std::string, std::vector<int>> profile;
};

struct SimulateArgs {
  GameKind game = GameKind::kUno;
  std::optional<int> players;
  std::optional<int> virtual_count;
  std::uint64_t runs = 100;
  std::uint64_t seed = kDefaultSeed;
  int jobs = 1;
  int max_turns = 10000;
  std::string format = "text";
  std::string output;
  std::string record;
};

int DefaultPlayers(GameKind g) {
  switch (g) {
    case GameKind::kUno: return 3;
    case GameKind::kSevens: return 4;
    case GameKind::kHearts: return 4;
    case GameKind::kDominoes: return 2;
  }
  return 3;
}

std::vector<SeatKind> SeatsFor(int players, int virtual_count) {
  std::vector<SeatKind> seats(players, SeatKind::kVirtual);
  std::fill_n(seats.begin(), players - virtual_count, SeatKind::kHuman);
  return seats;
}

std::uint64_t HumanSeed(std::uint64_t seed, std::uint64_t i) {
  return RunSeed(seed ^ 0x68756d616eULL, i);
}

GameStats PlayOne(GameKind kind, const std::vector<SeatKind>& seats,
                  std::uint64_t seed, std::uint64_t human_seed, int max_turns) {
  GameStats s;
  RandomTape tape = RandomTape::Seeded(seed);
  switch (kind) {
    case GameKind::kUno: {
      UnoConfig config;
      config.seats = seats;
      UnoGame g(config, std::move(tape));
      const RunResult r = RunGame(g, RandomHuman(human_seed), max_turns);
      s.winner = r.winner;
      s.turns = r.turns;
      s.completed = r.winner.has_value();
      if (!r.conserved_throughout) s.violation = "card conservation";
      s.profile = ShuffleProfile(g.transcript().Lines());
      break;
    }
    case GameKind::kSevens: {
      SevensGame g(seats, std::move(tape), human_seed);
      s.completed = g.Run(max_turns);
      s.winner = g.winner();
      s.turns = g.turns();
      if (!g.board_well_formed_throughout()) s.violation = "board shape";
      s.profile = ShuffleProfile(g.transcript().Lines());
      break;
    }
    case GameKind::kHearts: {
      HeartsGame g(seats, std::move(tape), human_seed);
      s.completed = g.Run();
      s.winner = g.Ranking().front();
      s.turns = static_cast<int>(g.round_points().size()) * 52;
      for (const auto& round : g.round_points()) {
        if (std::accumulate(round.begin(), round.end(), 0) != 26) {
          s.violation = "round points";
        }
      }
      s.profile = ShuffleProfile(g.transcript().Lines());
      break;
    }
    case GameKind::kDominoes: {
      MugginsGame g(seats, std::move(tape), human_seed);
      while (!g.finished() && s.turns < max_turns) {
        g.TakeTurn();
        ++s.turns;
      }
      s.completed = g.finished();
      s.winner = g.winner();
      for (int a : g.awards()) {
        if (a % 5 != 0) s.violation = "award not a multiple of five";
      }
      s.profile = ShuffleProfile(g.transcript().Lines());
      break;
    }
  }
  return s;
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Summary {
  double mean = 0;
  int min = 0;
  int max = 0;
};

Summary Summarize(const std::vector<int>& xs) {
  Summary s;
  if (xs.empty()) return s;
  s.mean = static_cast<double>(std::accumulate(xs.begin(), xs.end(), 0LL)) /
           static_cast<double>(xs.size());
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

json SummaryJson(const Summary& s, std::size_t n) {
  return json{{"count", n}, {"mean", s.mean}, {"min", s.min}, {"max", s.max}};
}

bool WriteFile(const std::string& path, const std::string& text,
               std::ostream& err) {
  std::ofstream f(path);
  f << text;
  if (!f) {
    err << "vplay: cannot write " << path << "\n";
    return false;
  }
  return true;
}

int Simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const int players = a.players.value_or(DefaultPlayers(a.game));
  const int virtuals = a.virtual_count.value_or(players);
  if (players < 1 || virtuals < 0 || virtuals > players) {
    err << "vplay: --virtual must be between 0 and --players\n";
    return kExitUsage;
  }
  const std::vector<SeatKind> seats = SeatsFor(players, virtuals);

  std::vector<GameStats> games(a.runs);
  try {
    // Fail fast on a bad table before spreading work across threads.
    games[0] = PlayOne(a.game, seats, RunSeed(a.seed, 0), HumanSeed(a.seed, 0),
                       a.max_turns);
  } catch (const std::invalid_argument& e) {
    err << "vplay: " << e.what() << "\n";
    return kExitUsage;
  }
  ParallelFor(a.runs - 1, a.jobs, [&](std::uint64_t j) {
    const std::uint64_t i = j + 1;
    games[i] = PlayOne(a.game, seats, RunSeed(a.seed, i), HumanSeed(a.seed, i),
                       a.max_turns);
  });

  std::vector<int> turns;
  std::vector<int> wins(players, 0);
  std::map<std::string, std::vector<int>> profile;
  std::vector<std::string> violations;
  std::uint64_t completed = 0;
  for (std::size_t i = 0; i < games.size(); ++i) {
    const GameStats& g = games[i];
    turns.push_back(g.turns);
    if (g.completed) ++completed;
    if (g.completed && g.winner) ++wins[*g.winner];
    for (const auto& [name, counts] : g.profile) {
      auto& dst = profile[name];
      dst.insert(dst.end(), counts.begin(), counts.end());
    }
    if (!g.violation.empty()) {
      violations.push_back("game " + std::to_string(i) + ": " + g.violation);
    }
    if (!g.completed) {
      violations.push_back("game " + std::to_string(i) + ": did not finish");
    }
  }

  json summary{{"command", "simulate"},
               {"game", GameName(a.game)},
               {"players", players},
               {"virtual", virtuals},
               {"runs", a.runs},
               {"seed", a.seed},
               {"completed", completed},
               {"turns", SummaryJson(Summarize(turns), turns.size())},
               {"wins", wins},
               {"violations", violations}};
  json protocols = json::object();
  for (const auto& [name, counts] : profile) {
    protocols[name] = SummaryJson(Summarize(counts), counts.size());
  }
  summary["shuffles_per_invocation"] = protocols;

  if (a.format == "structured") {
    out << summary.dump(2) << "\n";
  } else {
    out << "simulate " << GameName(a.game) << ": " << a.runs << " games, "
        << players << " players (" << players - virtuals << " human, "
        << virtuals << " virtual), seed " << a.seed << "\n";
    out << "completed  " << completed << "/" << a.runs << "\n";
    const Summary t = Summarize(turns);
    out << "turns      mean " << Fixed(t.mean) << "  min " << t.min << "  max "
        << t.max << "\n";
    out << "wins      ";
    for (int p = 0; p < players; ++p) out << " p" << p + 1 << " " << wins[p];
    out << "\n";
    out << "shuffles per protocol invocation\n";
    char line[128];
    std::snprintf(line, sizeof line, "  %-16s %11s %9s %5s %5s\n", "protocol",
                  "invocations", "mean", "min", "max");
    out << line;
    for (const auto& [name, counts] : profile) {
      const Summary s = Summarize(counts);
      std::snprintf(line, sizeof line, "  %-16s %11zu %9s %5d %5d\n",
                    name.c_str(), counts.size(), Fixed(s.mean).c_str(), s.min,
                    s.max);
      out << line;
    }
    for (const std::string& v : violations) out << "VIOLATION " << v << "\n";
  }

  if (!a.output.empty() && !WriteFile(a.output, summary.dump(2) + "\n", err)) {
    return kExitUsage;
  }
  if (!a.record.empty()) {
    const ReplayFile file =
        a.game == GameKind::kUno
            ? RecordUno(seats, RunSeed(a.seed, 0),
                        RandomHuman(HumanSeed(a.seed, 0)), a.max_turns)
            : RecordVariant(a.game, seats, RunSeed(a.seed, 0),
                            HumanSeed(a.seed, 0));
    if (!WriteFile(a.record, FormatReplay(file), err)) return kExitUsage;
  }
  return violations.empty() ? kExitOk : kExitFailed;
}

struct VerifyArgs {
  VerifyConfig config;
  std::string mutation = "none";
  std::optional<std::uint64_t> runs;
  std::string format = "text";
  std::string output;
};

int Verify(VerifyArgs a, std::ostream& out, std::ostream& err) {
  try {
    a.config.mutation = ParseMutation(a.mutation);
  } catch (const std::invalid_argument&) {
    err << "vplay: unknown mutation '" << a.mutation << "'\n";
    return kExitUsage;
  }
  a.config.runs = a.runs;
  const std::vector<CheckReport> reports = RunVerifySuites(a.config);
  const std::string summary = ReportsToJson(reports);
  if (a.format == "structured") {
    out << summary << "\n";
  } else {
    std::size_t failed = 0;
    for (const CheckReport& r : reports) {
      out << FormatReport(r) << "\n";
      if (!r.pass) ++failed;
    }
    out << reports.size() << " checks, " << failed << " failed\n";
  }
  if (!a.output.empty() && !WriteFile(a.output, summary + "\n", err)) {
    return kExitUsage;
  }
  return AllPass(reports) ? kExitOk : kExitFailed;
}

int Replay(const std::string& path, int steps, std::ostream& out,
           std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "vplay: cannot read " << path << "\n";
    return kExitUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  ReplayFile file;
  try {
    file = ParseReplay(buf.str());
  } catch (const ReplayParseError& e) {
    err << path << ": " << e.what() << "\n";
    return kExitUsage;
  }
  out << Walkthrough(file.transcript, steps);
  const ReplayVerdict v = CheckReplay(file);
  out << FormatVerdict(v) << "\n";
  return v.identical ? kExitOk : kExitFailed;
}

}  // namespace

std::map<std::string, std::vector<int>> ShuffleProfile(
    const std::vector<std::string>& transcript) {
  std::map<std::string, std::vector<int>> profile;
  std::string current;
  bool in_selection = false;
  bool deck_open = false;
  for (const std::string& line : transcript) {
    if (line.rfind("STEP ", 0) == 0) {
      const std::string label = line.substr(5);
      if (label == "sel.begin") {
        in_selection = true;
        current = "card-selection";
        profile[current].push_back(0);
      } else if (in_selection) {
        if (label == "sel.end") {
          in_selection = false;
          current = "";
          deck_open = false;
        }
      } else {
        const std::string family = Family(label);
        const bool first = label.size() > 2 &&
                           label.compare(label.size() - 2, 2, ".1") == 0;
        if (family.empty()) {
          current = "";
          deck_open = false;
        } else if (first || family != current) {
          current = family;
          profile[current].push_back(0);
        }
      }
    } else if (line.rfind("SHUFFLE", 0) == 0) {
      if (current.empty() && !deck_open) {
        profile["deck"].push_back(0);
        deck_open = true;
      }
      ++profile[current.empty() ? "deck" : current].back();
    }
  }
  return profile;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Card-based virtual players: simulate, verify, replay, serve"};
  app.name("vplay");
  app.require_subcommand(1);

  const std::vector<std::string> formats = {"text", "structured"};

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Play full games");
  std::string game = "uno";
  simulate->add_option("--game", game)
      ->check(CLI::IsMember({"uno", "sevens", "hearts", "dominoes"}));
  simulate->add_option("--players", sim.players, "Seats at the table");
  simulate->add_option("--virtual", sim.virtual_count,
                       "Virtual seats (default: all)");
  simulate->add_option("--runs", sim.runs, "Games to play")
      ->check(kPositive);
  simulate->add_option("--seed", sim.seed, "Master seed")->envname("VPLAY_SEED");
  simulate->add_option("--jobs", sim.jobs, "Worker threads")
      ->check(kPositive);
  simulate->add_option("--max-turns", sim.max_turns, "Turn ceiling per game")
      ->check(kPositive);
  simulate->add_option("--format", sim.format)->check(CLI::IsMember(formats));
  simulate->add_option("--output", sim.output, "Write the JSON summary here");
  simulate->add_option("--record", sim.record,
                       "Write the first game as a replay file");

  VerifyArgs ver;
  CLI::App* verify = app.add_subcommand("verify", "Run the verification suites");
  verify->add_option("--seed", ver.config.seed, "Master seed")
      ->envname("VPLAY_SEED");
  verify->add_option("--runs", ver.runs, "Samples for the statistical checks")
      ->check(kPositive);
  verify->add_option("--games", ver.config.uno_games,
                     "UNO games for the game checks")
      ->check(kPositive);
  verify->add_option("--jobs", ver.config.jobs, "Worker threads")
      ->check(kPositive);
  verify->add_option("--mutate", ver.mutation, "Inject a protocol mutation");
  verify->add_flag("--oracle-only", ver.config.oracle_only,
                   "Exact enumeration checks only");
  verify->add_option("--format", ver.format)->check(CLI::IsMember(formats));
  verify->add_option("--output", ver.output, "Write the JSON summary here");

  std::string replay_path;
  int replay_steps = 1;
  CLI::App* replay = app.add_subcommand("replay", "Re-run and check a replay file");
  replay->add_option("file", replay_path)->required();
  replay->add_option("--expand", replay_steps,
                     "Card selections shown event by event")
      ->check(CLI::NonNegativeNumber);

  std::string host = "127.0.0.1";
  int port = 8080;
  ServiceOptions service;
  CLI::App* serve = app.add_subcommand("serve", "Host live UNO sessions");
  serve->add_option("--host", host);
  serve->add_option("--port", port)->check(CLI::Range(1, 65535));
  serve->add_option("--seed", service.default_seed,
                    "Seed for sessions that do not choose one")
      ->envname("VPLAY_SEED");
  serve->add_option("--virtual-delay-ms", service.virtual_delay_ms)
      ->check(CLI::NonNegativeNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*simulate) {
    sim.game = ParseGame(game);
    return Simulate(sim, out, err);
  }
  if (*verify) return Verify(ver, out, err);
  if (*replay) return Replay(replay_path, replay_steps, out, err);
  SessionManager manager(service);
  out << "serving on http://" << host << ":" << port << "/v1" << std::endl;
  if (!Serve(manager, host, port)) {
    err << "vplay: cannot listen on " << host << ":" << port << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace vplay
