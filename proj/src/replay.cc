#include "vplay/replay.h"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <utility>

#include "vplay/variants.h"

namespace vplay {

namespace {

constexpr std::pair<GameKind, std::string_view> kGameNames[] = {
    {GameKind::kUno, "uno"},
    {GameKind::kSevens, "sevens"},
    {GameKind::kHearts, "hearts"},
    {GameKind::kDominoes, "dominoes"},
};

constexpr std::pair<std::string_view, std::string_view> kSteps[] = {
    {"uno.setup", "scramble the deck and deal the hands"},
    {"uno.start", "pick the starting seat and flip the first card"},
    {"uno.reflip", "a wild draw four was flipped: back into the deck, scramble, flip again"},
    {"uno.refill", "the deck ran out: scramble the discards under the top card into a new deck"},
    {"sevens.deal", "scramble the deck and deal every card"},
    {"sevens.open", "find the holder of the seven of diamonds"},
    {"hearts.deal", "scramble the deck and deal 13 cards each"},
    {"muggins.deal", "scramble the tiles and deal the hands"},
    {"muggins.first", "find the highest doublet"},
    {"choice.1", "lay out numbered markers face up"},
    {"choice.2", "turn them down and scramble them"},
    {"choice.3", "turn up the first marker"},
    {"color.1", "lay out one marker per color face up"},
    {"color.2", "turn them down and scramble them"},
    {"color.3", "turn up the first marker for the new color"},
    {"sel.empty", "acting hand is empty; nothing is selected"},
    {"sel.begin", "card selection starts"},
    {"sel.1", "every unplayed card goes face down in one row, actor first"},
    {"sel.2", "an owner marker goes under each card, face up"},
    {"sel.3", "the markers are turned down"},
    {"sel.4", "the columns are scrambled"},
    {"sel.5", "the top row is turned up: the unplayed cards in random order"},
    {"sel.6", "a validity commitment goes under each revealed card"},
    {"sel.7", "everything is turned down"},
    {"sel.8", "the columns are scrambled again"},
    {"sel.9", "the owner markers are turned up"},
    {"sel.10", "the actor's columns move to the lottery"},
    {"lot.1", "each card sits above its validity commitment"},
    {"lot.2", "the lottery columns are scrambled"},
    {"lot.3", "a token commitment to 1 is laid out"},
    {"lot.4", "a chain of six-card ANDs marks the first valid column"},
    {"lot.5", "the chained results replace the validity pairs"},
    {"lot.6", "the lottery columns are scrambled again"},
    {"lot.7", "the results are turned up; a 1 marks the selected card"},
    {"and.1", "both inputs and a spare pair are laid in one row"},
    {"and.2", "the row is rearranged"},
    {"and.3", "the two halves are scrambled as piles"},
    {"and.4", "the row is rearranged back"},
    {"and.5", "the first pair is turned up to read the result"},
    {"sel.11", "the unselected cards go back to the actor"},
    {"sel.12", "the commitments are taken off the remaining columns"},
    {"sel.13", "the remaining columns are scrambled"},
    {"sel.14", "their owner markers are turned up"},
    {"sel.15", "each card goes back to its owner"},
    {"sel.out", "the selected card is shown"},
    {"sel.end", "card selection ends"},
};

std::vector<std::string_view> Words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const std::size_t j = s.find(' ', i);
    const std::size_t end = j == std::string_view::npos ? s.size() : j;
    if (end > i) out.push_back(s.substr(i, end - i));
    i = end;
  }
  return out;
}

std::optional<std::uint64_t> ParseU64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string> SplitLines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = text.find('\n', i);
    if (j == std::string_view::npos) j = text.size();
    std::string line(text.substr(i, j - i));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    i = j + 1;
  }
  return lines;
}

}  // namespace

std::string_view GameName(GameKind game) {
  for (const auto& [g, name] : kGameNames) {
    if (g == game) return name;
  }
  return "?";
}

GameKind ParseGame(std::string_view name) {
  for (const auto& [g, n] : kGameNames) {
    if (n == name) return g;
  }
  throw std::invalid_argument("unknown game '" + std::string(name) + "'");
}

std::string SeatString(const std::vector<SeatKind>& seats) {
  std::string s;
  for (SeatKind k : seats) s += k == SeatKind::kHuman ? 'H' : 'V';
  return s;
}

std::vector<SeatKind> ParseSeats(std::string_view text) {
  std::vector<SeatKind> seats;
  for (char c : text) {
    if (c == 'H') {
      seats.push_back(SeatKind::kHuman);
    } else if (c == 'V') {
      seats.push_back(SeatKind::kVirtual);
    } else {
      throw std::invalid_argument("seat kinds are H or V");
    }
  }
  if (seats.empty()) throw std::invalid_argument("no seats");
  return seats;
}

ReplayParseError::ReplayParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

std::string FormatMove(const ReplayMove& m) {
  std::string s = "p" + std::to_string(m.seat + 1);
  switch (m.move.kind) {
    case MoveKind::kPlay:
      s += " play " + (m.move.face ? ToToken(*m.move.face) : std::string("?"));
      if (m.move.color) s += " " + ToToken(*m.move.color);
      break;
    case MoveKind::kDraw:
      s += " draw";
      break;
    case MoveKind::kPass:
      s += " pass";
      break;
  }
  return s;
}

std::optional<ReplayMove> ParseMove(std::string_view text) {
  const auto w = Words(text);
  if (w.size() < 2 || w[0].size() < 2 || w[0][0] != 'p') return std::nullopt;
  const auto seat = ParseU64(w[0].substr(1));
  if (!seat || *seat < 1) return std::nullopt;
  ReplayMove m;
  m.seat = static_cast<int>(*seat) - 1;
  if (w[1] == "draw" && w.size() == 2) {
    m.move.kind = MoveKind::kDraw;
  } else if (w[1] == "pass" && w.size() == 2) {
    m.move.kind = MoveKind::kPass;
  } else if (w[1] == "play" && (w.size() == 3 || w.size() == 4)) {
    m.move.kind = MoveKind::kPlay;
    try {
      const CardFace face = ParseFace(w[2]);
      if (!std::holds_alternative<UnoFace>(face)) return std::nullopt;
      m.move.face = std::get<UnoFace>(face);
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
    if (w.size() == 4) {
      if (w[3].size() != 1) return std::nullopt;
      m.move.color = ColorFromChar(w[3][0]);
      if (!m.move.color) return std::nullopt;
    }
  } else {
    return std::nullopt;
  }
  return m;
}

ReplayFile ParseReplay(std::string_view text) {
  const std::vector<std::string> lines = SplitLines(text);
  const int n = static_cast<int>(lines.size());
  if (n == 0 || lines[0] != "vplay-replay 1") {
    throw ReplayParseError(1, "expected 'vplay-replay 1'");
  }
  ReplayFile file;
  bool have_game = false;
  bool have_seats = false;
  bool have_seed = false;
  int i = 1;
  for (; i < n && lines[i] != "---"; ++i) {
    const int lineno = i + 1;
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    const std::size_t sp = line.find(' ');
    const std::string key = line.substr(0, sp);
    const std::string value = sp == std::string::npos ? "" : line.substr(sp + 1);
    try {
      if (key == "game") {
        file.game = ParseGame(value);
        have_game = true;
      } else if (key == "seats") {
        file.seats = ParseSeats(value);
        have_seats = true;
      } else if (key == "seed" || key == "human-seed") {
        const auto v = ParseU64(value);
        if (!v) throw std::invalid_argument("bad number '" + value + "'");
        (key == "seed" ? file.seed : file.human_seed) = *v;
        have_seed = have_seed || key == "seed";
      } else if (key == "move") {
        const auto m = ParseMove(value);
        if (!m) throw std::invalid_argument("bad move '" + value + "'");
        file.moves.push_back(*m);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw ReplayParseError(lineno, e.what());
    }
  }
  if (i >= n) throw ReplayParseError(n + 1, "missing '---' (file truncated?)");
  if (!have_game || !have_seats || !have_seed) {
    throw ReplayParseError(i + 1, "header needs game, seats and seed");
  }
  for (const ReplayMove& m : file.moves) {
    if (m.seat >= static_cast<int>(file.seats.size())) {
      throw ReplayParseError(i + 1, "move for a seat that does not exist");
    }
  }
  for (++i; i < n; ++i) {
    const std::string& line = lines[i];
    if (line.rfind("end ", 0) == 0) {
      const auto count = ParseU64(line.substr(4));
      if (!count || *count != file.transcript.size()) {
        throw ReplayParseError(i + 1, "end count does not match " +
                                          std::to_string(file.transcript.size()) +
                                          " transcript lines");
      }
      for (int j = i + 1; j < n; ++j) {
        if (!lines[j].empty()) throw ReplayParseError(j + 1, "text after end");
      }
      return file;
    }
    file.transcript.push_back(line);
  }
  throw ReplayParseError(n + 1, "missing end line (file truncated?)");
}

std::string FormatReplay(const ReplayFile& file) {
  std::ostringstream out;
  out << "vplay-replay 1\n";
  out << "game " << GameName(file.game) << "\n";
  out << "seats " << SeatString(file.seats) << "\n";
  out << "seed " << file.seed << "\n";
  if (file.game != GameKind::kUno) out << "human-seed " << file.human_seed << "\n";
  for (const ReplayMove& m : file.moves) out << "move " << FormatMove(m) << "\n";
  out << "---\n";
  for (const std::string& line : file.transcript) out << line << "\n";
  out << "end " << file.transcript.size() << "\n";
  return out.str();
}

ReplayRun ExecuteReplay(const ReplayFile& file) {
  ReplayRun run;
  if (file.game != GameKind::kUno) {
    if (!file.moves.empty()) {
      run.error = "only UNO sessions carry moves";
      return run;
    }
    ReplayFile again = RecordVariant(file.game, file.seats, file.seed,
                                     file.human_seed);
    run.transcript = std::move(again.transcript);
    return run;
  }

  UnoConfig config;
  config.seats = file.seats;
  UnoGame game(config, RandomTape::Seeded(file.seed));
  std::size_t next = 0;
  constexpr int kMaxTurns = 100000;
  while (!game.finished() && game.turns() <= kMaxTurns) {
    const int seat = game.match().turn;
    if (game.kind(seat) == SeatKind::kVirtual) {
      game.VirtualTurn();
      continue;
    }
    if (next >= file.moves.size()) break;  // recording stopped here
    const ReplayMove& m = file.moves[next];
    if (m.seat != seat) {
      run.error = "move " + std::to_string(next + 1) + " is for p" +
                  std::to_string(m.seat + 1) + " but p" +
                  std::to_string(seat + 1) + " is to move";
      break;
    }
    MoveError err = MoveError::kNone;
    switch (m.move.kind) {
      case MoveKind::kPlay:
        err = game.Play(seat, *m.move.face, m.move.color);
        break;
      case MoveKind::kDraw:
        err = game.Draw(seat);
        break;
      case MoveKind::kPass:
        err = game.Pass(seat);
        break;
    }
    if (err != MoveError::kNone) {
      run.error = "move " + std::to_string(next + 1) + " (" + FormatMove(m) +
                  ") rejected: " + std::string(MoveErrorName(err));
      break;
    }
    ++next;
  }
  if (run.error.empty() && next < file.moves.size()) {
    run.error = std::to_string(file.moves.size() - next) +
                " moves left over after the game ended";
  }
  run.transcript = game.transcript().Lines();
  return run;
}

ReplayVerdict CheckReplay(const ReplayFile& file) {
  ReplayVerdict v;
  const ReplayRun run = ExecuteReplay(file);
  v.error = run.error;
  const std::size_t common = std::min(run.transcript.size(), file.transcript.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (run.transcript[i] != file.transcript[i]) {
      v.line = i + 1;
      v.expected = file.transcript[i];
      v.actual = run.transcript[i];
      return v;
    }
  }
  if (run.transcript.size() != file.transcript.size()) {
    v.line = common + 1;
    v.expected = common < file.transcript.size() ? file.transcript[common]
                                                 : "<end of transcript>";
    v.actual = common < run.transcript.size() ? run.transcript[common]
                                              : "<end of transcript>";
    return v;
  }
  v.identical = run.error.empty();
  return v;
}

std::string FormatVerdict(const ReplayVerdict& v) {
  if (v.identical) return "IDENTICAL";
  std::string s;
  if (v.line > 0) {
    s = "DIVERGED at transcript line " + std::to_string(v.line) +
        "\n  recorded: " + v.expected + "\n  replayed: " + v.actual;
  } else {
    s = "DIVERGED";
  }
  if (!v.error.empty()) s += "\n  " + v.error;
  return s;
}

ReplayFile RecordUno(std::vector<SeatKind> seats, std::uint64_t seed,
                     const HumanMoveSource& humans, int max_turns) {
  ReplayFile file;
  file.game = GameKind::kUno;
  file.seats = seats;
  file.seed = seed;
  UnoConfig config;
  config.seats = std::move(seats);
  UnoGame game(config, RandomTape::Seeded(seed));
  auto recording = [&](const UnoGame& g, int seat) -> std::optional<HumanMove> {
    std::optional<HumanMove> move = humans ? humans(g, seat) : std::nullopt;
    if (move) file.moves.push_back({seat, *move});
    return move;
  };
  RunGame(game, recording, max_turns);
  file.transcript = game.transcript().Lines();
  return file;
}

ReplayFile RecordVariant(GameKind game, std::vector<SeatKind> seats,
                         std::uint64_t seed, std::uint64_t human_seed) {
  ReplayFile file;
  file.game = game;
  file.seats = seats;
  file.seed = seed;
  file.human_seed = human_seed;
  RandomTape tape = RandomTape::Seeded(seed);
  switch (game) {
    case GameKind::kUno:
      throw std::invalid_argument("use RecordUno for UNO");
    case GameKind::kSevens: {
      SevensGame g(std::move(seats), std::move(tape), human_seed);
      g.Run();
      file.transcript = g.transcript().Lines();
      break;
    }
    case GameKind::kHearts: {
      HeartsGame g(std::move(seats), std::move(tape), human_seed);
      g.Run();
      file.transcript = g.transcript().Lines();
      break;
    }
    case GameKind::kDominoes: {
      MugginsGame g(std::move(seats), std::move(tape), human_seed);
      g.Run();
      file.transcript = g.transcript().Lines();
      break;
    }
  }
  return file;
}

std::string_view StepDescription(std::string_view label) {
  for (const auto& [l, text] : kSteps) {
    if (l == label) return text;
  }
  return {};
}

std::string Walkthrough(const std::vector<std::string>& transcript,
                        int selection_runs) {
  std::ostringstream out;
  int runs = 0;
  int shuffles = 0;
  bool detail = false;
  auto protocol_step = [](std::string_view label) {
    return label.rfind("sel.", 0) == 0 || label.rfind("lot.", 0) == 0 ||
           label.rfind("and.", 0) == 0;
  };
  for (const std::string& line : transcript) {
    if (line.rfind("SHUFFLE", 0) == 0) ++shuffles;
    if (line.rfind("STEP ", 0) == 0) {
      const std::string label = line.substr(5);
      if (label == "sel.begin") ++runs;
      detail = runs >= 1 && runs <= selection_runs && protocol_step(label);
      if (detail || !protocol_step(label)) {
        out << "[" << label << "] " << StepDescription(label) << "\n";
      }
      if (label == "sel.end" && runs == selection_runs) detail = false;
      continue;
    }
    if (line.rfind("GAME ", 0) == 0) {
      out << "  " << line << "\n";
    } else if (detail) {
      out << "    " << line << "\n";
    }
  }
  out << "summary: " << transcript.size() << " events, " << runs
      << " card selections, " << shuffles << " shuffles\n";
  return out.str();
}

}  // namespace vplay
