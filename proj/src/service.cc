#include "vplay/service.h"

#include <chrono>
#include <condition_variable>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include "vplay/replay.h"

namespace vplay {

using nlohmann::json;

namespace {

enum class Phase { kWaiting, kActive, kFinished };

const char* PhaseName(Phase p) {
  switch (p) {
    case Phase::kWaiting: return "waiting";
    case Phase::kActive: return "active";
    case Phase::kFinished: return "finished";
  }
  return "?";
}

std::string RandomToken(std::random_device& rd) {
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (int i = 0; i < 4; ++i) out << std::setw(8) << rd();
  return out.str();
}

json Message(const char* kind) { return json{{"v", kProtocolVersion}, {"kind", kind}}; }

json Tokens(const std::vector<UnoFace>& faces) {
  json out = json::array();
  for (const UnoFace& f : faces) out.push_back(ToToken(f));
  return out;
}

const char* DirectionName(Direction d) {
  return d == Direction::kClockwise ? "cw" : "ccw";
}

bool WellVersioned(const json& m, const char* kind) {
  return m.is_object() && m.value("v", 0) == kProtocolVersion &&
         m.value("kind", "") == kind;
}

}  // namespace

Reply ErrorReply(int status, const std::string& reason,
                 const std::string& message) {
  json body = Message("error");
  body["reason"] = reason;
  if (!message.empty()) body["message"] = message;
  return {status, std::move(body)};
}

struct SessionManager::Session {
  std::mutex mu;
  std::condition_variable cv;
  std::string id;
  std::vector<SeatKind> seats;
  std::uint64_t seed = 0;
  std::unique_ptr<UnoGame> game;
  // Credential per seat; empty for virtual or unjoined seats.
  std::vector<std::string> credentials;
  Phase phase = Phase::kWaiting;
  std::vector<json> events;
  std::size_t published = 0;
  Direction direction = Direction::kClockwise;
  std::map<std::pair<int, std::string>, json> verdicts;
  std::vector<ReplayMove> moves;
  bool advancing = false;

  std::optional<int> SeatOf(const std::string& credential) const {
    if (credential.empty()) return std::nullopt;
    for (std::size_t s = 0; s < credentials.size(); ++s) {
      if (credentials[s] == credential) return static_cast<int>(s);
    }
    return std::nullopt;
  }

  // Appends the engine's new public events to the stream.
  void Publish() {
    const auto& all = game->events();
    for (; published < all.size(); ++published) {
      const GameEvent& e = all[published];
      json ev = Message("event");
      ev["index"] = events.size();
      ev["type"] = std::string(GameEventName(e.kind));
      if (e.seat >= 0) ev["seat"] = e.seat + 1;
      if (e.face) ev["face"] = ToToken(*e.face);
      if (e.color) ev["color"] = ToToken(*e.color);
      if (e.kind == GameEventKind::kDraw || e.kind == GameEventKind::kReshuffle) {
        ev["count"] = e.count;
      }
      if (e.kind == GameEventKind::kReverse) {
        direction = direction == Direction::kClockwise
                        ? Direction::kCounterClockwise
                        : Direction::kClockwise;
      }
      if (e.kind == GameEventKind::kStart || e.kind == GameEventKind::kReverse) {
        ev["direction"] = DirectionName(direction);
      }
      events.push_back(std::move(ev));
    }
    if (game->finished()) phase = Phase::kFinished;
    cv.notify_all();
  }

  json Finish() const {
    json f = Message("finish");
    f["winner"] = game->winner() ? json(*game->winner() + 1) : json();
    return f;
  }

  json Prompt(int seat) const {
    if (phase != Phase::kActive || game->match().turn != seat) return json();
    json p = Message("prompt");
    p["seat"] = seat + 1;
    const std::vector<UnoFace> legal = game->LegalPlays(seat);
    p["legal"] = Tokens(legal);
    json actions = json::array();
    if (!legal.empty()) actions.push_back("play");
    actions.push_back(game->awaiting_drawn_decision() ? "pass" : "draw");
    p["actions"] = std::move(actions);
    return p;
  }

  json ViewOf(int seat) const {
    const SeatView v = game->View(seat);
    json out = Message("view");
    out["session"] = id;
    out["phase"] = PhaseName(phase);
    out["seat"] = seat + 1;
    out["seats"] = SeatString(seats);
    out["hand"] = Tokens(v.hand);
    out["hand_counts"] = v.hand_counts;
    out["unplayed_count"] = v.unplayed_count;
    out["discard_count"] = v.discard_count;
    out["top"] = ToToken(v.top);
    out["effective_color"] = ToToken(v.effective_color);
    out["designated_color"] =
        v.designated_color ? json(ToToken(*v.designated_color)) : json();
    out["direction"] = DirectionName(v.direction);
    out["turn"] = v.turn + 1;
    out["drawn"] = v.drawn ? json(ToToken(*v.drawn)) : json();
    out["legal"] = Tokens(v.legal);
    out["winner"] = v.winner ? json(*v.winner + 1) : json();
    out["next_event"] = events.size();
    out["prompt"] = Prompt(seat);
    return out;
  }
};

SessionManager::SessionManager(ServiceOptions options)
    : options_(std::move(options)) {}

SessionManager::~SessionManager() = default;

std::shared_ptr<SessionManager::Session> SessionManager::Find(
    const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

namespace {

// Runs virtual turns until a human must act or the game ends. The session
// lock is released only around the optional delay.
template <typename S>
void Advance(S& s, std::unique_lock<std::mutex>& lock, int delay_ms) {
  if (s.advancing) return;
  s.advancing = true;
  while (s.phase == Phase::kActive && !s.game->finished() &&
         s.game->kind(s.game->match().turn) == SeatKind::kVirtual) {
    s.game->VirtualTurn();
    s.Publish();
    if (delay_ms > 0) {
      lock.unlock();
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      lock.lock();
    }
  }
  s.Publish();
  s.advancing = false;
}

}  // namespace

Reply SessionManager::Create(const json& request) {
  if (!WellVersioned(request, "create")) {
    return ErrorReply(400, "bad-message", "expected a v1 create message");
  }
  if (request.value("game", "uno") != "uno") {
    return ErrorReply(400, "unsupported-game", "sessions host UNO only");
  }
  std::vector<SeatKind> seats;
  try {
    seats = ParseSeats(request.value("seats", ""));
  } catch (const std::invalid_argument& e) {
    return ErrorReply(400, "invalid-plan", e.what());
  }
  const auto humans = std::count(seats.begin(), seats.end(), SeatKind::kHuman);
  if (seats.size() < 2 || seats.size() > 10 || humans < 1) {
    return ErrorReply(400, "invalid-plan",
                      "need 2 to 10 seats with at least one human");
  }

  auto s = std::make_shared<Session>();
  s->seats = seats;
  s->credentials.resize(seats.size());
  {
    std::lock_guard<std::mutex> lock(mu_);
    std::random_device rd;
    if (request.contains("seed")) {
      if (!request["seed"].is_number_unsigned()) {
        return ErrorReply(400, "bad-message", "seed must be an unsigned integer");
      }
      s->seed = request["seed"].get<std::uint64_t>();
    } else if (options_.default_seed != 0) {
      s->seed = options_.default_seed;
    } else {
      s->seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
    }
    do {
      s->id = RandomToken(rd).substr(0, 16);
    } while (sessions_.count(s->id));
  }
  UnoConfig config;
  config.seats = seats;
  s->game = std::make_unique<UnoGame>(config, RandomTape::Seeded(s->seed));
  s->Publish();
  {
    std::lock_guard<std::mutex> lock(mu_);
    sessions_[s->id] = s;
  }
  json body = Message("created");
  body["session"] = s->id;
  body["seats"] = SeatString(seats);
  body["phase"] = PhaseName(s->phase);
  return {201, std::move(body)};
}

Reply SessionManager::Join(const std::string& session, const json& request) {
  auto s = Find(session);
  if (!s) return ErrorReply(404, "unknown-session");
  if (!WellVersioned(request, "join")) {
    return ErrorReply(400, "bad-message", "expected a v1 join message");
  }
  std::unique_lock<std::mutex> lock(s->mu);
  const int n = static_cast<int>(s->seats.size());
  int seat = -1;
  if (request.contains("seat")) {
    if (!request["seat"].is_number_integer()) {
      return ErrorReply(400, "bad-message", "seat must be an integer");
    }
    seat = request["seat"].get<int>() - 1;
    if (seat < 0 || seat >= n || s->seats[seat] != SeatKind::kHuman) {
      return ErrorReply(400, "invalid-seat", "not a human seat");
    }
    if (!s->credentials[seat].empty()) return ErrorReply(409, "seat-taken");
  } else {
    for (int i = 0; i < n && seat < 0; ++i) {
      if (s->seats[i] == SeatKind::kHuman && s->credentials[i].empty()) seat = i;
    }
    if (seat < 0) return ErrorReply(409, "no-free-seat");
  }
  {
    std::random_device rd;
    s->credentials[seat] = RandomToken(rd);
  }
  bool all_joined = true;
  for (int i = 0; i < n; ++i) {
    if (s->seats[i] == SeatKind::kHuman && s->credentials[i].empty()) {
      all_joined = false;
    }
  }
  if (all_joined && s->phase == Phase::kWaiting) {
    s->phase = Phase::kActive;
    Advance(*s, lock, options_.virtual_delay_ms);
  }
  json body = Message("hello");
  body["session"] = s->id;
  body["seat"] = seat + 1;
  body["credential"] = s->credentials[seat];
  body["seats"] = SeatString(s->seats);
  body["phase"] = PhaseName(s->phase);
  return {200, std::move(body)};
}

Reply SessionManager::View(const std::string& session,
                           const std::string& credential) {
  auto s = Find(session);
  if (!s) return ErrorReply(404, "unknown-session");
  std::lock_guard<std::mutex> lock(s->mu);
  const auto seat = s->SeatOf(credential);
  if (!seat) return ErrorReply(401, "unknown-credential");
  return {200, s->ViewOf(*seat)};
}

Reply SessionManager::Move(const std::string& session,
                           const std::string& credential, const json& move) {
  auto s = Find(session);
  if (!s) return ErrorReply(404, "unknown-session");
  std::unique_lock<std::mutex> lock(s->mu);
  const auto seat = s->SeatOf(credential);
  if (!seat) return ErrorReply(401, "unknown-credential");

  if (!WellVersioned(move, "move") || !move.contains("move_id") ||
      !move["move_id"].is_string() || move["move_id"].get<std::string>().empty()) {
    return ErrorReply(400, "bad-message", "expected a v1 move with a move_id");
  }
  const std::string move_id = move["move_id"];
  const auto key = std::make_pair(*seat, move_id);
  if (auto it = s->verdicts.find(key); it != s->verdicts.end()) {
    return {200, it->second};
  }

  HumanMove hm;
  const std::string action = move.value("action", "");
  if (action == "play") {
    hm.kind = MoveKind::kPlay;
    try {
      const CardFace face = ParseFace(move.value("face", ""));
      if (!std::holds_alternative<UnoFace>(face)) throw std::invalid_argument("");
      hm.face = std::get<UnoFace>(face);
    } catch (const std::invalid_argument&) {
      return ErrorReply(400, "bad-message", "face must be an UNO card token");
    }
    if (move.contains("color") && !move["color"].is_null()) {
      const std::string c = move["color"].is_string() ? move["color"].get<std::string>() : "";
      hm.color = c.size() == 1 ? ColorFromChar(c[0]) : std::nullopt;
      if (!hm.color) return ErrorReply(400, "bad-message", "color is R, Y, G or B");
    }
  } else if (action == "draw") {
    hm.kind = MoveKind::kDraw;
  } else if (action == "pass") {
    hm.kind = MoveKind::kPass;
  } else {
    return ErrorReply(400, "bad-message", "action is play, draw or pass");
  }

  std::string reason;
  if (s->phase == Phase::kWaiting) {
    reason = "waiting";
  } else {
    MoveError err = MoveError::kNone;
    switch (hm.kind) {
      case MoveKind::kPlay:
        err = s->game->Play(*seat, *hm.face, hm.color);
        break;
      case MoveKind::kDraw:
        err = s->game->Draw(*seat);
        break;
      case MoveKind::kPass:
        err = s->game->Pass(*seat);
        break;
    }
    reason = std::string(MoveErrorName(err));
    if (err == MoveError::kNone) {
      s->moves.push_back({*seat, hm});
      s->Publish();
      Advance(*s, lock, options_.virtual_delay_ms);
    }
  }
  json verdict = Message("verdict");
  verdict["move_id"] = move_id;
  verdict["accepted"] = reason == "ok";
  verdict["reason"] = reason;
  s->verdicts[key] = verdict;
  return {200, std::move(verdict)};
}

Reply SessionManager::Events(const std::string& session,
                             const std::string& credential, std::size_t since,
                             int wait_ms) {
  auto s = Find(session);
  if (!s) return ErrorReply(404, "unknown-session");
  std::unique_lock<std::mutex> lock(s->mu);
  if (!s->SeatOf(credential)) return ErrorReply(401, "unknown-credential");
  const int wait = std::clamp(wait_ms, 0, options_.max_wait_ms);
  if (wait > 0) {
    s->cv.wait_for(lock, std::chrono::milliseconds(wait), [&] {
      return s->events.size() > since || s->phase == Phase::kFinished;
    });
  }
  json body = Message("events");
  json list = json::array();
  for (std::size_t i = since; i < s->events.size(); ++i) list.push_back(s->events[i]);
  body["events"] = std::move(list);
  body["next"] = s->events.size();
  body["phase"] = PhaseName(s->phase);
  if (s->phase == Phase::kFinished) body["finish"] = s->Finish();
  return {200, std::move(body)};
}

Reply SessionManager::Replay(const std::string& session) {
  auto s = Find(session);
  if (!s) return ErrorReply(404, "unknown-session");
  std::lock_guard<std::mutex> lock(s->mu);
  // The seed fixes every future shuffle, so it stays private until the end.
  if (s->phase != Phase::kFinished) return ErrorReply(409, "not-finished");
  ReplayFile file;
  file.game = GameKind::kUno;
  file.seats = s->seats;
  file.seed = s->seed;
  file.moves = s->moves;
  file.transcript = s->game->transcript().Lines();
  json body = Message("replay");
  body["text"] = FormatReplay(file);
  return {200, std::move(body)};
}

}  // namespace vplay
