#include "vplay/service.h"

#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "httplib.h"
#include "vplay/http.h"
#include "vplay/replay.h"

namespace vplay {
namespace {

using nlohmann::json;

json CreateMsg(const std::string& seats, std::optional<std::uint64_t> seed = 7) {
  json m{{"v", 1}, {"kind", "create"}, {"game", "uno"}, {"seats", seats}};
  if (seed) m["seed"] = *seed;
  return m;
}

json JoinMsg() { return json{{"v", 1}, {"kind", "join"}}; }

json MoveMsg(const std::string& id, const std::string& action,
             const std::string& face = "", const std::string& color = "") {
  json m{{"v", 1}, {"kind", "move"}, {"move_id", id}, {"action", action}};
  if (!face.empty()) m["face"] = face;
  if (!color.empty()) m["color"] = color;
  return m;
}

struct Seated {
  std::string session;
  std::vector<std::string> credentials;
};

Seated Start(SessionManager& m, const std::string& seats, std::uint64_t seed) {
  Seated out;
  const Reply created = m.Create(CreateMsg(seats, seed));
  EXPECT_EQ(created.status, 201) << created.body.dump();
  out.session = created.body["session"];
  for (char c : seats) {
    if (c != 'H') continue;
    const Reply hello = m.Join(out.session, JoinMsg());
    EXPECT_EQ(hello.status, 200) << hello.body.dump();
    out.credentials.push_back(hello.body["credential"]);
  }
  return out;
}

// Picks a legal move from the prompt, choosing a color for black cards.
json ChooseMove(const json& prompt, std::mt19937_64& rng, int n) {
  const json& legal = prompt["legal"];
  const std::string id = "m" + std::to_string(n);
  if (!legal.empty() && rng() % 4 != 0) {
    const std::string face = legal[rng() % legal.size()];
    const bool black = face == "W" || face == "D";
    return MoveMsg(id, "play", face, black ? "RYGB"[rng() % 4] + std::string() : "");
  }
  const json& actions = prompt["actions"];
  const bool can_pass =
      std::find(actions.begin(), actions.end(), "pass") != actions.end();
  return MoveMsg(id, can_pass ? "pass" : "draw");
}

// Drives every human seat with random legal moves until the game ends.
void PlayOut(SessionManager& m, const Seated& s, std::uint64_t seed,
             const std::function<void()>& after_each = {}) {
  std::mt19937_64 rng(seed);
  for (int n = 0; n < 5000; ++n) {
    bool moved = false;
    for (const std::string& cred : s.credentials) {
      const json view = m.View(s.session, cred).body;
      if (view["phase"] == "finished") return;
      if (view["prompt"].is_null()) continue;
      const Reply v = m.Move(s.session, cred, ChooseMove(view["prompt"], rng, n));
      ASSERT_TRUE(v.body["accepted"].get<bool>()) << v.body.dump();
      moved = true;
      if (after_each) after_each();
      break;
    }
    ASSERT_TRUE(moved) << "no human prompted";
  }
  FAIL() << "game did not finish";
}

TEST(Session, CreateValidatesPlan) {
  SessionManager m;
  EXPECT_EQ(m.Create(CreateMsg("HVV")).status, 201);
  EXPECT_EQ(m.Create(CreateMsg("")).body["reason"], "invalid-plan");
  EXPECT_EQ(m.Create(CreateMsg("VVV")).body["reason"], "invalid-plan");
  EXPECT_EQ(m.Create(CreateMsg("H")).body["reason"], "invalid-plan");
  EXPECT_EQ(m.Create(CreateMsg("HXV")).body["reason"], "invalid-plan");
  json bad = CreateMsg("HV");
  bad["v"] = 2;
  EXPECT_EQ(m.Create(bad).body["reason"], "bad-message");
  bad = CreateMsg("HV");
  bad["game"] = "hearts";
  EXPECT_EQ(m.Create(bad).body["reason"], "unsupported-game");
}

TEST(Session, WaitsForEveryHuman) {
  SessionManager m;
  const std::string id = m.Create(CreateMsg("HHV")).body["session"];
  const Reply first = m.Join(id, JoinMsg());
  EXPECT_EQ(first.body["phase"], "waiting");
  EXPECT_EQ(first.body["seat"], 1);
  const std::string cred = first.body["credential"];
  const Reply early = m.Move(id, cred, MoveMsg("a", "draw"));
  EXPECT_EQ(early.body["reason"], "waiting");
  const Reply second = m.Join(id, json{{"v", 1}, {"kind", "join"}, {"seat", 2}});
  EXPECT_EQ(second.body["phase"], "active");
  EXPECT_EQ(m.Join(id, JoinMsg()).body["reason"], "no-free-seat");
  EXPECT_EQ(m.Join(id, json{{"v", 1}, {"kind", "join"}, {"seat", 3}}).body["reason"],
            "invalid-seat");
  EXPECT_EQ(m.Join("nope", JoinMsg()).status, 404);
}

TEST(Session, RejectionsHaveDistinctReasons) {
  SessionManager m;
  const Seated s = Start(m, "HHV", 11);
  const json v0 = m.View(s.session, s.credentials[0]).body;
  const int turn = v0["turn"];
  ASSERT_LE(turn, 2) << "a human seat should be prompted";
  const std::string mover = s.credentials[turn - 1];
  const std::string waiter = s.credentials[2 - turn];
  const json view = m.View(s.session, mover).body;

  std::set<std::string> reasons;
  reasons.insert(m.Move(s.session, waiter, MoveMsg("w", "draw")).body["reason"]);
  EXPECT_EQ(m.Move(s.session, "forged", MoveMsg("x", "draw")).body["reason"],
            "unknown-credential");
  reasons.insert("unknown-credential");
  // A hand card outside the legal list is illegal.
  std::string illegal;
  for (const auto& f : view["hand"]) {
    if (std::find(view["legal"].begin(), view["legal"].end(), f) ==
        view["legal"].end()) {
      illegal = f;
    }
  }
  if (!illegal.empty()) {
    reasons.insert(m.Move(s.session, mover, MoveMsg("i", "play", illegal))
                       .body["reason"]);
  }
  EXPECT_TRUE(reasons.count("out-of-turn"));
  EXPECT_TRUE(reasons.count("unknown-credential"));
  if (!illegal.empty()) {
    EXPECT_TRUE(reasons.count("illegal"));
    EXPECT_EQ(reasons.size(), 3u);
  }
  EXPECT_EQ(m.Move(s.session, mover, MoveMsg("b", "fly")).body["reason"],
            "bad-message");
}

TEST(Session, VoluntaryDrawIsAccepted) {
  SessionManager m;
  for (std::uint64_t seed = 1; seed < 40; ++seed) {
    const Seated s = Start(m, "HV", seed);
    const json view = m.View(s.session, s.credentials[0]).body;
    if (view["prompt"].is_null() || view["legal"].empty()) continue;
    const Reply v = m.Move(s.session, s.credentials[0], MoveMsg("d", "draw"));
    EXPECT_TRUE(v.body["accepted"].get<bool>()) << v.body.dump();
    return;
  }
  FAIL() << "no seed gave a prompted human with a legal card";
}

TEST(Session, BlackCardNeedsColor) {
  SessionManager m;
  for (std::uint64_t seed = 1; seed < 400; ++seed) {
    const Seated s = Start(m, "HV", seed);
    const json view = m.View(s.session, s.credentials[0]).body;
    if (view["prompt"].is_null()) continue;
    const auto& legal = view["legal"];
    const auto it = std::find_if(legal.begin(), legal.end(), [](const json& f) {
      return f == "W" || f == "D";
    });
    if (it == legal.end()) continue;
    const std::string face = *it;
    EXPECT_EQ(m.Move(s.session, s.credentials[0], MoveMsg("a", "play", face))
                  .body["reason"],
              "need-color");
    EXPECT_TRUE(m.Move(s.session, s.credentials[0], MoveMsg("b", "play", face, "G"))
                    .body["accepted"]
                    .get<bool>());
    const json events = m.Events(s.session, s.credentials[0], 0).body["events"];
    bool colored = false;
    for (const json& e : events) {
      colored = colored || (e["type"] == "color" && e["color"] == "G" && e["seat"] == 1);
    }
    EXPECT_TRUE(colored);
    return;
  }
  FAIL() << "no seed gave a black card";
}

TEST(Session, DuplicateMoveIdReturnsOriginalVerdict) {
  SessionManager m;
  const Seated s = Start(m, "HV", 3);
  json view = m.View(s.session, s.credentials[0]).body;
  ASSERT_FALSE(view["prompt"].is_null());
  const Reply first = m.Move(s.session, s.credentials[0], MoveMsg("same", "draw"));
  const std::size_t events = m.Events(s.session, s.credentials[0], 0).body["next"];
  const Reply again = m.Move(s.session, s.credentials[0], MoveMsg("same", "draw"));
  EXPECT_EQ(first.body, again.body);
  EXPECT_EQ(m.Events(s.session, s.credentials[0], 0).body["next"], events);
  // A rejected verdict is also replayed as is.
  const Reply bad = m.Move(s.session, s.credentials[0], MoveMsg("x", "play", "W"));
  EXPECT_EQ(m.Move(s.session, s.credentials[0], MoveMsg("x", "draw")).body,
            bad.body);
}

TEST(Session, VirtualNoneValidShowsOnlyDrawCount) {
  SessionManager m;
  int seen = 0;
  for (std::uint64_t seed = 1; seed < 30 && seen == 0; ++seed) {
    const Seated s = Start(m, "HVV", seed);
    PlayOut(m, s, seed);
    const json events = m.Events(s.session, s.credentials[0], 0).body["events"];
    for (const json& e : events) {
      if (e["type"] == "draw") {
        EXPECT_FALSE(e.contains("face")) << e.dump();
        EXPECT_TRUE(e.contains("count"));
        if (e["seat"] != 1) ++seen;
      }
    }
  }
  EXPECT_GT(seen, 0);
}

TEST(Session, SkipMapsToPlayThenSkip) {
  SessionManager m;
  for (std::uint64_t seed = 1; seed < 50; ++seed) {
    const Seated s = Start(m, "HVV", seed);
    PlayOut(m, s, seed);
    const json events = m.Events(s.session, s.credentials[0], 0).body["events"];
    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
      const json& e = events[i];
      if (e["type"] != "play" || e["face"].get<std::string>()[0] != 'S') continue;
      const json& next = events[i + 1];
      EXPECT_EQ(next["type"], "skip");
      const int n = 3;
      const int seat = e["seat"];
      const int skipped = next["seat"];
      EXPECT_TRUE(skipped == seat % n + 1 || skipped == (seat + n - 2) % n + 1);
      return;
    }
  }
  FAIL() << "no skip played";
}

// Every face in a serialized view must be the seat's own card, the discard
// top, or a public event.
void ExpectPrivate(const UnoGame& game, int seat, const json& view) {
  std::multiset<std::string> own;
  for (const Card& c : game.hand(seat)) own.insert(ToToken(c.face));
  std::multiset<std::string> hand(view["hand"].begin(), view["hand"].end());
  EXPECT_EQ(hand, own);
  for (const auto& f : view["legal"]) EXPECT_TRUE(own.count(f));
  if (!view["drawn"].is_null()) {
    EXPECT_TRUE(own.count(view["drawn"]));
  }
  EXPECT_EQ(view["top"], ToToken(game.discard().back().face));
  // Nothing else in the message looks like a card.
  json rest = view;
  for (const char* k : {"hand", "legal", "drawn", "top", "prompt"}) rest.erase(k);
  const std::string text = rest.dump();
  for (const UnoFace& f : AllUnoFaces()) {
    const std::string quoted = "\"" + ToToken(f) + "\"";
    if (quoted == "\"" + rest["effective_color"].get<std::string>() + "\"" ||
        (rest["designated_color"].is_string() &&
         quoted == "\"" + rest["designated_color"].get<std::string>() + "\"")) {
      continue;
    }
    EXPECT_EQ(text.find(quoted), std::string::npos) << quoted << " in " << text;
  }
}

TEST(Session, PrivacyFuzz) {
  // Random and junk moves; only plays and flips may name a face.
  SessionManager m;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::string seats = seed % 2 ? "HVH" : "HVVV";
    const Seated s = Start(m, seats, seed);
    std::mt19937_64 rng(seed);
    for (int n = 0; n < 400; ++n) {
      bool any = false;
      for (const std::string& cred : s.credentials) {
        const json view = m.View(s.session, cred).body;
        if (view["phase"] == "finished") break;
        if (view["prompt"].is_null()) continue;
        // Throw in junk moves too; they must change nothing.
        if (rng() % 5 == 0) m.Move(s.session, cred, MoveMsg("j" + std::to_string(n), "pass"));
        m.Move(s.session, cred, ChooseMove(view["prompt"], rng, n));
        any = true;
        break;
      }
      if (!any) break;
    }
    const json events = m.Events(s.session, s.credentials[0], 0).body["events"];
    for (const json& e : events) {
      if (e.contains("face")) {
        EXPECT_TRUE(e["type"] == "play" || e["type"] == "flip") << e.dump();
      }
    }
  }
}

TEST(Session, ViewsAreSecretAtEveryStep) {
  // Same engine as the session, driven directly so hidden hands are known.
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    SessionManager m;
    const Seated s = Start(m, "HVH", seed);
    std::mt19937_64 rng(seed * 7);
    std::vector<ReplayMove> moves;
    for (int n = 0; n < 300; ++n) {
      bool any = false;
      for (std::size_t h = 0; h < s.credentials.size(); ++h) {
        const json view = m.View(s.session, s.credentials[h]).body;
        if (view["phase"] == "finished") break;
        if (view["prompt"].is_null()) continue;
        const json mv = ChooseMove(view["prompt"], rng, n);
        ASSERT_TRUE(m.Move(s.session, s.credentials[h], mv).body["accepted"].get<bool>());
        any = true;
        break;
      }
      if (!any) break;
    }
    // Rebuild the engine from the accepted moves and compare every seat's view.
    // The replay is only served after the end, so finish the game first.
    PlayOut(m, s, seed);
    const json replay = m.Replay(s.session).body;
    ASSERT_EQ(replay["kind"], "replay");
    const ReplayFile file = ParseReplay(replay["text"].get<std::string>());
    UnoConfig config;
    config.seats = file.seats;
    UnoGame game(config, RandomTape::Seeded(file.seed));
    std::size_t next = 0;
    int checked = 0;
    while (!game.finished()) {
      const int seat = game.match().turn;
      if (game.kind(seat) == SeatKind::kVirtual) {
        game.VirtualTurn();
        continue;
      }
      ASSERT_LT(next, file.moves.size());
      const HumanMove& mv = file.moves[next++].move;
      if (mv.kind == MoveKind::kPlay) game.Play(seat, *mv.face, mv.color);
      if (mv.kind == MoveKind::kDraw) game.Draw(seat);
      if (mv.kind == MoveKind::kPass) game.Pass(seat);
      for (int h : {0, 2}) {
        json view;
        const SeatView sv = game.View(h);
        view["hand"] = json::array();
        for (const UnoFace& f : sv.hand) view["hand"].push_back(ToToken(f));
        view["legal"] = json::array();
        for (const UnoFace& f : sv.legal) view["legal"].push_back(ToToken(f));
        view["drawn"] = sv.drawn ? json(ToToken(*sv.drawn)) : json();
        view["top"] = ToToken(sv.top);
        view["effective_color"] = ToToken(sv.effective_color);
        view["designated_color"] = json();
        ExpectPrivate(game, h, view);
        ++checked;
      }
    }
    EXPECT_GT(checked, 0);
  }
}

TEST(Session, LiveViewsMatchEngineAndStayPrivate) {
  // The service is checked against a shadow engine fed the same moves.
  SessionManager m;
  const Seated s = Start(m, "HV", 5);
  UnoConfig config;
  config.seats = {SeatKind::kHuman, SeatKind::kVirtual};
  UnoGame shadow(config, RandomTape::Seeded(5));
  auto shadow_advance = [&] {
    while (!shadow.finished() &&
           shadow.kind(shadow.match().turn) == SeatKind::kVirtual) {
      shadow.VirtualTurn();
    }
  };
  shadow_advance();
  std::mt19937_64 rng(5);
  for (int n = 0; n < 2000; ++n) {
    const json view = m.View(s.session, s.credentials[0]).body;
    ExpectPrivate(shadow, 0, view);
    if (view["phase"] == "finished") break;
    const json mv = ChooseMove(view["prompt"], rng, n);
    ASSERT_TRUE(m.Move(s.session, s.credentials[0], mv).body["accepted"].get<bool>());
    if (mv["action"] == "play") {
      const UnoFace face = std::get<UnoFace>(ParseFace(mv["face"].get<std::string>()));
      std::optional<Color> color;
      if (mv.contains("color")) color = ColorFromChar(mv["color"].get<std::string>()[0]);
      ASSERT_EQ(shadow.Play(0, face, color), MoveError::kNone);
    } else if (mv["action"] == "draw") {
      ASSERT_EQ(shadow.Draw(0), MoveError::kNone);
    } else {
      ASSERT_EQ(shadow.Pass(0), MoveError::kNone);
    }
    shadow_advance();
  }
  EXPECT_TRUE(shadow.finished());
}

TEST(Session, StreamsAgreeAcrossSeats) {
  SessionManager m;
  const Seated s = Start(m, "HVH", 9);
  PlayOut(m, s, 9);
  const json a = m.Events(s.session, s.credentials[0], 0).body;
  const json b = m.Events(s.session, s.credentials[1], 0).body;
  EXPECT_EQ(a["events"], b["events"]);
  ASSERT_TRUE(a.contains("finish"));
  EXPECT_EQ(a["finish"]["kind"], "finish");
  for (std::size_t i = 0; i < a["events"].size(); ++i) {
    EXPECT_EQ(a["events"][i]["index"], i);
  }
  // Reading from an offset delivers the suffix once.
  const std::size_t mid = a["events"].size() / 2;
  const json tail = m.Events(s.session, s.credentials[0], mid).body["events"];
  EXPECT_EQ(tail.size(), a["events"].size() - mid);
  EXPECT_EQ(tail[0], a["events"][mid]);
}

TEST(Session, FinishedSessionReplaysIdentically) {
  SessionManager m;
  const Seated s = Start(m, "HVV", 13);
  EXPECT_EQ(m.Replay(s.session).body["reason"], "not-finished");
  PlayOut(m, s, 13);
  const json r = m.Replay(s.session).body;
  const ReplayFile file = ParseReplay(r["text"].get<std::string>());
  EXPECT_EQ(file.seed, 13u);
  EXPECT_FALSE(file.moves.empty());
  EXPECT_TRUE(CheckReplay(file).identical);
}

TEST(Session, SameSeedAndMovesGiveSameEvents) {
  SessionManager a;
  SessionManager b;
  const Seated sa = Start(a, "HVV", 21);
  const Seated sb = Start(b, "HVV", 21);
  PlayOut(a, sa, 4);
  PlayOut(b, sb, 4);
  EXPECT_EQ(a.Events(sa.session, sa.credentials[0], 0).body["events"],
            b.Events(sb.session, sb.credentials[0], 0).body["events"]);
}

TEST(Session, LongPollWakesOnNewEvent) {
  SessionManager m;
  const Seated s = Start(m, "HHV", 2);
  const json v = m.View(s.session, s.credentials[0]).body;
  const std::size_t next = v["next_event"];
  const int turn = v["turn"];
  ASSERT_LE(turn, 2);
  std::thread mover([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    m.Move(s.session, s.credentials[turn - 1], MoveMsg("d", "draw"));
  });
  const auto t0 = std::chrono::steady_clock::now();
  const json events = m.Events(s.session, s.credentials[0], next, 5000).body;
  const auto waited = std::chrono::steady_clock::now() - t0;
  mover.join();
  EXPECT_FALSE(events["events"].empty());
  EXPECT_LT(waited, std::chrono::seconds(4));
}

TEST(Http, RoundTrip) {
  SessionManager manager;
  httplib::Server server;
  MountRoutes(server, manager);
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/v1/sessions", CreateMsg("HV", 4).dump(),
                             "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = json::parse(created->body)["session"];
  auto hello = client.Post("/v1/sessions/" + id + "/join", JoinMsg().dump(),
                           "application/json");
  ASSERT_TRUE(hello);
  const std::string cred = json::parse(hello->body)["credential"];
  const httplib::Headers auth = {{"Authorization", "Bearer " + cred}};

  auto view = client.Get("/v1/sessions/" + id + "/view", auth);
  ASSERT_TRUE(view);
  EXPECT_EQ(view->status, 200);
  EXPECT_EQ(json::parse(view->body)["kind"], "view");
  EXPECT_EQ(client.Get("/v1/sessions/" + id + "/view")->status, 401);
  EXPECT_EQ(client.Get("/v1/sessions/zzz/view", auth)->status, 404);

  auto verdict = client.Post("/v1/sessions/" + id + "/moves", auth,
                             MoveMsg("m1", "draw").dump(), "application/json");
  ASSERT_TRUE(verdict);
  EXPECT_EQ(json::parse(verdict->body)["kind"], "verdict");
  EXPECT_EQ(client.Post("/v1/sessions/" + id + "/moves", auth, "{not json",
                        "application/json")
                ->status,
            400);

  auto events = client.Get("/v1/sessions/" + id + "/events?since=0&wait_ms=10", auth);
  ASSERT_TRUE(events);
  const json ev = json::parse(events->body);
  EXPECT_EQ(ev["kind"], "events");
  EXPECT_FALSE(ev["events"].empty());
  EXPECT_EQ(client.Get("/v1/sessions/" + id + "/replay")->status, 409);

  server.stop();
  t.join();
}

// --------------------------------------------------------- golden messages

std::string GoldenDir() { return std::string(VPLAY_SOURCE_DIR) + "/docs/golden/"; }

// Replaces random tokens so messages compare across runs.
json Masked(json m) {
  for (const char* k : {"session", "credential"}) {
    if (m.contains(k)) m[k] = "<" + std::string(k) + ">";
  }
  return m;
}

void ExpectGolden(const std::string& name, const json& message) {
  const std::string path = GoldenDir() + name + ".json";
  if (std::getenv("VPLAY_UPDATE_GOLDEN") != nullptr) {
    std::ofstream(path) << Masked(message).dump(2) << "\n";
    return;
  }
  std::ifstream in(path);
  ASSERT_TRUE(in) << "missing " << path;
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(Masked(message), json::parse(buf.str())) << name;
}

TEST(Golden, MessagesMatchDocumentedExamples) {
  SessionManager m;
  const json create = CreateMsg("HVV", 7);
  ExpectGolden("create", create);
  const Reply created = m.Create(create);
  ExpectGolden("created", created.body);
  const std::string id = created.body["session"];
  ExpectGolden("join", JoinMsg());
  const Reply hello = m.Join(id, JoinMsg());
  ExpectGolden("hello", hello.body);
  const std::string cred = hello.body["credential"];
  const json view = m.View(id, cred).body;
  ExpectGolden("view", view);
  ASSERT_FALSE(view["prompt"].is_null());
  ExpectGolden("prompt", view["prompt"]);
  const json move = MoveMsg("m1", "draw");
  ExpectGolden("move", move);
  ExpectGolden("verdict", m.Move(id, cred, move).body);
  ExpectGolden("verdict-rejected",
               m.Move(id, "bad-token", MoveMsg("m2", "draw")).body);
  const json events = m.Events(id, cred, 0).body;
  ExpectGolden("events", events);
  const Seated s{id, {cred}};
  PlayOut(m, s, 7);
  ExpectGolden("finish", m.Events(id, cred, 0).body["finish"]);
}

}  // namespace
}  // namespace vplay
