#ifndef VPLAY_SERVICE_H_
#define VPLAY_SERVICE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"
#include "vplay/uno.h"

namespace vplay {

inline constexpr int kProtocolVersion = 1;

struct ServiceOptions {
  // Pause after each virtual turn, for watchability.
  int virtual_delay_ms = 0;
  // Seed for sessions created without one; 0 draws from std::random_device.
  std::uint64_t default_seed = 0;
  // Upper bound on one long-poll wait.
  int max_wait_ms = 30000;
};

// A transport-neutral reply: an HTTP-style status and a JSON message.
struct Reply {
  int status = 200;
  nlohmann::json body;
};

// Hosts UNO sessions mixing human and virtual seats. Every message carries
// `v` and `kind`; see docs/protocol.md. Commands on one session are
// serialized by its lock; sessions are independent.
class SessionManager {
 public:
  explicit SessionManager(ServiceOptions options = {});
  ~SessionManager();

  // {"v":1,"kind":"create","game":"uno","seats":"HVV","seed":7}
  Reply Create(const nlohmann::json& request);
  // {"v":1,"kind":"join","seat":1}; seat is optional.
  Reply Join(const std::string& session, const nlohmann::json& request);
  Reply View(const std::string& session, const std::string& credential);
  // {"v":1,"kind":"move","move_id":"m1","action":"play","face":"W","color":"G"}
  Reply Move(const std::string& session, const std::string& credential,
             const nlohmann::json& move);
  // Public events with index >= since; waits up to wait_ms for one to arrive.
  Reply Events(const std::string& session, const std::string& credential,
               std::size_t since, int wait_ms = 0);
  // The replay file of a finished session.
  Reply Replay(const std::string& session);

 private:
  struct Session;
  std::shared_ptr<Session> Find(const std::string& id);

  ServiceOptions options_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

// Error reply: {"v":1,"kind":"error","reason":...,"message":...}
Reply ErrorReply(int status, const std::string& reason,
                 const std::string& message = "");

}  // namespace vplay

#endif  // VPLAY_SERVICE_H_
