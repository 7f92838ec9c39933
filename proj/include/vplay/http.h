#ifndef VPLAY_HTTP_H_
#define VPLAY_HTTP_H_

#include <string>

#include "vplay/service.h"

namespace httplib {
class Server;
}

namespace vplay {

// Routes under /v1. Credentials travel as `Authorization: Bearer <token>`.
//
//   POST /v1/sessions                 create
//   POST /v1/sessions/:id/join        join -> hello
//   GET  /v1/sessions/:id/view        view (with prompt)
//   POST /v1/sessions/:id/moves       move -> verdict
//   GET  /v1/sessions/:id/events      ?since=N&wait_ms=M, long poll
//   GET  /v1/sessions/:id/replay      finished sessions only
void MountRoutes(httplib::Server& server, SessionManager& manager);

// Serves until the process is stopped. Returns false if the port is taken.
bool Serve(SessionManager& manager, const std::string& host, int port);

}  // namespace vplay

#endif  // VPLAY_HTTP_H_
