#include "vplay/http.h"

#include <charconv>

#include "httplib.h"

namespace vplay {

namespace {

void Send(httplib::Response& res, const Reply& reply) {
  res.status = reply.status;
  res.set_content(reply.body.dump(), "application/json");
}

std::string Bearer(const httplib::Request& req) {
  const std::string h = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  return h.rfind(kPrefix, 0) == 0 ? h.substr(kPrefix.size()) : std::string();
}

std::optional<nlohmann::json> Body(const httplib::Request& req,
                                   httplib::Response& res) {
  auto body = nlohmann::json::parse(req.body, nullptr, false);
  if (body.is_discarded()) {
    Send(res, ErrorReply(400, "bad-message", "body is not JSON"));
    return std::nullopt;
  }
  return body;
}

std::size_t Number(const httplib::Request& req, const char* name,
                   std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string v = req.get_param_value(name);
  std::size_t out = fallback;
  std::from_chars(v.data(), v.data() + v.size(), out);
  return out;
}

}  // namespace

void MountRoutes(httplib::Server& server, SessionManager& manager) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers",
                               "Authorization, Content-Type"}});
  server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  server.Post("/v1/sessions", [&](const httplib::Request& req,
                                  httplib::Response& res) {
    if (auto body = Body(req, res)) Send(res, manager.Create(*body));
  });
  server.Post("/v1/sessions/:id/join", [&](const httplib::Request& req,
                                           httplib::Response& res) {
    if (auto body = Body(req, res)) {
      Send(res, manager.Join(req.path_params.at("id"), *body));
    }
  });
  server.Get("/v1/sessions/:id/view", [&](const httplib::Request& req,
                                          httplib::Response& res) {
    Send(res, manager.View(req.path_params.at("id"), Bearer(req)));
  });
  server.Post("/v1/sessions/:id/moves", [&](const httplib::Request& req,
                                            httplib::Response& res) {
    if (auto body = Body(req, res)) {
      Send(res, manager.Move(req.path_params.at("id"), Bearer(req), *body));
    }
  });
  server.Get("/v1/sessions/:id/events", [&](const httplib::Request& req,
                                            httplib::Response& res) {
    Send(res, manager.Events(req.path_params.at("id"), Bearer(req),
                             Number(req, "since", 0),
                             static_cast<int>(Number(req, "wait_ms", 0))));
  });
  server.Get("/v1/sessions/:id/replay", [&](const httplib::Request& req,
                                            httplib::Response& res) {
    Send(res, manager.Replay(req.path_params.at("id")));
  });
}

bool Serve(SessionManager& manager, const std::string& host, int port) {
  httplib::Server server;
  MountRoutes(server, manager);
  return server.listen(host, port);
}

}  // namespace vplay
