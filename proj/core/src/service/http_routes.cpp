// Eigen must come before httplib: <resolv.h> defines a `_res` macro.
#include "cobs/service/session_service.hpp"

#include <httplib.h>

namespace cobs::service {
namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  send_json(res, status, {{"code", code}, {"message", message}});
}

template <typename Fn>
httplib::Server::Handler guarded(int ok_status, Fn fn) {
  return [ok_status, fn](const httplib::Request& req, httplib::Response& res) {
    try {
      send_json(res, ok_status, fn(req));
    } catch (const ServiceError& e) {
      send_error(res, e.status(), e.code(), e.what());
    } catch (const InvalidInput& e) {
      send_error(res, 400, "bad_request", e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "bad_request", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ServiceError(400, "bad_request", std::string("invalid JSON body: ") + e.what());
  }
}

}  // namespace

void register_routes(httplib::Server& server, SessionService& service) {
  server.Post("/datasets", guarded(201, [&service](const httplib::Request& req) {
    std::optional<std::string> label;
    std::string name;
    std::string csv;
    if (req.get_header_value("Content-Type").find("application/json") != std::string::npos) {
      const json body = parse_body(req);
      csv = body.value("csv", std::string());
      if (body.contains("label_col") && !body.at("label_col").is_null()) {
        const auto& l = body.at("label_col");
        label = l.is_string() ? l.get<std::string>() : std::to_string(l.get<long>());
      }
      name = body.value("name", std::string());
    } else {
      csv = req.body;
      if (req.has_param("label_col")) label = req.get_param_value("label_col");
      if (req.has_param("name")) name = req.get_param_value("name");
    }
    return service.create_dataset(csv, label, name);
  }));
  server.Get(R"(/datasets/([0-9a-f]+))", guarded(200, [&service](const httplib::Request& req) {
    return service.get_dataset(req.matches[1]);
  }));
  server.Post("/sessions", guarded(201, [&service](const httplib::Request& req) {
    return service.start_session(parse_body(req));
  }));
  server.Get(R"(/sessions/([0-9a-f]+))", guarded(200, [&service](const httplib::Request& req) {
    return service.get_session(req.matches[1]);
  }));
  server.Get(R"(/sessions/([0-9a-f]+)/query)", guarded(200, [&service](const httplib::Request& req) {
    return service.next_query(req.matches[1]);
  }));
  server.Post(R"(/sessions/([0-9a-f]+)/answer)", guarded(200, [&service](const httplib::Request& req) {
    return service.answer(req.matches[1], parse_body(req));
  }));
  server.Get(R"(/sessions/([0-9a-f]+)/result)", guarded(200, [&service](const httplib::Request& req) {
    return service.result(req.matches[1]);
  }));
}

}  // namespace cobs::service
