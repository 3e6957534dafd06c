#include "sgploc/node_http.hpp"

#include "sgploc/errors.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <stdexcept>
#include <thread>

namespace sgploc {

namespace {

using nlohmann::json;

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply(res, status, json{{"error", message}});
}

Eigen::VectorXd parse_rssi(const json& j) {
  if (!j.contains("rssi") || !j.at("rssi").is_array()) {
    throw BadRequestError("body must contain an 'rssi' array");
  }
  const auto& arr = j.at("rssi");
  Eigen::VectorXd rssi(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw BadRequestError("rssi entries must be numbers");
    rssi(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return rssi;
}

}  // namespace

struct NodeServer::Impl {
  LocalizationNode& node;
  std::string host;
  int requested_port;
  int retrain_every;
  int bound_port = 0;
  httplib::Server server;
  std::thread listener;
  std::atomic<int> ingests_since_retrain{0};

  Impl(LocalizationNode& n, std::string h, int p, int every)
      : node(n), host(std::move(h)), requested_port(p), retrain_every(every) {
    install_routes();
  }

  void install_routes() {
    server.Post("/locate", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        const json body = json::parse(req.body);
        const LocateResult r = node.locate(parse_rssi(body));
        reply(res, 200,
              json{{"x", r.x},
                   {"y", r.y},
                   {"sd_x", r.sd_x},
                   {"sd_y", r.sd_y},
                   {"floor", r.floor},
                   {"building", r.building}});
      } catch (const json::exception& e) {
        reply_error(res, 400, std::string("invalid JSON: ") + e.what());
      } catch (const BadRequestError& e) {
        reply_error(res, 400, e.what());
      } catch (const NotTrainedError& e) {
        reply_error(res, 503, e.what());
      } catch (const std::exception& e) {
        reply_error(res, 500, e.what());
      }
    });

    server.Post("/ingest", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        const json body = json::parse(req.body);
        RssiSample sample;
        sample.rssi = parse_rssi(body);
        sample.x = body.at("x").get<double>();
        sample.y = body.at("y").get<double>();
        sample.floor = body.value("floor", node.settings().floor);
        sample.building = body.value("building", node.settings().building);
        sample.timestamp = body.value("timestamp", std::int64_t{0});
        const std::size_t pending = node.ingest(sample);

        bool retrained = false;
        if (retrain_every > 0 && ++ingests_since_retrain >= retrain_every) {
          ingests_since_retrain = 0;
          node.retrain();
          retrained = true;
        }
        reply(res, 200, json{{"accepted", 1}, {"pending", retrained ? 0 : pending},
                             {"retrained", retrained}});
      } catch (const json::exception& e) {
        reply_error(res, 400, std::string("invalid JSON: ") + e.what());
      } catch (const BadRequestError& e) {
        reply_error(res, 400, e.what());
      } catch (const std::exception& e) {
        reply_error(res, 500, e.what());
      }
    });

    server.Post("/retrain", [this](const httplib::Request&, httplib::Response& res) {
      try {
        const RetrainResult r = node.retrain();
        reply(res, 200,
              json{{"train_count", r.train_count},
                   {"fit_seconds", r.fit_seconds},
                   {"sparsity", r.sparsity}});
      } catch (const BadRequestError& e) {
        reply_error(res, 409, e.what());
      } catch (const std::exception& e) {
        reply_error(res, 500, e.what());
      }
    });

    server.Get("/info", [this](const httplib::Request&, httplib::Response& res) {
      const NodeInfo i = node.info();
      reply(res, 200,
            json{{"building", i.building},
                 {"floor", i.floor},
                 {"node_x", i.node_x},
                 {"node_y", i.node_y},
                 {"trained", i.trained},
                 {"trained_at", i.trained_at},
                 {"train_count", i.train_count},
                 {"sparsity", i.sparsity},
                 {"pending", i.pending},
                 {"model_version", i.model_version},
                 {"w", i.w}});
    });

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, json{{"status", "ok"}});
    });
  }
};

NodeServer::NodeServer(LocalizationNode& node, const std::string& host, int port,
                       int retrain_every)
    : impl_(std::make_unique<Impl>(node, host, port, retrain_every)) {}

NodeServer::~NodeServer() { stop(); }

void NodeServer::start() {
  if (impl_->listener.joinable()) return;
  if (impl_->requested_port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(impl_->host);
    if (impl_->bound_port <= 0) throw std::runtime_error("failed to bind a port");
  } else {
    if (!impl_->server.bind_to_port(impl_->host, impl_->requested_port)) {
      throw std::runtime_error("failed to bind port " +
                               std::to_string(impl_->requested_port));
    }
    impl_->bound_port = impl_->requested_port;
  }
  impl_->listener = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void NodeServer::stop() {
  if (!impl_->listener.joinable()) return;
  impl_->server.stop();
  impl_->listener.join();
}

int NodeServer::port() const { return impl_->bound_port; }

std::string NodeServer::base_url() const {
  return "http://" + impl_->host + ":" + std::to_string(impl_->bound_port);
}

}  // namespace sgploc
