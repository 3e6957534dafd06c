#pragma once

#include "sgploc/node.hpp"

#include <memory>
#include <string>

namespace sgploc {

// HTTP/1.1 + JSON front end for a LocalizationNode.
//
//   POST /locate   {"rssi":[...]}                     -> {"x","y","sd_x","sd_y","floor","building"}
//   POST /ingest   {"rssi":[...],"x","y","floor","building","timestamp"?}
//                                                     -> {"accepted","pending","retrained"}
//   POST /retrain                                     -> {"train_count","fit_seconds","sparsity"}
//   GET  /info                                        -> node metadata
//   GET  /health                                      -> {"status":"ok"}
//
// 400 on malformed bodies, 503 while untrained, 409 when there is nothing to
// train on, 500 when a retrain fails (the old model keeps serving).
class NodeServer {
public:
  // port 0 binds an ephemeral port; retrain_every > 0 triggers a retrain
  // after that many accepted ingests.
  NodeServer(LocalizationNode& node, const std::string& host = "127.0.0.1",
             int port = 0, int retrain_every = 0);
  ~NodeServer();

  NodeServer(const NodeServer&) = delete;
  NodeServer& operator=(const NodeServer&) = delete;

  void start();  // returns once the socket is accepting
  void stop();

  int port() const;
  std::string base_url() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sgploc
