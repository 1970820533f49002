// Copyright 2026 The SAR Gateway Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "sar/common/clock.hpp"
#include "sar/gateway/config.hpp"
#include "sar/gateway/gateway.hpp"
#include "sar/gateway/operator_api.hpp"
#include "sar/gateway/stream.hpp"

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAR middleware gateway: robot socket server and operator API"};
  std::optional<int> robot_port;
  std::optional<int> http_port;
  std::optional<std::string> data_dir;
  std::optional<std::string> config_file;
  std::optional<std::string> backend;
  std::string bind_address = "0.0.0.0";
  app.add_option("--robot-port", robot_port, "TCP port for robot connections [env SAR_ROBOT_PORT]");
  app.add_option("--http-port", http_port, "HTTP port for the operator API [env SAR_HTTP_PORT]");
  app.add_option("--data-dir", data_dir, "Session logs, user models and scripts [env SAR_DATA_DIR]");
  app.add_option("--config", config_file, "Gateway configuration JSON [env SAR_CONFIG]");
  app.add_option("--backend", backend, "Cognition backends [env SAR_BACKEND]")
      ->check(CLI::IsMember({"mock", "remote"}));
  app.add_option("--bind", bind_address, "Listen address")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  if (!config_file) config_file = env("SAR_CONFIG");
  if (!robot_port) {
    if (auto v = env("SAR_ROBOT_PORT")) robot_port = std::stoi(*v);
  }
  if (!http_port) {
    if (auto v = env("SAR_HTTP_PORT")) http_port = std::stoi(*v);
  }
  if (!data_dir) data_dir = env("SAR_DATA_DIR");
  if (!backend) backend = env("SAR_BACKEND");

  // Signals are taken synchronously by one thread; block them everywhere else.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::signal(SIGPIPE, SIG_IGN);

  try {
    sar::gateway::GatewayConfig config;
    if (config_file) config = sar::gateway::GatewayConfig::load(*config_file);
    if (robot_port) config.robot_port = *robot_port;
    if (http_port) config.http_port = *http_port;
    if (data_dir) config.data_dir = *data_dir;
    if (backend) config.backend = *backend == "remote" ? sar::gateway::BackendKind::kRemote : sar::gateway::BackendKind::kMock;

    sar::SystemClock clock;
    auto backends = sar::gateway::make_backends(config, clock);
    sar::gateway::Gateway gateway(config, std::move(backends), clock);
    sar::net::TcpListener listener(config.robot_port, bind_address);
    sar::gateway::OperatorApi api(gateway);
    int http = api.start(bind_address, config.http_port);
    std::cout << "sar-gateway: robots on port " << listener.port() << ", operator API on port " << http
              << ", data in " << config.data_dir.string() << std::endl;

    std::thread waiter([&] {
      int sig = 0;
      sigwait(&signals, &sig);
      std::cout << "sar-gateway: shutting down" << std::endl;
      listener.close();
    });
    gateway.serve_tcp(listener);
    waiter.join();
    api.stop();
  } catch (const std::exception& e) {
    std::cerr << "sar-gateway: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
