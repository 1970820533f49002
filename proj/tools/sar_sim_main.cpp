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
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sar/common/clock.hpp"
#include "sar/gateway/stream.hpp"
#include "sar/sim/robot_client.hpp"
#include "sar/sim/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Robot simulator: replays a scenario against a gateway"};
  std::string scenario_file;
  std::string gateway;
  bool check = false;
  double timeout_s = 15.0;
  app.add_option("--scenario", scenario_file, "Scenario JSON")->required()->check(CLI::ExistingFile);
  app.add_option("--gateway", gateway, "Gateway robot endpoint, host:port")->required();
  app.add_flag("--check", check, "Exit non-zero unless the transcript matches the expected behaviors");
  app.add_option("--timeout", timeout_s, "Seconds to wait for each answer")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  std::signal(SIGPIPE, SIG_IGN);

  auto colon = gateway.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    std::cerr << "sar-sim: --gateway must be host:port\n";
    return 2;
  }
  std::string host = gateway.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(gateway.substr(colon + 1));
  } catch (const std::exception&) {
    std::cerr << "sar-sim: bad port in --gateway\n";
    return 2;
  }

  sar::sim::Scenario scenario;
  try {
    scenario = sar::sim::Scenario::load(scenario_file);
  } catch (const std::exception& e) {
    std::cerr << "sar-sim: " << e.what() << '\n';
    return 2;
  }

  std::shared_ptr<sar::net::TcpStream> stream;
  try {
    stream = sar::net::TcpStream::connect(host, port);
  } catch (const std::exception& e) {
    std::cerr << "sar-sim: connection failed: " << e.what() << '\n';
    return 2;
  }

  sar::SystemClock clock;
  sar::sim::RunOptions options;
  options.check = check;
  options.reply_timeout = std::chrono::duration_cast<sar::Duration>(std::chrono::duration<double>(timeout_s));
  sar::sim::RunResult result;
  {
    sar::sim::RobotClient client(stream, clock);
    result = sar::sim::run_scenario(scenario, client, clock, options);
  }

  std::cout << sar::sim::format_transcript(result.transcript);
  switch (result.status) {
    case sar::sim::RunStatus::kOk:
      break;
    case sar::sim::RunStatus::kMismatch:
      std::cerr << "sar-sim: transcript does not match the expected behaviors\n";
      for (const auto& line : result.diff) std::cerr << "  " << line << '\n';
      break;
    case sar::sim::RunStatus::kConnectionFailed:
      std::cerr << "sar-sim: connection failed: " << result.detail << '\n';
      break;
    case sar::sim::RunStatus::kTimeout:
      std::cerr << "sar-sim: timeout: " << result.detail << '\n';
      break;
  }
  return static_cast<int>(result.status);
}
