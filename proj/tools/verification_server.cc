// Copyright 2026 The simverify Authors
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


// Runs the verification server.
//
//   verification_server --config server.ini
//
// The config file holds key = value lines:
//   listen_address = 127.0.0.1:8080
//   journal_path   = /var/lib/simverify/journal.jsonl
//   gibbs_iters    = 20000
//   gibbs_burnin   = 2000
//   max_m          = 1000
//   max_gibbs_iters = 1000000   (optional)
//   noise_secret   = 1234       (optional; otherwise random and journaled)

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "simverify/server/http_server.h"
#include "simverify/server/service.h"

namespace {

simverify::server::HttpServer* g_server = nullptr;

void HandleSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private verification server"};
  std::string config_path;
  app.add_option("--config", config_path, "Key-value config file")
      ->required()
      ->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(config_path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    std::cerr << "Bad config: " << e.what() << "\n";
    return EXIT_FAILURE;
  }

  simverify::server::ServiceConfig config;
  std::string listen_address;
  try {
    listen_address = tree.get<std::string>("listen_address", "127.0.0.1:8080");
    config.journal_path = tree.get<std::string>("journal_path");
    config.default_gibbs_iters =
        tree.get<int>("gibbs_iters", config.default_gibbs_iters);
    config.default_gibbs_burnin =
        tree.get<int>("gibbs_burnin", config.default_gibbs_burnin);
    config.max_partitions = tree.get<int>("max_m", config.max_partitions);
    config.max_gibbs_iters =
        tree.get<int>("max_gibbs_iters", config.max_gibbs_iters);
    if (auto secret = tree.get_optional<uint64_t>("noise_secret")) {
      config.noise_secret = *secret;
    }
  } catch (const boost::property_tree::ptree_error& e) {
    std::cerr << "Bad config: " << e.what() << "\n";
    return EXIT_FAILURE;
  }

  const size_t colon = listen_address.rfind(':');
  int port = 0;
  if (colon == std::string::npos ||
      !absl::SimpleAtoi(listen_address.substr(colon + 1), &port)) {
    std::cerr << "listen_address must look like host:port\n";
    return EXIT_FAILURE;
  }
  const std::string host = listen_address.substr(0, colon);

  auto service = simverify::server::VerificationService::Open(config);
  if (!service.ok()) {
    std::cerr << service.status() << "\n";
    return EXIT_FAILURE;
  }
  simverify::server::HttpServer server(service->get());
  auto bound = server.Bind(host, port);
  if (!bound.ok()) {
    std::cerr << bound.status() << "\n";
    return EXIT_FAILURE;
  }
  g_server = &server;
  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  std::cerr << "Listening on " << host << ":" << *bound << "\n";
  if (absl::Status status = server.Serve(); !status.ok()) {
    std::cerr << status << "\n";
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
