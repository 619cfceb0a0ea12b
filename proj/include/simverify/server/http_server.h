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


#ifndef SIMVERIFY_SERVER_HTTP_SERVER_H_
#define SIMVERIFY_SERVER_HTTP_SERVER_H_

#include <memory>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "simverify/server/service.h"

namespace httplib {
class Server;
}  // namespace httplib

namespace simverify::server {

// JSON-over-HTTP front end:
//   POST /datasets               -> 201 {dataset_id}
//   POST /datasets/{id}/verify   -> 200 QueryResponse
//   GET  /datasets/{id}/budget   -> 200 BudgetStatus
// Failures answer {error_code, message} with the status from HttpStatusFor().
class HttpServer {
 public:
  explicit HttpServer(VerificationService* service);
  ~HttpServer();

  // Binds host:port; port 0 picks a free port. Returns the bound port.
  absl::StatusOr<int> Bind(const std::string& host, int port);
  // Serves until Stop(). Blocks.
  absl::Status Serve();
  void Stop();
  void WaitUntilReady() const;

 private:
  VerificationService* service_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace simverify::server

#endif  // SIMVERIFY_SERVER_HTTP_SERVER_H_
