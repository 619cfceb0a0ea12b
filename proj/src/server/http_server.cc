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


#include "simverify/server/http_server.h"

#include <string>

#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "json.hpp"
#include "simverify/server/errors.h"

namespace simverify::server {
namespace {

using nlohmann::json;

void SendJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, const absl::Status& status) {
  const ErrorCode code = ErrorCodeOf(status);
  SendJson(res, HttpStatusFor(code),
           json{{"error_code", std::string(ErrorCodeName(code))},
                {"message", std::string(status.message())}});
}

// Parses the body or answers 400 and returns discarded.
json ParseBody(const httplib::Request& req, httplib::Response& res) {
  json body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
  if (body.is_discarded()) {
    SendError(res, MakeError(ErrorCode::kBadRequest, "Body is not valid JSON"));
  }
  return body;
}

}  // namespace

HttpServer::HttpServer(VerificationService* service)
    : service_(service), http_(std::make_unique<httplib::Server>()) {
  http_->Post("/datasets", [this](const httplib::Request& req,
                                  httplib::Response& res) {
    json body = ParseBody(req, res);
    if (body.is_discarded()) return;
    absl::StatusOr<Registration> registration = ParseRegistration(body);
    if (!registration.ok()) return SendError(res, registration.status());
    absl::StatusOr<std::string> id = service_->RegisterDataset(
        std::move(registration->sample), registration->total_epsilon);
    if (!id.ok()) return SendError(res, id.status());
    SendJson(res, 201, json{{"dataset_id", *id}});
  });

  http_->Post(R"(/datasets/([^/]+)/verify)", [this](const httplib::Request& req,
                                                   httplib::Response& res) {
    json body = ParseBody(req, res);
    if (body.is_discarded()) return;
    absl::StatusOr<AnalysisQuery> query = ParseAnalysisQuery(body);
    if (!query.ok()) return SendError(res, query.status());
    absl::StatusOr<QueryResponse> response =
        service_->SubmitQuery(req.matches[1].str(), *query);
    if (!response.ok()) return SendError(res, response.status());
    SendJson(res, 200, ToJson(*response));
  });

  http_->Get(R"(/datasets/([^/]+)/budget)", [this](const httplib::Request& req,
                                                  httplib::Response& res) {
    absl::StatusOr<BudgetStatus> status =
        service_->GetBudgetStatus(req.matches[1].str());
    if (!status.ok()) return SendError(res, status.status());
    SendJson(res, 200, ToJson(*status));
  });
}

HttpServer::~HttpServer() { Stop(); }

absl::StatusOr<int> HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = http_->bind_to_any_port(host);
    if (bound < 0) {
      return absl::UnavailableError(absl::StrCat("Cannot bind ", host));
    }
    return bound;
  }
  if (!http_->bind_to_port(host, port)) {
    return absl::UnavailableError(absl::StrCat("Cannot bind ", host, ":", port));
  }
  return port;
}

absl::Status HttpServer::Serve() {
  if (!http_->listen_after_bind()) {
    return absl::InternalError("HTTP listener stopped with an error");
  }
  return absl::OkStatus();
}

void HttpServer::Stop() {
  if (http_->is_running()) http_->stop();
}

void HttpServer::WaitUntilReady() const { http_->wait_until_ready(); }

}  // namespace simverify::server
