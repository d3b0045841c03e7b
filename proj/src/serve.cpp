// Copyright 2026 The smt-forge Authors
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

#include "forge/serve.hpp"

#include <stdexcept>
#include <thread>

#include "httplib.h"

namespace forge::serve {

struct StaticServer::Impl {
  std::filesystem::path root;
  httplib::Server server;
  std::thread worker;
};

StaticServer::StaticServer(std::filesystem::path root) : impl_(std::make_unique<Impl>()) {
  if (!std::filesystem::is_directory(root)) {
    throw std::runtime_error("bundle directory " + root.string() + " does not exist");
  }
  impl_->root = std::move(root);
  auto& svr = impl_->server;
  if (!svr.set_mount_point("/", impl_->root.string())) {
    throw std::runtime_error("cannot serve " + impl_->root.string());
  }
  auto reject = [](const httplib::Request&, httplib::Response& res) {
    res.status = 405;
    res.set_header("Allow", "GET, HEAD");
    res.set_content("method not allowed\n", "text/plain");
  };
  svr.Post(".*", reject);
  svr.Put(".*", reject);
  svr.Patch(".*", reject);
  svr.Delete(".*", reject);
}

StaticServer::~StaticServer() { stop(); }

int StaticServer::start(const std::string& host, int port) {
  auto& svr = impl_->server;
  int bound = port == 0 ? svr.bind_to_any_port(host) : (svr.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  svr.wait_until_ready();
  return bound;
}

void StaticServer::run(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void StaticServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace forge::serve
