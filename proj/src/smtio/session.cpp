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

#include "forge/smtio/session.hpp"

#include <errno.h>
#include <fcntl.h>
#include <poll.h>
#include <unistd.h>

#include <algorithm>
#include <set>

#include "forge/smtio/terms.hpp"

namespace forge::smtio {

namespace {

using clock = std::chrono::steady_clock;

std::string error_message(const SExpr& response) {
  if (response.has_head("error") && response.children().size() > 1 &&
      response.children()[1].is_atom()) {
    std::string msg = response.children()[1].text();
    if (msg.size() >= 2 && msg.front() == '"' && msg.back() == '"') {
      msg = msg.substr(1, msg.size() - 2);
    }
    return msg;
  }
  return print_sexpr(response);
}

}  // namespace

std::string_view to_string(SatResult r) {
  switch (r) {
    case SatResult::Sat: return "sat";
    case SatResult::Unsat: return "unsat";
    case SatResult::Unknown: return "unknown";
  }
  return "unknown";
}

const SExpr* Model::value(std::string_view name) const {
  for (const auto& [n, v] : bindings) {
    if (n == name) return &v;
  }
  return nullptr;
}

std::string Model::str() const {
  if (bindings.empty()) return "(no constants)";
  std::string out;
  for (const auto& [name, value] : bindings) {
    if (!out.empty()) out += ", ";
    out += name + " = " + print_sexpr(value);
  }
  return out;
}

Session::Session(SessionOptions options) : options_(std::move(options)) {
  try {
    proc_.emplace(Subprocess::spawn(options_.command));
  } catch (const SpawnError& e) {
    throw SolverError(std::string("cannot start solver: ") + e.what());
  }
  for (int fd : {proc_->stdout_fd(), proc_->stderr_fd()}) {
    ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);
  }
  alive_ = true;
  command("(set-option :print-success true)");
  command("(set-option :produce-models true)");
  command("(set-option :timeout " + std::to_string(options_.query_budget.count()) + ")");
}

Session::~Session() {
  if (alive_ && proc_) {
    static constexpr char kExit[] = "(exit)\n";
    ssize_t ignored = ::write(proc_->stdin_fd(), kExit, sizeof kExit - 1);
    (void)ignored;
  }
}

void Session::kill() {
  alive_ = false;
  proc_.reset();
}

SExpr Session::request(const std::string& text, bool is_query) {
  if (!alive_) throw SolverError("solver session is not running");
  if (is_query) ++queries_;

  std::string line = text + "\n";
  std::size_t sent = 0;
  while (sent < line.size()) {
    ssize_t n = ::write(proc_->stdin_fd(), line.data() + sent, line.size() - sent);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) {
      kill();
      throw SolverError("solver closed its input: " + errbox_);
    }
    sent += static_cast<std::size_t>(n);
  }

  const auto deadline = clock::now() + options_.query_budget + options_.grace;
  char buf[8192];
  for (;;) {
    if (auto len = complete_form_length(inbox_)) {
      std::string form = inbox_.substr(0, *len);
      inbox_.erase(0, *len);
      std::vector<SExpr> parsed;
      try {
        parsed = parse_sexpr(form);
      } catch (const ParseError& e) {
        throw SolverError(std::string("unparseable solver response: ") + e.what());
      }
      if (parsed.empty()) continue;
      return std::move(parsed.front());
    }

    auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now());
    if (remaining.count() <= 0) {
      kill();
      throw SolverTimeout("solver did not answer '" + text + "' within " +
                          std::to_string((options_.query_budget + options_.grace).count()) +
                          " ms");
    }
    pollfd fds[2] = {{proc_->stdout_fd(), POLLIN, 0}, {proc_->stderr_fd(), POLLIN, 0}};
    nfds_t count = proc_->stderr_fd() >= 0 ? 2 : 1;
    int rc = ::poll(fds, count, static_cast<int>(remaining.count()));
    if (rc < 0 && errno != EINTR) {
      kill();
      throw SolverError("poll failed on solver pipes");
    }
    if (rc <= 0) continue;
    if (count == 2 && fds[1].revents) {
      ssize_t n = ::read(fds[1].fd, buf, sizeof buf);
      if (n > 0) {
        errbox_.append(buf, static_cast<std::size_t>(n));
      } else if (n == 0) {
        proc_->close_stderr();
      }
    }
    if (fds[0].revents) {
      ssize_t n = ::read(fds[0].fd, buf, sizeof buf);
      if (n > 0) {
        inbox_.append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
        std::string why = errbox_.empty() ? std::string("solver exited") : errbox_;
        kill();
        throw SolverError(why);
      }
    }
  }
}

void Session::command(const std::string& text) {
  SExpr response = request(text);
  if (response.is_atom("success") || response.is_atom("unsupported")) return;
  throw SolverError(error_message(response));
}

void Session::close_query_frame() {
  model_ready_ = false;
  if (query_frame_open_) {
    query_frame_open_ = false;
    command("(pop 1)");
  }
}

void Session::declare_const(const std::string& name, const std::string& sort) {
  close_query_frame();
  command("(declare-const " + name + " " + sort + ")");
  decls_.emplace_back(name, sort);
}

void Session::assert_formula(const SExpr& formula) {
  close_query_frame();
  command("(assert " + print_sexpr(formula) + ")");
}

void Session::push() {
  close_query_frame();
  command("(push 1)");
  frame_marks_.push_back(decls_.size());
}

void Session::pop() {
  close_query_frame();
  if (frame_marks_.empty()) throw std::logic_error("pop without matching push");
  command("(pop 1)");
  decls_.resize(frame_marks_.back());
  frame_marks_.pop_back();
}

SatResult Session::check_sat(std::span<const SExpr> assertions) {
  close_query_frame();
  command("(push 1)");
  query_frame_open_ = true;
  for (const auto& a : assertions) command("(assert " + print_sexpr(a) + ")");
  SExpr response = request("(check-sat)", true);
  SatResult result;
  if (response.is_atom("sat")) {
    result = SatResult::Sat;
  } else if (response.is_atom("unsat")) {
    result = SatResult::Unsat;
  } else if (response.is_atom("unknown")) {
    result = SatResult::Unknown;
  } else {
    throw SolverError(error_message(response));
  }
  model_ready_ = result == SatResult::Sat;
  return result;
}

Model Session::get_model() {
  if (!model_ready_) throw NoModelAvailable();
  if (decls_.empty()) return Model{};

  SExpr response = request("(get-model)");
  if (response.has_head("error")) throw SolverError(error_message(response));
  Model model = parse_model_response(response, decls_);
  if (model.bindings.size() == decls_.size()) return model;

  // Solvers may omit constants the assertions leave unconstrained.
  std::string names;
  for (const auto& [name, sort] : decls_) {
    if (model.value(name) == nullptr) names += (names.empty() ? "" : " ") + name;
  }
  SExpr values = request("(get-value (" + names + "))");
  if (values.has_head("error")) throw SolverError(error_message(values));
  Model extra = parse_model_response(values, decls_);

  Model merged;
  for (const auto& [name, sort] : decls_) {
    const SExpr* v = model.value(name);
    if (v == nullptr) v = extra.value(name);
    if (v == nullptr) throw SolverError("solver returned no value for '" + name + "'");
    merged.bindings.emplace_back(name, *v);
    merged.sorts[name] = sort;
  }
  return merged;
}

Model parse_model_response(const SExpr& response,
                           const std::vector<std::pair<std::string, std::string>>& declarations) {
  std::map<std::string, SExpr> found;
  if (response.is_list()) {
    const auto& items = response.children();
    std::size_t start = response.has_head("model") ? 1 : 0;
    for (std::size_t i = start; i < items.size(); ++i) {
      const SExpr& item = items[i];
      if (!item.is_list()) continue;
      const auto& c = item.children();
      if (item.has_head("define-fun") && c.size() == 5 && c[1].is_atom() && c[2].is_list() &&
          c[2].children().empty()) {
        found.emplace(c[1].text(), c[4]);
      } else if (c.size() == 2 && c[0].is_atom()) {
        found.emplace(c[0].text(), c[1]);
      }
    }
  }
  Model model;
  for (const auto& [name, sort] : declarations) {
    auto it = found.find(name);
    if (it == found.end()) continue;
    model.bindings.emplace_back(name, it->second);
    model.sorts[name] = sort;
  }
  return model;
}

bool eval_under_model(const SExpr& formula, const Model& model, Session& session) {
  for (const auto& name : free_constants(formula)) {
    if (model.value(name) == nullptr) throw IncompleteModel(name);
  }
  std::vector<SExpr> assertions;
  for (const auto& [name, value] : model.bindings) {
    assertions.push_back(SExpr::list({SExpr::atom("="), SExpr::atom(name), value}));
  }
  assertions.push_back(SExpr::list({SExpr::atom("not"), formula}));
  switch (session.check_sat(assertions)) {
    case SatResult::Unsat: return true;
    case SatResult::Sat: return false;
    case SatResult::Unknown: break;
  }
  throw UnknownResult("solver could not evaluate " + print_sexpr(formula) + " under " +
                      model.str());
}

SExpr block_model(const Model& model) {
  if (model.empty()) throw EmptyModel();
  std::vector<SExpr> eqs;
  for (const auto& [name, value] : model.bindings) {
    eqs.push_back(SExpr::list({SExpr::atom("="), SExpr::atom(name), value}));
  }
  SExpr body = eqs.size() == 1 ? eqs.front() : [&] {
    SExpr::List conj{SExpr::atom("and")};
    for (auto& e : eqs) conj.push_back(std::move(e));
    return SExpr::list(std::move(conj));
  }();
  return SExpr::list({SExpr::atom("not"), std::move(body)});
}

}  // namespace forge::smtio
