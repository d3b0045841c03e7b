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

#include "forge/process.hpp"

#include <errno.h>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <string.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

extern char** environ;

namespace forge {

namespace {

// Time reserved for reaping after SIGKILL so that elapsed <= timeout + grace.
constexpr std::chrono::milliseconds kReapMargin{50};

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void close_fd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

void set_nonblocking(int fd) {
  int flags = ::fcntl(fd, F_GETFL);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

std::vector<std::string> build_environment(const Subprocess::Env& extra) {
  std::map<std::string, std::string> vars;
  std::vector<std::string> order;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    std::string entry(*e);
    auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    vars[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  for (const auto& [k, v] : extra) vars[k] = v;
  std::vector<std::string> out;
  out.reserve(vars.size());
  for (const auto& [k, v] : vars) out.push_back(k + "=" + v);
  return out;
}

int decode_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

}  // namespace

Subprocess Subprocess::spawn(const std::vector<std::string>& argv,
                             const Env& extra_env) {
  if (argv.empty() || argv.front().empty()) {
    throw SpawnError("empty command");
  }
  ignore_sigpipe_once();

  // Everything the child touches is prepared before fork: only
  // async-signal-safe calls are allowed between fork and exec.
  std::vector<std::string> env_strings = build_environment(extra_env);
  std::vector<char*> envp;
  for (auto& s : env_strings) envp.push_back(s.data());
  envp.push_back(nullptr);
  std::vector<std::string> args = argv;
  std::vector<char*> argp;
  for (auto& s : args) argp.push_back(s.data());
  argp.push_back(nullptr);

  int in[2], out[2], err[2], status_pipe[2];
  if (::pipe2(in, O_CLOEXEC) != 0) throw SpawnError(strerror(errno));
  if (::pipe2(out, O_CLOEXEC) != 0) {
    int e = errno;
    ::close(in[0]), ::close(in[1]);
    throw SpawnError(strerror(e));
  }
  if (::pipe2(err, O_CLOEXEC) != 0) {
    int e = errno;
    ::close(in[0]), ::close(in[1]), ::close(out[0]), ::close(out[1]);
    throw SpawnError(strerror(e));
  }
  if (::pipe2(status_pipe, O_CLOEXEC) != 0) {
    int e = errno;
    for (int fd : {in[0], in[1], out[0], out[1], err[0], err[1]}) ::close(fd);
    throw SpawnError(strerror(e));
  }

  pid_t pid = ::fork();
  if (pid < 0) {
    int e = errno;
    for (int fd : {in[0], in[1], out[0], out[1], err[0], err[1], status_pipe[0],
                   status_pipe[1]}) {
      ::close(fd);
    }
    throw SpawnError(strerror(e));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::signal(SIGPIPE, SIG_DFL);
    sigset_t none;
    sigemptyset(&none);
    ::sigprocmask(SIG_SETMASK, &none, nullptr);
    ::dup2(in[0], STDIN_FILENO);
    ::dup2(out[1], STDOUT_FILENO);
    ::dup2(err[1], STDERR_FILENO);
    ::execvpe(argp[0], argp.data(), envp.data());
    int e = errno;
    ssize_t ignored = ::write(status_pipe[1], &e, sizeof e);
    (void)ignored;
    ::_exit(127);
  }

  ::setpgid(pid, pid);
  ::close(in[0]);
  ::close(out[1]);
  ::close(err[1]);
  ::close(status_pipe[1]);

  int child_errno = 0;
  ssize_t n;
  do {
    n = ::read(status_pipe[0], &child_errno, sizeof child_errno);
  } while (n < 0 && errno == EINTR);
  ::close(status_pipe[0]);
  if (n == sizeof child_errno) {
    int status = 0;
    ::waitpid(pid, &status, 0);
    ::close(in[1]), ::close(out[0]), ::close(err[0]);
    throw SpawnError(argv.front() + ": " + strerror(child_errno));
  }

  Subprocess p;
  p.pid_ = pid;
  p.in_ = in[1];
  p.out_ = out[0];
  p.err_ = err[0];
  return p;
}

Subprocess::Subprocess(Subprocess&& other) noexcept
    : pid_(std::exchange(other.pid_, -1)),
      in_(std::exchange(other.in_, -1)),
      out_(std::exchange(other.out_, -1)),
      err_(std::exchange(other.err_, -1)),
      exit_code_(std::exchange(other.exit_code_, std::nullopt)) {}

Subprocess& Subprocess::operator=(Subprocess&& other) noexcept {
  if (this != &other) {
    release();
    pid_ = std::exchange(other.pid_, -1);
    in_ = std::exchange(other.in_, -1);
    out_ = std::exchange(other.out_, -1);
    err_ = std::exchange(other.err_, -1);
    exit_code_ = std::exchange(other.exit_code_, std::nullopt);
  }
  return *this;
}

Subprocess::~Subprocess() { release(); }

void Subprocess::release() {
  close_fd(in_);
  close_fd(out_);
  close_fd(err_);
  if (pid_ > 0 && !exit_code_) {
    ::kill(-pid_, SIGKILL);
    int status = 0;
    while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
  }
  pid_ = -1;
}

void Subprocess::close_stdin() { close_fd(in_); }
void Subprocess::close_stdout() { close_fd(out_); }
void Subprocess::close_stderr() { close_fd(err_); }

void Subprocess::signal_group(int sig) {
  if (pid_ > 0) ::kill(-pid_, sig);
}

std::optional<int> Subprocess::try_wait() {
  if (exit_code_) return exit_code_;
  if (pid_ <= 0) return std::nullopt;
  int status = 0;
  pid_t r = ::waitpid(pid_, &status, WNOHANG);
  if (r == pid_) exit_code_ = decode_status(status);
  return exit_code_;
}

ProcessRun run_process(const std::vector<std::string>& argv,
                       const std::string& input, const RunLimits& limits,
                       const Subprocess::Env& extra_env) {
  using clock = std::chrono::steady_clock;
  using std::chrono::milliseconds;

  ProcessRun run;
  const auto start = clock::now();
  Subprocess proc = Subprocess::spawn(argv, extra_env);

  const auto term_at = start + limits.timeout;
  const auto kill_at =
      std::max(term_at, start + limits.timeout + limits.grace - kReapMargin);

  int in = proc.stdin_fd();
  set_nonblocking(in);
  set_nonblocking(proc.stdout_fd());
  set_nonblocking(proc.stderr_fd());
  std::size_t written = 0;
  if (input.empty()) proc.close_stdin();

  bool term_sent = false;
  bool kill_sent = false;
  std::optional<clock::time_point> exited_at;
  char buf[65536];

  auto drain = [&](int fd, std::string& sink, bool limit) -> bool {
    for (;;) {
      ssize_t n = ::read(fd, buf, sizeof buf);
      if (n > 0) {
        std::size_t take = static_cast<std::size_t>(n);
        if (limit && sink.size() + take > limits.max_output) {
          take = limits.max_output - std::min(limits.max_output, sink.size());
          run.out_truncated = true;
        }
        sink.append(buf, take);
        continue;
      }
      if (n == 0) return false;  // EOF
      if (errno == EINTR) continue;
      return true;  // EAGAIN: still open
    }
  };

  for (;;) {
    auto now = clock::now();
    if (!exited_at && proc.try_wait()) exited_at = now;

    if (!exited_at) {
      if (!term_sent && now >= term_at) {
        proc.signal_group(SIGTERM);
        term_sent = true;
        run.timed_out = true;
      }
      if (!kill_sent && now >= kill_at) {
        proc.signal_group(SIGKILL);
        kill_sent = true;
      }
    } else if (proc.stdout_fd() < 0 && proc.stderr_fd() < 0) {
      break;
    } else if (now >= kill_at || (now >= term_at && !term_sent)) {
      // The child is gone but something it spawned still holds the pipes.
      proc.signal_group(SIGKILL);
      break;
    }

    std::vector<pollfd> fds;
    if (proc.stdin_fd() >= 0) fds.push_back({proc.stdin_fd(), POLLOUT, 0});
    if (proc.stdout_fd() >= 0) fds.push_back({proc.stdout_fd(), POLLIN, 0});
    if (proc.stderr_fd() >= 0) fds.push_back({proc.stderr_fd(), POLLIN, 0});

    auto next = term_sent ? kill_at : term_at;
    if (exited_at) next = kill_at;
    auto wait = std::chrono::duration_cast<milliseconds>(next - now);
    int wait_ms = static_cast<int>(
        std::clamp<long long>(wait.count() + 1, 0, fds.empty() ? 2 : 50));

    if (fds.empty()) {
      std::this_thread::sleep_for(milliseconds(wait_ms));
      continue;
    }
    int rc = ::poll(fds.data(), fds.size(), wait_ms);
    if (rc < 0 && errno != EINTR) break;
    if (rc <= 0) continue;

    for (const auto& p : fds) {
      if (p.revents == 0) continue;
      if (p.fd == proc.stdin_fd()) {
        if (p.revents & (POLLERR | POLLHUP)) {
          proc.close_stdin();
          continue;
        }
        ssize_t n = ::write(p.fd, input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if ((n < 0 && errno != EAGAIN && errno != EINTR) ||
            written == input.size()) {
          proc.close_stdin();
        }
      } else if (p.fd == proc.stdout_fd()) {
        if (!drain(p.fd, run.out, true)) proc.close_stdout();
      } else if (p.fd == proc.stderr_fd()) {
        if (!drain(p.fd, run.err, false)) proc.close_stderr();
      }
    }
  }

  while (!proc.try_wait()) {
    std::this_thread::sleep_for(milliseconds(1));
    if (clock::now() >= kill_at && !kill_sent) {
      proc.signal_group(SIGKILL);
      kill_sent = true;
    }
  }
  if (!exited_at) exited_at = clock::now();
  run.exit_code = proc.try_wait();
  run.elapsed = std::chrono::duration_cast<milliseconds>(*exited_at - start);
  return run;
}

}  // namespace forge
