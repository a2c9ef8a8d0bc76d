#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "dfyannot/verifier.hpp"

namespace dfyannot {

namespace {

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }
  int get() const { return fd_; }
  void reset(int fd = -1) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
  }

 private:
  int fd_ = -1;
};

}  // namespace

ProcessResult runProcess(const std::vector<std::string>& argv, double timeoutSeconds) {
  using Clock = std::chrono::steady_clock;
  ProcessResult result;
  if (argv.empty()) {
    result.error = "empty command line";
    return result;
  }

  int out[2];
  int status[2];
  if (::pipe2(out, O_CLOEXEC) != 0 || ::pipe2(status, O_CLOEXEC) != 0) {
    result.error = std::string("pipe: ") + std::strerror(errno);
    return result;
  }
  Fd outRead(out[0]), outWrite(out[1]), statusRead(status[0]), statusWrite(status[1]);

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  auto start = Clock::now();
  pid_t pid = ::fork();
  if (pid < 0) {
    result.error = std::string("fork: ") + std::strerror(errno);
    return result;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(outWrite.get(), STDOUT_FILENO);
    ::dup2(outWrite.get(), STDERR_FILENO);
    ::execvp(args[0], args.data());
    int err = errno;
    [[maybe_unused]] auto n = ::write(statusWrite.get(), &err, sizeof(err));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  outWrite.reset();
  statusWrite.reset();

  int execErr = 0;
  if (::read(statusRead.get(), &execErr, sizeof(execErr)) == sizeof(execErr)) {
    ::waitpid(pid, nullptr, 0);
    result.error = std::string("exec ") + argv[0] + ": " + std::strerror(execErr);
    return result;
  }
  result.launched = true;

  ::fcntl(outRead.get(), F_SETFL, ::fcntl(outRead.get(), F_GETFL) | O_NONBLOCK);
  auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                              std::chrono::duration<double>(timeoutSeconds));
  char buf[8192];
  bool eof = false;
  while (!eof) {
    auto now = Clock::now();
    if (now >= deadline) {
      result.timedOut = true;
      break;
    }
    auto waitMs = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd pfd{outRead.get(), POLLIN, 0};
    int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(waitMs + 1, 1000)));
    if (rc < 0 && errno != EINTR) break;
    if (rc <= 0) continue;
    while (true) {
      auto n = ::read(outRead.get(), buf, sizeof(buf));
      if (n > 0) {
        result.output.append(buf, static_cast<std::size_t>(n));
        continue;
      }
      if (n == 0) eof = true;
      break;
    }
  }

  int wstatus = 0;
  if (!result.timedOut) {
    // Output closed; the child may still be running.
    while (true) {
      auto rc = ::waitpid(pid, &wstatus, WNOHANG);
      if (rc == pid || (rc < 0 && errno != EINTR)) break;
      if (Clock::now() >= deadline) {
        result.timedOut = true;
        break;
      }
      ::usleep(5000);
    }
  }
  if (result.timedOut) {
    ::kill(-pid, SIGKILL);
    ::waitpid(pid, &wstatus, 0);
  }
  result.wallSeconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (WIFEXITED(wstatus)) {
    result.exitCode = WEXITSTATUS(wstatus);
  } else if (WIFSIGNALED(wstatus)) {
    result.exitCode = 128 + WTERMSIG(wstatus);
  }
  return result;
}

}  // namespace dfyannot
