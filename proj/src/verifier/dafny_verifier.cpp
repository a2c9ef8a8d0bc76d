#include <unistd.h>

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <random>

#include "dfyannot/util.hpp"
#include "dfyannot/verifier.hpp"

namespace dfyannot {

namespace {

// Process-wide cap on concurrently running verifier processes.
class WorkerGate {
 public:
  void acquire(int limit) {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return active_ < std::max(1, limit); });
    ++active_;
  }
  void release() {
    {
      std::lock_guard lock(mu_);
      --active_;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int active_ = 0;
};

WorkerGate& gate() {
  static WorkerGate g;
  return g;
}

std::filesystem::path tempProgramPath(const VerifierConfig& cfg) {
  static std::atomic<unsigned long> counter{0};
  thread_local std::mt19937_64 rng{std::random_device{}()};
  auto dir = cfg.tempDir.empty() ? std::filesystem::temp_directory_path() : cfg.tempDir;
  std::filesystem::create_directories(dir);
  auto name = "dfyannot-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
              std::to_string(rng() % 1000000) + ".dfy";
  return dir / name;
}

}  // namespace

std::string VerifierConfig::resolvedBinary() const {
  if (!binaryPath.empty()) return binaryPath;
  if (!binaryEnvVar.empty()) {
    if (const char* env = std::getenv(binaryEnvVar.c_str())) return env;
  }
  return {};
}

VerifierOutcome verify(const std::string& programText, const VerifierConfig& cfg) {
  VerifierOutcome outcome;
  auto binary = cfg.resolvedBinary();
  if (binary.empty()) {
    outcome.status = VerifierStatus::ToolError;
    outcome.exitDetail = "no verifier binary configured (set " + cfg.binaryEnvVar + ")";
    return outcome;
  }
  if (binary.find('/') != std::string::npos && ::access(binary.c_str(), X_OK) != 0) {
    outcome.status = VerifierStatus::ToolError;
    outcome.exitDetail = "verifier binary not executable: " + binary;
    return outcome;
  }

  auto path = tempProgramPath(cfg);
  writeFile(path, programText);

  auto limit = static_cast<long>(std::ceil(cfg.timeLimitSeconds));
  std::vector<std::string> argv = {binary, "verify", path.string(), "--verification-time-limit",
                                   std::to_string(std::max(1L, limit))};
  argv.insert(argv.end(), cfg.extraArgs.begin(), cfg.extraArgs.end());

  gate().acquire(cfg.maxWorkers);
  auto proc = runProcess(argv, cfg.timeLimitSeconds + cfg.graceSeconds);
  gate().release();

  if (!cfg.keepTempFiles) {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }

  if (!proc.launched) {
    outcome.status = VerifierStatus::ToolError;
    outcome.exitDetail = proc.error;
    return outcome;
  }
  if (proc.timedOut) {
    outcome.status = VerifierStatus::Timeout;
    outcome.rawOutput = proc.output;
    outcome.wallSeconds = std::max(proc.wallSeconds, cfg.timeLimitSeconds);
    return outcome;
  }
  outcome = parseVerifierOutput(proc.output, proc.exitCode, cfg.patterns());
  outcome.wallSeconds = proc.wallSeconds;
  return outcome;
}

}  // namespace dfyannot
