#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace afc {

// Process exit codes used by the CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // analysis/runtime failure (e.g. no shedding peak)
  kExitConfig = 2,
  kExitDivergence = 3,
  kExitWorker = 4,
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergenceError : std::runtime_error {
  std::uint64_t step;
  DivergenceError(std::uint64_t step_, const std::string& msg)
      : std::runtime_error(msg), step(step_) {}
};

struct WorkerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace afc
