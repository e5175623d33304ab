#pragma once

#include <chrono>
#include <string>
#include <sys/types.h>

#include "synguar/oracle.hpp"

namespace synguar {

/// Runs a shell command as a long-lived child speaking JSON lines:
/// `{"inputs": {...}}` in, `{"output": ...}` out, `exit` to stop.
class CommandTarget : public Target
{
 public:
  CommandTarget(std::string command, Sort output_sort,
                std::chrono::milliseconds timeout = std::chrono::seconds(10));
  ~CommandTarget() override;
  CommandTarget(const CommandTarget&) = delete;
  CommandTarget& operator=(const CommandTarget&) = delete;

  /// Throws ProtocolError, TargetTimeout or TargetExited.
  Value run(const Env& env) override;

  /// Sends `exit` and waits; returns the exit status, or -1 if the child had
  /// to be killed or was never started.
  int shutdown();

 private:
  void start();
  void kill_child();
  std::string read_line(const std::string& input_json);

  std::string d_command;
  Sort d_output_sort;
  std::chrono::milliseconds d_timeout;
  pid_t d_pid = -1;
  int d_to_child = -1;
  int d_from_child = -1;
  std::string d_buffer;
};

}  // namespace synguar
