#include "synguar/external_target.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "synguar/errors.hpp"

namespace synguar {

namespace {

void write_all(int fd, std::string_view data)
{
  while (!data.empty())
  {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0)
    {
      if (errno == EINTR) continue;
      throw TargetExited(std::string("write to target failed: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

CommandTarget::CommandTarget(std::string command, Sort output_sort,
                             std::chrono::milliseconds timeout)
    : d_command(std::move(command)), d_output_sort(output_sort), d_timeout(timeout)
{
}

CommandTarget::~CommandTarget()
{
  shutdown();
}

void CommandTarget::start()
{
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw TargetExited("pipe failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0)
  {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TargetExited("pipe failed");
  }
  pid_t pid = ::fork();
  if (pid < 0)
  {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw TargetExited("fork failed");
  }
  if (pid == 0)
  {
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", d_command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  d_pid = pid;
  d_to_child = in_pipe[1];
  d_from_child = out_pipe[0];
  d_buffer.clear();
  std::signal(SIGPIPE, SIG_IGN);
}

std::string CommandTarget::read_line(const std::string& input_json)
{
  auto deadline = std::chrono::steady_clock::now() + d_timeout;
  for (;;)
  {
    if (auto nl = d_buffer.find('\n'); nl != std::string::npos)
    {
      std::string line = d_buffer.substr(0, nl);
      d_buffer.erase(0, nl + 1);
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0)
    {
      kill_child();
      throw TargetTimeout("target did not answer within "
                              + std::to_string(d_timeout.count()) + " ms",
                          input_json);
    }
    pollfd p{d_from_child, POLLIN, 0};
    int r = ::poll(&p, 1, static_cast<int>(left.count()));
    if (r < 0 && errno == EINTR) continue;
    if (r == 0) continue;
    char chunk[4096];
    ssize_t n = ::read(d_from_child, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0)
    {
      int status = 0;
      ::close(d_to_child);
      ::close(d_from_child);
      d_to_child = d_from_child = -1;
      ::waitpid(d_pid, &status, 0);
      d_pid = -1;
      std::string how = WIFEXITED(status)
                            ? "exited with status " + std::to_string(WEXITSTATUS(status))
                            : "was killed by a signal";
      throw TargetExited("target " + how + " before answering", input_json);
    }
    d_buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

Value CommandTarget::run(const Env& env)
{
  if (d_pid < 0) start();
  std::string input_json = env_to_json(env).dump();
  std::string request = nlohmann::json{{"inputs", env_to_json(env)}}.dump() + "\n";
  try
  {
    write_all(d_to_child, request);
  }
  catch (const TargetExited&)
  {
    kill_child();
    throw TargetExited("target closed its input", input_json);
  }
  std::string line = read_line(input_json);
  nlohmann::json response;
  try
  {
    response = nlohmann::json::parse(line);
  }
  catch (const nlohmann::json::parse_error&)
  {
    throw ProtocolError("target response is not JSON: " + line, input_json);
  }
  if (!response.is_object() || !response.contains("output"))
  {
    throw ProtocolError("target response lacks \"output\": " + line, input_json);
  }
  try
  {
    return value_from_json(response["output"], d_output_sort, "output");
  }
  catch (const InputError& e)
  {
    throw ProtocolError(std::string("target response: ") + e.what(), input_json);
  }
}

void CommandTarget::kill_child()
{
  if (d_pid < 0) return;
  ::kill(-d_pid, SIGKILL);
  ::waitpid(d_pid, nullptr, 0);
  if (d_to_child >= 0) ::close(d_to_child);
  if (d_from_child >= 0) ::close(d_from_child);
  d_pid = -1;
  d_to_child = d_from_child = -1;
}

int CommandTarget::shutdown()
{
  if (d_pid < 0) return -1;
  try
  {
    write_all(d_to_child, "exit\n");
  }
  catch (const TargetExited&)
  {
  }
  ::close(d_to_child);
  d_to_child = -1;
  auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(2);
  int status = 0;
  while (std::chrono::steady_clock::now() < deadline)
  {
    pid_t r = ::waitpid(d_pid, &status, WNOHANG);
    if (r == d_pid)
    {
      ::close(d_from_child);
      d_from_child = -1;
      d_pid = -1;
      return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    ::usleep(2000);
  }
  kill_child();
  return -1;
}

}  // namespace synguar
