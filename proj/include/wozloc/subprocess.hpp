/* Copyright 2026 The wozloc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef WOZLOC_SUBPROCESS_HPP_
#define WOZLOC_SUBPROCESS_HPP_

#include <optional>
#include <string>

namespace wozloc {

// Child process with line-oriented stdin/stdout, for the newline-delimited
// JSON worker protocols. The command runs through /bin/sh -c.
class LineProcess {
 public:
  explicit LineProcess(const std::string& command);
  ~LineProcess();

  LineProcess(const LineProcess&) = delete;
  LineProcess& operator=(const LineProcess&) = delete;

  // Appends '\n'. Throws BackendError when the child is gone.
  void write_line(const std::string& line);
  // One line without the trailing '\n'; nullopt at EOF.
  std::optional<std::string> read_line();

  void close_stdin();
  // Waits for exit; returns the exit code (or -signal when killed).
  int wait();

 private:
  int in_fd_ = -1;   // writes to child stdin
  int out_fd_ = -1;  // reads from child stdout
  int pid_ = -1;
  std::string buffer_;
  bool eof_ = false;
};

}  // namespace wozloc

#endif  // WOZLOC_SUBPROCESS_HPP_
