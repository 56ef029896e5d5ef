// Copyright 2026 The Pearlkit Authors
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

#pragma once

#include <sstream>
#include <string>

namespace pearlkit {

enum class LogLevel { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3 };

// Threshold comes from the PEARLKIT_LOG environment variable
// (debug|info|warn|error); default is info. Messages go to stderr so stdout
// stays clean for machine-readable command output.
LogLevel log_threshold();
void log_message(LogLevel level, const std::string& msg);

namespace detail {
inline void log_fmt(std::ostringstream&) {}
template <class T, class... Rest>
void log_fmt(std::ostringstream& os, const T& first, const Rest&... rest) {
  os << first;
  log_fmt(os, rest...);
}
}  // namespace detail

template <class... Args>
void log(LogLevel level, const Args&... args) {
  if (level < log_threshold()) return;
  std::ostringstream os;
  detail::log_fmt(os, args...);
  log_message(level, os.str());
}

template <class... Args>
void log_debug(const Args&... args) {
  log(LogLevel::kDebug, args...);
}
template <class... Args>
void log_info(const Args&... args) {
  log(LogLevel::kInfo, args...);
}
template <class... Args>
void log_warn(const Args&... args) {
  log(LogLevel::kWarn, args...);
}
template <class... Args>
void log_error(const Args&... args) {
  log(LogLevel::kError, args...);
}

}  // namespace pearlkit
