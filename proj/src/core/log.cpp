// Copyright 2026 The LA3D Authors
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

#include "log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace la3d::log {
namespace {

Level initial_level() {
  Level l = Level::kWarn;
  if (const char* env = std::getenv("LA3D_LOG_LEVEL")) parse_level(env, l);
  return l;
}

std::atomic<int>& current() {
  static std::atomic<int> value{static_cast<int>(initial_level())};
  return value;
}

const char* tag(Level l) {
  switch (l) {
    case Level::kError: return "error";
    case Level::kWarn: return "warn";
    case Level::kInfo: return "info";
    case Level::kDebug: return "debug";
  }
  return "?";
}

}  // namespace

Level level() noexcept { return static_cast<Level>(current().load()); }
void set_level(Level l) noexcept { current().store(static_cast<int>(l)); }

bool parse_level(const std::string& text, Level& out) noexcept {
  for (Level l : {Level::kError, Level::kWarn, Level::kInfo, Level::kDebug}) {
    if (text == tag(l)) {
      out = l;
      return true;
    }
  }
  return false;
}

void write(Level l, const std::string& message) {
  if (static_cast<int>(l) > current().load()) return;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::fprintf(stderr, "la3d [%s] %s\n", tag(l), message.c_str());
}

}  // namespace la3d::log
