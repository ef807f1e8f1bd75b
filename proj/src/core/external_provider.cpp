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

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <thread>

#include <json.hpp>

#include "error.hpp"
#include "segmentation.hpp"

extern char** environ;

namespace la3d::seg {

namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "la3d-provider-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) {
      fail(ErrorCode::kDetectorUnavailable,
           std::string("cannot create provider work directory: ") + std::strerror(errno));
    }
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string tail_of(const fs::path& file, std::size_t max_bytes) {
  std::ifstream in(file, std::ios::binary);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (s.size() > max_bytes) s = "..." + s.substr(s.size() - max_bytes);
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

[[noreturn]] void unavailable(const std::string& what, const fs::path& log) {
  std::string msg = "external provider " + what;
  const std::string diag = tail_of(log, 512);
  if (!diag.empty()) msg += "; provider output: " + diag;
  fail(ErrorCode::kDetectorUnavailable, msg);
}

}  // namespace

ExternalProvider::ExternalProvider(std::string command, std::chrono::milliseconds per_frame_timeout)
    : command_(std::move(command)), timeout_(per_frame_timeout) {
  if (command_.empty()) fail(ErrorCode::kInvalidArgument, "provider command is empty");
  if (timeout_.count() <= 0) fail(ErrorCode::kInvalidArgument, "provider timeout must be > 0");
}

ProviderResult ExternalProvider::segment(const Frame& frame, const std::string& frame_id) {
  const BatchItem item{&frame, frame_id};
  return std::move(segment_batch(std::span<const BatchItem>(&item, 1)).front());
}

std::vector<ProviderResult> ExternalProvider::segment_batch(std::span<const BatchItem> batch) {
  std::lock_guard<std::mutex> lock(mutex_);
  TempDir work;
  const fs::path in_dir = work.path() / "frames";
  const fs::path out_dir = work.path() / "sidecars";
  const fs::path manifest_path = work.path() / "manifest.json";
  const fs::path log_path = work.path() / "provider.log";
  fs::create_directories(in_dir);
  fs::create_directories(out_dir);

  nlohmann::json frames = nlohmann::json::array();
  for (const BatchItem& item : batch) {
    const fs::path p = in_dir / (item.frame_id + ".png");
    io::write_png(p, *item.frame);
    frames.push_back({{"frame_id", item.frame_id},
                      {"path", p.string()},
                      {"width", item.frame->width()},
                      {"height", item.frame->height()}});
  }
  {
    std::ofstream m(manifest_path);
    m << nlohmann::json{{"frames", frames}, {"output_dir", out_dir.string()}}.dump(2) << "\n";
  }

  const std::string script = command_ + " \"$@\"";
  const std::string manifest_arg = manifest_path.string();
  const std::string out_arg = out_dir.string();
  std::vector<char*> argv = {const_cast<char*>("/bin/sh"), const_cast<char*>("-c"),
                             const_cast<char*>(script.c_str()),
                             const_cast<char*>("la3d-provider"),
                             const_cast<char*>(manifest_arg.c_str()),
                             const_cast<char*>(out_arg.c_str()), nullptr};

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log_path.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  pid_t pid = -1;
  const int rc = posix_spawn(&pid, "/bin/sh", &actions, &attr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) unavailable(std::string("could not be started: ") + std::strerror(rc), log_path);

  const auto deadline = std::chrono::steady_clock::now() +
                        timeout_ * static_cast<long long>(std::max<std::size_t>(batch.size(), 1));
  int status = 0;
  for (;;) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) unavailable("could not be awaited", log_path);
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      unavailable("timed out after " + std::to_string(timeout_.count()) + " ms per frame",
                  log_path);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  if (WIFSIGNALED(status)) {
    unavailable("terminated by signal " + std::to_string(WTERMSIG(status)), log_path);
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    unavailable("exited with status " + std::to_string(WEXITSTATUS(status)), log_path);
  }

  std::vector<ProviderResult> results;
  results.reserve(batch.size());
  for (const BatchItem& item : batch) {
    try {
      results.push_back(read_sidecar(out_dir, item.frame_id));
    } catch (const Error& e) {
      unavailable(std::string("produced malformed output: ") + error_code_name(e.code()) + ": " +
                      e.what(),
                  log_path);
    }
  }
  return results;
}

std::unique_ptr<MaskProvider> external_provider(std::string command,
                                                std::chrono::milliseconds per_frame_timeout) {
  return std::make_unique<ExternalProvider>(std::move(command), per_frame_timeout);
}

}  // namespace la3d::seg
