/*
 * Copyright 2026 The medsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <memory>
#include <string>

#include <unistd.h>

#include "medsim/case_io.hpp"
#include "medsim/providers.hpp"

namespace medsim::support {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(MEDSIM_FIXTURES_DIR) / name;
}

inline DisputeCase housing_case() { return read_json_file(fixture("housing_case.json")).get<DisputeCase>(); }

inline std::shared_ptr<ScriptedChatBackend> scripted(const std::string& script, bool strict = false) {
  return std::make_shared<ScriptedChatBackend>(ScriptBook::load(fixture("scripts/" + script), strict));
}

inline std::shared_ptr<ScriptedChatBackend> scripted(const nlohmann::json& book, bool strict) {
  return std::make_shared<ScriptedChatBackend>(ScriptBook::from_json(book, strict));
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("medsim_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Relative path -> file bytes for every regular file below `dir`.
inline std::map<std::string, std::string> read_tree(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[std::filesystem::relative(e.path(), dir).generic_string()] = ss.str();
  }
  return out;
}

}  // namespace medsim::support
