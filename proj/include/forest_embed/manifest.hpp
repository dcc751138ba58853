// Copyright 2026 The forest-embed Authors. All Rights Reserved.
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

#ifndef FOREST_EMBED_MANIFEST_HPP_
#define FOREST_EMBED_MANIFEST_HPP_

// Pipeline manifest: which stage produced which file, with content hashes so a
// stage can refuse inputs that changed after they were recorded.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace forest_embed {

// Lowercase hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

class PipelineManifest {
 public:
  static PipelineManifest load_or_create(const std::filesystem::path& path);

  const std::filesystem::path& path() const { return path_; }
  const nlohmann::json& data() const { return data_; }

  // Throws ValidationError naming `input` when it is missing, or when its hash
  // differs from the one recorded for it as an artifact or as a stage input.
  // Returns its hash.
  std::string verify_input(const std::filesystem::path& input) const;

  // Hash of the artifact recorded under `name`, or empty.
  std::string artifact_hash(const std::string& name) const;
  std::string artifact_path(const std::string& name) const;

  // Replaces the stage's entry and its output artifacts, then writes the file.
  void record_stage(const std::string& stage,
                    const std::vector<std::filesystem::path>& inputs,
                    const std::vector<std::pair<std::string, std::filesystem::path>>& outputs,
                    const nlohmann::json& config);

  void save() const;

 private:
  std::filesystem::path path_;
  nlohmann::json data_;
};

}  // namespace forest_embed

#endif  // FOREST_EMBED_MANIFEST_HPP_
