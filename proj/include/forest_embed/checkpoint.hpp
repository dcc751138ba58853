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

#ifndef FOREST_EMBED_CHECKPOINT_HPP_
#define FOREST_EMBED_CHECKPOINT_HPP_

// Binary checkpoint: magic "HSCK1", then C, V, M and the iteration as uint64,
// then D row-major and A column-major as float64. Little-endian throughout.

#include <filesystem>
#include <iosfwd>

#include "forest_embed/trainer.hpp"

namespace forest_embed {

void write_checkpoint(std::ostream& out, const Model& model);
Model read_checkpoint(std::istream& in);

// Writes to a sibling temp file and renames it into place.
void save_checkpoint(const std::filesystem::path& path, const Model& model);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace forest_embed

#endif  // FOREST_EMBED_CHECKPOINT_HPP_
