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

#include "forest_embed/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "forest_embed/error.hpp"

namespace forest_embed {

namespace {

constexpr std::array<char, 5> kMagic = {'H', 'S', 'C', 'K', '1'};

void put_u64(std::ostream& out, std::uint64_t x) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((x >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw ValidationError("checkpoint: truncated");
  }
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return x;
}

void put_doubles(std::ostream& out, const double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * 8));
    return;
  }
  for (std::size_t i = 0; i < n; ++i) put_u64(out, std::bit_cast<std::uint64_t>(data[i]));
}

void get_doubles(std::istream& in, double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    if (!in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * 8))) {
      throw ValidationError("checkpoint: truncated");
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) data[i] = std::bit_cast<double>(get_u64(in));
}

}  // namespace

void write_checkpoint(std::ostream& out, const Model& model) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, static_cast<std::uint64_t>(model.dictionary.rows()));
  put_u64(out, static_cast<std::uint64_t>(model.codes.cols()));
  put_u64(out, static_cast<std::uint64_t>(model.codes.rows()));
  put_u64(out, model.iteration);
  put_doubles(out, model.dictionary.data(), static_cast<std::size_t>(model.dictionary.size()));
  put_doubles(out, model.codes.data(), static_cast<std::size_t>(model.codes.size()));
}

Model read_checkpoint(std::istream& in) {
  std::array<char, 5> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ValidationError("checkpoint: bad magic");
  }
  const auto c = get_u64(in);
  const auto v = get_u64(in);
  const auto m = get_u64(in);
  Model model;
  model.iteration = get_u64(in);
  if (m == 0 || c > (std::uint64_t{1} << 32) || v > (std::uint64_t{1} << 32) || m > (1u << 20)) {
    throw ValidationError("checkpoint: implausible shape");
  }
  model.dictionary.resize(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(m));
  model.codes.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(v));
  get_doubles(in, model.dictionary.data(), static_cast<std::size_t>(model.dictionary.size()));
  get_doubles(in, model.codes.data(), static_cast<std::size_t>(model.codes.size()));
  return model;
}

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    write_checkpoint(out, model);
    if (!out) throw ValidationError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace forest_embed
