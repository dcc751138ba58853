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

#include "forest_embed/manifest.hpp"

#include <array>
#include <memory>
#include <chrono>
#include <ctime>
#include <fstream>

#include <openssl/evp.h>

#include "forest_embed/error.hpp"

namespace forest_embed {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string canonical_string(const fs::path& p) { return fs::weakly_canonical(p).string(); }

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("missing input: " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

PipelineManifest PipelineManifest::load_or_create(const fs::path& path) {
  PipelineManifest m;
  m.path_ = path;
  if (fs::exists(path)) {
    std::ifstream in(path);
    try {
      m.data_ = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("manifest " + path.string() + ": " + e.what());
    }
  } else {
    m.data_ = {{"artifacts", nlohmann::json::object()}, {"stages", nlohmann::json::object()}};
  }
  return m;
}

std::string PipelineManifest::verify_input(const fs::path& input) const {
  if (!fs::exists(input)) throw ValidationError("missing input: " + input.string());
  const auto hash = sha256_file(input);
  const auto key = canonical_string(input);
  for (const auto& [name, art] : data_["artifacts"].items()) {
    if (art.value("path", "") == key && art.value("sha256", "") != hash) {
      throw ValidationError("stale input: " + input.string() + " changed since stage '" +
                            art.value("stage", "") + "' wrote it");
    }
  }
  for (const auto& [stage, entry] : data_["stages"].items()) {
    if (!entry.contains("inputs")) continue;
    const auto& inputs = entry["inputs"];
    if (inputs.contains(key) && inputs[key].get<std::string>() != hash) {
      throw ValidationError("stale input: " + input.string() + " changed since stage '" + stage +
                            "' read it");
    }
  }
  return hash;
}

std::string PipelineManifest::artifact_hash(const std::string& name) const {
  const auto& arts = data_["artifacts"];
  return arts.contains(name) ? arts[name].value("sha256", "") : "";
}

std::string PipelineManifest::artifact_path(const std::string& name) const {
  const auto& arts = data_["artifacts"];
  return arts.contains(name) ? arts[name].value("path", "") : "";
}

void PipelineManifest::record_stage(
    const std::string& stage, const std::vector<fs::path>& inputs,
    const std::vector<std::pair<std::string, fs::path>>& outputs,
    const nlohmann::json& config) {
  nlohmann::json entry;
  entry["timestamp"] = utc_now();
  entry["config"] = config;
  entry["inputs"] = nlohmann::json::object();
  for (const auto& in : inputs) entry["inputs"][canonical_string(in)] = sha256_file(in);
  entry["outputs"] = nlohmann::json::array();
  for (const auto& [name, out] : outputs) {
    data_["artifacts"][name] = {
        {"path", canonical_string(out)}, {"sha256", sha256_file(out)}, {"stage", stage}};
    entry["outputs"].push_back(name);
  }
  data_["stages"][stage] = entry;
  save();
}

void PipelineManifest::save() const {
  if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
  auto tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << data_.dump(2) << '\n';
  }
  fs::rename(tmp, path_);
}

}  // namespace forest_embed
