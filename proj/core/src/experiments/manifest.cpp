// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/experiments/manifest.hpp"

#include <array>
#include <fstream>
#include <memory>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "longrun/error.hpp"

namespace longrun::experiments {

namespace {

constexpr const char* kManifestName = "manifest.json";

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1)
      throw Error("SHA-256 initialization failed");
  }
  void update(const char* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw Error("SHA-256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1)
      throw Error("SHA-256 finalization failed");
    std::string out;
    for (unsigned i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument(fmt::format("cannot read '{}'", path.string()));
  Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "longrun";
  j["version"] = tool_version;
  j["created"] = created;
  if (seed) j["seed"] = *seed;
  if (config_sha256) j["config_sha256"] = *config_sha256;
  nlohmann::ordered_json f = nlohmann::ordered_json::object();
  for (const auto& [name, hash] : files) f[name] = hash;
  j["files"] = f;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.tool_version = j.at("version").get<std::string>();
    m.created = j.at("created").get<std::string>();
    if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("config_sha256")) m.config_sha256 = j.at("config_sha256").get<std::string>();
    for (const auto& [name, hash] : j.at("files").items()) m.files[name] = hash.get<std::string>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(fmt::format("malformed manifest: {}", e.what()));
  }
}

RunManifest build_manifest(const std::filesystem::path& dir, std::string created) {
  if (!std::filesystem::is_directory(dir))
    throw InvalidArgument(fmt::format("output directory '{}' does not exist", dir.string()));
  RunManifest m;
  m.created = std::move(created);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name == kManifestName) continue;
    m.files[name] = sha256_file(entry.path());
  }
  return m;
}

ManifestCheck verify_manifest(const RunManifest& manifest, const std::filesystem::path& dir) {
  ManifestCheck check;
  for (const auto& [name, hash] : manifest.files) {
    const auto path = dir / name;
    if (!std::filesystem::is_regular_file(path)) {
      check.missing.push_back(name);
    } else if (sha256_file(path) != hash) {
      check.mismatched.push_back(name);
    }
  }
  return check;
}

}  // namespace longrun::experiments
