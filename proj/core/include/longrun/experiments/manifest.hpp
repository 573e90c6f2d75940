// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace longrun::experiments {

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

struct RunManifest {
  std::string tool_version;
  std::string created;  ///< UTC, ISO 8601
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config_sha256;
  std::map<std::string, std::string> files;  ///< name -> sha256

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

/// Every regular file in `dir` except manifest.json, by name.
RunManifest build_manifest(const std::filesystem::path& dir, std::string created);

struct ManifestCheck {
  std::vector<std::string> missing;
  std::vector<std::string> mismatched;
  bool ok() const noexcept { return missing.empty() && mismatched.empty(); }
};

ManifestCheck verify_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

}  // namespace longrun::experiments
