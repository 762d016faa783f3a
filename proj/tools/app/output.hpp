// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "json.hpp"

namespace pcqed::app {

/// Column-major numeric table written as CSV with '#' comment lines on top.
struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> columns;  // names carry units, e.g. "hw_eV"
  std::vector<std::vector<double>> data;  // data[c][row]

  void add(std::string name, std::vector<double> values);
  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
};

std::string format_csv(const Table& table);

/// Lowercase hex SHA-256 of a byte string / file.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Files are written into a hidden staging directory inside `dir` and moved into place by
/// commit(); if the set is destroyed without commit() the staging directory is removed, so a
/// failed run leaves no partial outputs behind.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);
  ~OutputSet();
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  void write_csv(const std::string& name, const Table& table);
  void write_json(const std::string& name, const nlohmann::json& value);
  void write_text(const std::string& name, const std::string& text);

  /// (relative name, sha256, bytes) for every file written so far, in write order.
  nlohmann::json file_list() const;

  void commit();
  const std::filesystem::path& directory() const { return dir_; }

 private:
  struct Entry {
    std::string name;
    std::string sha256;
    std::size_t bytes;
  };

  std::filesystem::path dir_;
  std::filesystem::path staging_;
  std::vector<Entry> entries_;
  bool committed_ = false;
};

/// Recomputes every checksum listed in dir/manifest.json. Returns the names that differ or are
/// missing (empty on success).
std::vector<std::string> check_manifest(const std::filesystem::path& dir);

}  // namespace pcqed::app
