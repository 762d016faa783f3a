// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "app/output.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pcqed::app {

namespace fs = std::filesystem;

void Table::add(std::string name, std::vector<double> values) {
  if (!data.empty() && values.size() != rows()) {
    throw std::logic_error("column " + name + " has " + std::to_string(values.size()) +
                           " rows, table has " + std::to_string(rows()));
  }
  columns.push_back(std::move(name));
  data.push_back(std::move(values));
}

std::string format_csv(const Table& t) {
  std::string out;
  for (const auto& c : t.comments) out += "# " + c + "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += "\n";
  char buf[32];
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.data.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.12e", t.data[c][r]);
      if (c) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

OutputSet::OutputSet(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
  staging_ = dir_ / ".partial";
  fs::remove_all(staging_);
  fs::create_directories(staging_);
}

OutputSet::~OutputSet() {
  if (!committed_) {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
}

void OutputSet::write_text(const std::string& name, const std::string& text) {
  const auto path = staging_ / name;
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
  entries_.push_back({name, sha256_hex(text), text.size()});
}

void OutputSet::write_csv(const std::string& name, const Table& table) {
  write_text(name, format_csv(table));
}

void OutputSet::write_json(const std::string& name, const nlohmann::json& value) {
  write_text(name, value.dump(2) + "\n");
}

nlohmann::json OutputSet::file_list() const {
  auto list = nlohmann::json::array();
  for (const auto& e : entries_) {
    list.push_back({{"path", e.name}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  }
  return list;
}

void OutputSet::commit() {
  for (const auto& e : entries_) {
    const auto target = dir_ / e.name;
    fs::create_directories(target.parent_path());
    fs::rename(staging_ / e.name, target);
  }
  fs::remove_all(staging_);
  committed_ = true;
}

std::vector<std::string> check_manifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw std::runtime_error("no manifest.json in " + dir.string());
  const auto manifest = nlohmann::json::parse(in);
  std::vector<std::string> bad;
  for (const auto& f : manifest.at("files")) {
    const auto name = f.at("path").get<std::string>();
    const auto path = dir / name;
    if (!fs::exists(path) || sha256_file(path) != f.at("sha256").get<std::string>()) {
      bad.push_back(name);
    }
  }
  return bad;
}

}  // namespace pcqed::app
