// Copyright (c) 2026 The respscreen Authors. All Rights Reserved.
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

#include <bit>
#include <cstdint>
#include <cstring>
#include <sstream>

#include "respscreen/error.hpp"
#include "respscreen/features.hpp"
#include "respscreen/text.hpp"

namespace respscreen {

namespace {

constexpr char kMagic[4] = {'R', 'S', 'F', 'V'};
constexpr std::uint32_t kBinaryVersion = 2;

static_assert(std::endian::native == std::endian::little,
              "binary feature files assume a little-endian host");

template <typename T>
void put(std::vector<char>& out, T v) {
  const auto* p = reinterpret_cast<const char*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    T v;
    std::memcpy(&v, take(sizeof(T)).data(), sizeof(T));
    return v;
  }
  std::string_view take(std::size_t n) {
    require(n <= bytes_.size() - pos_, ErrorKind::kFormat, "feature file truncated");
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const FeatureRow* FeatureTable::find(std::string_view id) const {
  for (const auto& r : rows) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::string feature_table_to_csv(const FeatureTable& table, std::string_view comment) {
  std::string out;
  if (!comment.empty()) {
    std::istringstream lines{std::string(comment)};
    for (std::string line; std::getline(lines, line);) out += "# " + line + "\n";
  }
  out += "id,modality,layout_id";
  for (const auto& n : table.dim_names) out += "," + n;
  out += "\n";
  for (const auto& row : table.rows) {
    require(row.values.size() == table.dim_names.size(), ErrorKind::kData,
            "feature row " + row.id + " has the wrong length");
    out += csv_field(row.id) + "," + std::string(modality_name(row.modality)) + "," + table.layout_id;
    for (double v : row.values) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

FeatureTable feature_table_from_csv(std::string_view text) {
  FeatureTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header && line.rfind("# ", 0) == 0) {
      table.comment += (table.comment.empty() ? "" : "\n") + line.substr(2);
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    auto f = split_fields(line);
    if (!header) {
      require(f.size() >= 3 && f[0] == "id" && f[1] == "modality" && f[2] == "layout_id",
              ErrorKind::kFormat, "feature file header must start with id,modality,layout_id");
      table.dim_names.assign(f.begin() + 3, f.end());
      header = true;
      continue;
    }
    require(f.size() == table.dim_names.size() + 3, ErrorKind::kData,
            "feature file line " + std::to_string(line_no) + ": expected " +
                std::to_string(table.dim_names.size() + 3) + " fields, got " +
                std::to_string(f.size()));
    if (table.layout_id.empty()) table.layout_id = f[2];
    require(f[2] == table.layout_id, ErrorKind::kData,
            "feature file mixes layouts " + table.layout_id + " and " + f[2]);
    FeatureRow row;
    row.id = f[0];
    row.modality = parse_modality(f[1]);
    row.values.reserve(table.dim_names.size());
    for (std::size_t i = 3; i < f.size(); ++i) row.values.push_back(parse_double(f[i]));
    table.rows.push_back(std::move(row));
  }
  require(header, ErrorKind::kFormat, "feature file has no header");
  return table;
}

std::vector<char> feature_table_to_binary(const FeatureTable& table, std::string_view comment) {
  std::vector<char> out(kMagic, kMagic + 4);
  put<std::uint32_t>(out, kBinaryVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(comment.size()));
  out.insert(out.end(), comment.begin(), comment.end());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(table.dim_names.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(table.layout_id.size()));
  out.insert(out.end(), table.layout_id.begin(), table.layout_id.end());
  put<std::uint64_t>(out, table.rows.size());
  for (const auto& row : table.rows) {
    require(row.values.size() == table.dim_names.size(), ErrorKind::kData,
            "feature row " + row.id + " has the wrong length");
    put<std::uint32_t>(out, static_cast<std::uint32_t>(row.id.size()));
    out.insert(out.end(), row.id.begin(), row.id.end());
    put<std::uint8_t>(out, static_cast<std::uint8_t>(row.modality));
    for (double v : row.values) put<double>(out, v);
  }
  return out;
}

FeatureTable feature_table_from_binary(std::string_view bytes) {
  Reader r(bytes);
  require(r.take(4) == std::string_view(kMagic, 4), ErrorKind::kFormat, "not a binary feature file");
  const auto version = r.get<std::uint32_t>();
  require(version == kBinaryVersion, ErrorKind::kFormat,
          "unsupported feature file version " + std::to_string(version));
  FeatureTable table;
  table.comment = std::string(r.take(r.get<std::uint32_t>()));
  const auto dims = r.get<std::uint32_t>();
  const auto layout_len = r.get<std::uint32_t>();
  table.layout_id = std::string(r.take(layout_len));
  // Binary files do not store names; the layout id names the dimensions.
  const auto& layout = feature_layout();
  if (table.layout_id == layout.id && dims == layout.size()) {
    for (const auto& d : layout.dims) table.dim_names.push_back(d.name);
  } else {
    for (std::uint32_t i = 0; i < dims; ++i) table.dim_names.push_back("f" + std::to_string(i));
  }
  const auto rows = r.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < rows; ++i) {
    FeatureRow row;
    const auto id_len = r.get<std::uint32_t>();
    row.id = std::string(r.take(id_len));
    const auto m = r.get<std::uint8_t>();
    require(m <= 2, ErrorKind::kFormat, "bad modality code in feature file");
    row.modality = static_cast<Modality>(m);
    row.values.resize(dims);
    for (auto& v : row.values) v = r.get<double>();
    table.rows.push_back(std::move(row));
  }
  require(r.done(), ErrorKind::kFormat, "trailing bytes in feature file");
  return table;
}

void save_feature_table(const FeatureTable& table, const std::filesystem::path& path,
                        std::string_view comment) {
  if (path.extension() == ".rsfv" || path.extension() == ".bin") {
    const auto bytes = feature_table_to_binary(table, comment);
    write_file(path.string(), std::string_view(bytes.data(), bytes.size()));
  } else {
    write_file(path.string(), feature_table_to_csv(table, comment));
  }
}

FeatureTable load_feature_table(const std::filesystem::path& path) {
  const auto bytes = read_file(path.string());
  if (bytes.size() >= 4 && std::string_view(bytes).substr(0, 4) == std::string_view(kMagic, 4)) {
    return feature_table_from_binary(bytes);
  }
  return feature_table_from_csv(bytes);
}

}  // namespace respscreen
