// Copyright 2026 The latebench Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// MVIX0001 on-disk layout (all integers little-endian u64):
//
//   header    magic "MVIX0001" | mode | precision | dim | doc_count
//   id table  doc_count x { id_len | id bytes | rows | offset | length }
//   payload   per document, at `offset` from the start of the file
//
// See docs/index_format.md for the per-precision payload encodings.

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "latebench/error.hpp"
#include "latebench/index.hpp"
#include "little_endian.hpp"

namespace latebench {
namespace {

constexpr std::array<char, 8> kMagic = {'M', 'V', 'I', 'X', '0', '0', '0', '1'};
constexpr std::uint64_t kHeaderBytes = 8 + 4 * 8;
// Guards against allocating absurd sizes from a corrupt header.
constexpr std::uint64_t kMaxIdBytes = 1 << 20;

std::uint64_t table_bytes(std::span<const CorpusIndex::Entry> entries) {
  std::uint64_t n = 0;
  for (const auto& e : entries) n += 8 + e.id.size() + 3 * 8;
  return n;
}

std::uint64_t read_u64(std::istream& in, const char* what) {
  std::array<std::byte, 8> buf{};
  if (!in.read(reinterpret_cast<char*>(buf.data()), 8)) {
    throw ParseError(std::string("truncated index file while reading ") + what);
  }
  return le::get_u64(buf.data());
}

}  // namespace

std::uint64_t CorpusIndex::serialized_size() const {
  std::uint64_t n = kHeaderBytes + table_bytes(entries_);
  for (const auto& e : entries_) n += e.payload.size();
  return n;
}

void CorpusIndex::save(std::ostream& out) const {
  std::vector<std::byte> head;
  head.reserve(kHeaderBytes + table_bytes(entries_));
  for (char c : kMagic) head.push_back(static_cast<std::byte>(c));
  le::put_u64(head, static_cast<std::uint64_t>(mode_));
  le::put_u64(head, static_cast<std::uint64_t>(precision_));
  le::put_u64(head, dim_);
  le::put_u64(head, entries_.size());

  std::uint64_t offset = kHeaderBytes + table_bytes(entries_);
  for (const auto& e : entries_) {
    le::put_u64(head, e.id.size());
    for (char c : e.id) head.push_back(static_cast<std::byte>(c));
    le::put_u64(head, e.rows);
    le::put_u64(head, offset);
    le::put_u64(head, e.payload.size());
    offset += e.payload.size();
  }
  out.write(reinterpret_cast<const char*>(head.data()),
            static_cast<std::streamsize>(head.size()));
  for (const auto& e : entries_) {
    out.write(reinterpret_cast<const char*>(e.payload.data()),
              static_cast<std::streamsize>(e.payload.size()));
  }
  if (!out) throw IoError("failed writing index");
}

void CorpusIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  save(out);
}

CorpusIndex CorpusIndex::load(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), 8) || magic != kMagic) {
    throw ParseError("not an MVIX0001 index file (bad magic)");
  }
  const std::uint64_t mode_raw = read_u64(in, "mode");
  const std::uint64_t prec_raw = read_u64(in, "precision");
  const std::uint64_t dim = read_u64(in, "dim");
  const std::uint64_t doc_count = read_u64(in, "doc_count");
  if (mode_raw > 2) throw ParseError("unknown index mode code " + std::to_string(mode_raw));
  if (prec_raw > 3) throw ParseError("unknown precision code " + std::to_string(prec_raw));
  const auto mode = static_cast<IndexMode>(mode_raw);
  const auto precision = static_cast<Precision>(prec_raw);
  try {
    validate_mode_precision(mode, precision);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  if (dim == 0) throw ParseError("index dim is zero");
  if (doc_count == 0) throw ParseError("index holds no documents");

  struct Slot {
    std::string id;
    std::uint64_t rows, offset, length;
  };
  std::vector<Slot> slots;
  std::unordered_set<std::string> seen;
  for (std::uint64_t i = 0; i < doc_count; ++i) {
    const std::uint64_t id_len = read_u64(in, "id length");
    if (id_len > kMaxIdBytes) throw ParseError("document id too long");
    std::string id(id_len, '\0');
    if (!in.read(id.data(), static_cast<std::streamsize>(id_len))) {
      throw ParseError("truncated index file while reading an id");
    }
    if (!seen.insert(id).second) throw ParseError("duplicate id '" + id + "' in index");
    const std::uint64_t rows = read_u64(in, "rows");
    const std::uint64_t offset = read_u64(in, "offset");
    const std::uint64_t length = read_u64(in, "length");
    if (rows == 0 || (mode == IndexMode::kPooled && rows != 1)) {
      throw ParseError("document '" + id + "' has an invalid row count");
    }
    if (length != payload_bytes(precision, rows, dim)) {
      throw ParseError("document '" + id + "' payload length does not match its shape");
    }
    slots.push_back({std::move(id), rows, offset, length});
  }

  CorpusIndex index(mode, precision, dim);
  index.entries_.reserve(slots.size());
  for (auto& s : slots) {
    in.seekg(static_cast<std::streamoff>(s.offset));
    std::vector<std::byte> payload(s.length);
    if (!in.read(reinterpret_cast<char*>(payload.data()),
                 static_cast<std::streamsize>(s.length))) {
      throw ParseError("truncated payload for document '" + s.id + "'");
    }
    index.add_entry(std::move(s.id), s.rows, std::move(payload));
  }
  return index;
}

CorpusIndex CorpusIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return load(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace latebench
