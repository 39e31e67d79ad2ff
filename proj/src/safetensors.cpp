// Copyright 2026 The taxoprompt Authors.
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

#include "taxoprompt/safetensors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>

#include "taxoprompt/error.hpp"

namespace taxoprompt {
namespace {

float half_to_float(std::uint16_t h) {
  const std::uint32_t sign = static_cast<std::uint32_t>(h & 0x8000) << 16;
  std::uint32_t exp = (h >> 10) & 0x1F;
  std::uint32_t mant = h & 0x3FF;
  std::uint32_t bits;
  if (exp == 0) {
    if (mant == 0) {
      bits = sign;
    } else {
      // Subnormal: renormalize.
      exp = 127 - 15 + 1;
      while ((mant & 0x400) == 0) {
        mant <<= 1;
        --exp;
      }
      mant &= 0x3FF;
      bits = sign | (exp << 23) | (mant << 13);
    }
  } else if (exp == 0x1F) {
    bits = sign | 0x7F800000 | (mant << 13);
  } else {
    bits = sign | ((exp + 127 - 15) << 23) | (mant << 13);
  }
  return std::bit_cast<float>(bits);
}

template <typename T>
T read_le(const char* p) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

}  // namespace

SafeTensorsFile SafeTensorsFile::open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  SafeTensorsFile f;
  f.path_ = path.string();
  f.bytes_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  if (f.bytes_.size() < 8) throw DataError(f.path_ + ": truncated safetensors file");
  const auto header_len = read_le<std::uint64_t>(f.bytes_.data());
  if (header_len > f.bytes_.size() - 8) throw DataError(f.path_ + ": bad safetensors header length");
  f.data_offset_ = 8 + static_cast<std::size_t>(header_len);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(f.bytes_.begin() + 8, f.bytes_.begin() + f.data_offset_);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(f.path_ + ": bad safetensors header: " + e.what());
  }
  const std::size_t data_size = f.bytes_.size() - f.data_offset_;
  for (const auto& [name, meta] : header.items()) {
    if (name == "__metadata__") continue;
    Entry e;
    e.dtype = meta.at("dtype").get<std::string>();
    e.shape = meta.at("shape").get<std::vector<std::int64_t>>();
    const auto offsets = meta.at("data_offsets").get<std::vector<std::size_t>>();
    if (offsets.size() != 2 || offsets[0] > offsets[1] || offsets[1] > data_size) {
      throw DataError(f.path_ + ": bad data offsets for tensor " + name);
    }
    e.begin = offsets[0];
    e.end = offsets[1];
    f.entries_.emplace(name, std::move(e));
  }
  return f;
}

Tensor SafeTensorsFile::get(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw DataError(path_ + ": missing tensor " + name);
  const Entry& e = it->second;
  std::size_t count = 1;
  for (auto d : e.shape) count *= static_cast<std::size_t>(d);
  const char* p = bytes_.data() + data_offset_ + e.begin;
  const std::size_t nbytes = e.end - e.begin;
  Tensor t;
  t.shape = e.shape;
  t.data.resize(count);
  auto check = [&](std::size_t width) {
    if (nbytes != count * width) {
      throw DataError(path_ + ": tensor " + name + " byte size does not match its shape");
    }
  };
  if (e.dtype == "F32") {
    check(4);
    for (std::size_t i = 0; i < count; ++i) t.data[i] = read_le<float>(p + 4 * i);
  } else if (e.dtype == "F16") {
    check(2);
    for (std::size_t i = 0; i < count; ++i) t.data[i] = half_to_float(read_le<std::uint16_t>(p + 2 * i));
  } else if (e.dtype == "BF16") {
    check(2);
    for (std::size_t i = 0; i < count; ++i) {
      t.data[i] = std::bit_cast<float>(static_cast<std::uint32_t>(read_le<std::uint16_t>(p + 2 * i)) << 16);
    }
  } else if (e.dtype == "F64") {
    check(8);
    for (std::size_t i = 0; i < count; ++i) t.data[i] = static_cast<float>(read_le<double>(p + 8 * i));
  } else {
    throw DataError(path_ + ": tensor " + name + " has unsupported dtype " + e.dtype);
  }
  return t;
}

std::vector<std::string> SafeTensorsFile::names() const {
  std::vector<std::string> out;
  for (const auto& [name, e] : entries_) out.push_back(name);
  return out;
}

}  // namespace taxoprompt
