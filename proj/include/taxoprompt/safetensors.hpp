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

// Reader for the safetensors checkpoint format: an 8-byte little-endian
// header length, a JSON header mapping tensor names to dtype/shape/byte
// range, then the raw tensor bytes. F32, F16, BF16 and F64 tensors are
// converted to float on access.

#ifndef TAXOPROMPT_SAFETENSORS_HPP_
#define TAXOPROMPT_SAFETENSORS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace taxoprompt {

struct Tensor {
  std::vector<std::int64_t> shape;
  std::vector<float> data;

  std::int64_t dim(std::size_t i) const { return shape.at(i); }
};

class SafeTensorsFile {
 public:
  static SafeTensorsFile open(const std::filesystem::path& path);

  bool contains(const std::string& name) const { return entries_.count(name) != 0; }
  // Throws DataError if absent or of an unsupported dtype.
  Tensor get(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  struct Entry {
    std::string dtype;
    std::vector<std::int64_t> shape;
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  std::string path_;
  std::string bytes_;
  std::size_t data_offset_ = 0;
  std::map<std::string, Entry> entries_;
};

}  // namespace taxoprompt

#endif  // TAXOPROMPT_SAFETENSORS_HPP_
