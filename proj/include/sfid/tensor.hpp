// Copyright 2026 The SFID Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "sfid/grid.hpp"

namespace sfid {

// On-disk element type codes of the SFID tensor format.
enum class DType : std::uint8_t { kFloat32 = 1, kUInt8 = 2, kUInt32 = 3 };

const char* to_string(DType dtype);

// What a tensor holds; decides which value checks apply on read and write.
enum class TensorRole {
  kGeneric,      // floats finite
  kProbability,  // floats finite and within [0,1]
  kBinary,       // uint8 values in {0,1}
};

// N-dimensional row-major array with a fixed element type.
//
// Construction enforces the structural invariant (element count equals the
// product of a non-empty list of positive dimensions). Value invariants such
// as finiteness are role-dependent and checked by validate().
class Tensor {
 public:
  using Storage = std::variant<std::vector<float>, std::vector<std::uint8_t>,
                               std::vector<std::uint32_t>>;

  Tensor(std::vector<std::uint32_t> shape, Storage data);

  DType dtype() const noexcept;
  std::span<const std::uint32_t> shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t element_count() const noexcept;

  // Typed view; throws FormatError if T does not match dtype().
  template <typename T>
  std::span<const T> values() const {
    const auto* v = std::get_if<std::vector<T>>(&data_);
    if (v == nullptr) throw FormatError("tensor dtype is " + std::string(to_string(dtype())));
    return *v;
  }

  void validate(TensorRole role) const;

  // Bit-exact comparison (floats compared by representation).
  friend bool operator==(const Tensor& a, const Tensor& b);

 private:
  std::vector<std::uint32_t> shape_;
  Storage data_;
};

std::vector<std::byte> encode_tensor(const Tensor& t, TensorRole role = TensorRole::kGeneric);
Tensor decode_tensor(std::span<const std::byte> bytes, TensorRole role = TensorRole::kGeneric);

// Validates before touching the filesystem: a rejected tensor never creates a file.
void write_tensor(const std::filesystem::path& path, const Tensor& t,
                  TensorRole role = TensorRole::kGeneric);
Tensor read_tensor(const std::filesystem::path& path, TensorRole role = TensorRole::kGeneric);

// Grid <-> tensor conversions.
Tensor to_tensor(const ProbMap& map);
Tensor to_tensor(const BinaryMask& mask);
Tensor to_tensor(std::span<const ProbMap> stack);
Tensor to_tensor(std::span<const BinaryMask> masks);

ProbMap to_prob_map(const Tensor& t);
BinaryMask to_binary_mask(const Tensor& t);
ProbStack to_prob_stack(const Tensor& t);
std::vector<BinaryMask> to_mask_stack(const Tensor& t);

}  // namespace sfid
