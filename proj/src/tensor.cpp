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

#include "sfid/tensor.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace sfid {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'F', 'I', 'D'};
constexpr std::uint16_t kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 8;

std::size_t element_size(DType dtype) {
  switch (dtype) {
    case DType::kFloat32: return 4;
    case DType::kUInt8: return 1;
    case DType::kUInt32: return 4;
  }
  return 0;
}

std::size_t storage_size(const Tensor::Storage& data) {
  return std::visit([](const auto& v) { return v.size(); }, data);
}

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(std::span<const std::byte> in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(std::to_integer<std::uint8_t>(in[offset + i])) << (8 * i);
  }
  return v;
}

}  // namespace

const char* to_string(DType dtype) {
  switch (dtype) {
    case DType::kFloat32: return "float32";
    case DType::kUInt8: return "uint8";
    case DType::kUInt32: return "uint32";
  }
  return "unknown";
}

Tensor::Tensor(std::vector<std::uint32_t> shape, Storage data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.empty() || shape_.size() > 255) {
    throw ShapeError("tensor rank must be in [1,255], got " + std::to_string(shape_.size()));
  }
  if (std::ranges::any_of(shape_, [](std::uint32_t d) { return d == 0; })) {
    throw ShapeError("tensor dimensions must be positive");
  }
  if (storage_size(data_) != element_count()) {
    throw ShapeError("tensor shape holds " + std::to_string(element_count()) +
                     " elements, data has " + std::to_string(storage_size(data_)));
  }
}

DType Tensor::dtype() const noexcept {
  switch (data_.index()) {
    case 0: return DType::kFloat32;
    case 1: return DType::kUInt8;
    default: return DType::kUInt32;
  }
}

std::size_t Tensor::element_count() const noexcept {
  std::size_t n = 1;
  for (auto d : shape_) n *= d;
  return n;
}

void Tensor::validate(TensorRole role) const {
  if (const auto* f = std::get_if<std::vector<float>>(&data_)) {
    for (std::size_t i = 0; i < f->size(); ++i) {
      const float v = (*f)[i];
      if (!std::isfinite(v)) {
        throw ValueError("non-finite float at element " + std::to_string(i));
      }
      if (role == TensorRole::kProbability && (v < 0.0f || v > 1.0f)) {
        throw ValueError("probability " + std::to_string(v) + " outside [0,1] at element " +
                         std::to_string(i));
      }
    }
  }
  if (role == TensorRole::kBinary) {
    const auto* b = std::get_if<std::vector<std::uint8_t>>(&data_);
    if (b == nullptr) throw ValueError("binary mask must be uint8");
    auto it = std::ranges::find_if(*b, [](std::uint8_t v) { return v > 1; });
    if (it != b->end()) {
      throw ValueError("binary mask value " + std::to_string(*it) + " at element " +
                       std::to_string(std::distance(b->begin(), it)));
    }
  }
}

bool operator==(const Tensor& a, const Tensor& b) {
  if (a.shape_ != b.shape_ || a.data_.index() != b.data_.index()) return false;
  return std::visit(
      [&](const auto& va) {
        using V = std::decay_t<decltype(va)>;
        const auto& vb = std::get<V>(b.data_);
        return va.empty() ||
               std::memcmp(va.data(), vb.data(), va.size() * sizeof(typename V::value_type)) == 0;
      },
      a.data_);
}

std::vector<std::byte> encode_tensor(const Tensor& t, TensorRole role) {
  t.validate(role);
  const std::size_t esize = element_size(t.dtype());
  std::vector<std::byte> out;
  out.reserve(kHeaderBytes + 4 * t.rank() + esize * t.element_count());
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  out.push_back(static_cast<std::byte>(kFormatVersion & 0xFFu));
  out.push_back(static_cast<std::byte>(kFormatVersion >> 8));
  out.push_back(static_cast<std::byte>(t.dtype()));
  out.push_back(static_cast<std::byte>(t.rank()));
  for (auto d : t.shape()) put_u32(out, d);

  switch (t.dtype()) {
    case DType::kFloat32:
      for (float v : t.values<float>()) put_u32(out, std::bit_cast<std::uint32_t>(v));
      break;
    case DType::kUInt32:
      for (std::uint32_t v : t.values<std::uint32_t>()) put_u32(out, v);
      break;
    case DType::kUInt8: {
      auto v = t.values<std::uint8_t>();
      const auto* p = reinterpret_cast<const std::byte*>(v.data());
      out.insert(out.end(), p, p + v.size());
      break;
    }
  }
  return out;
}

Tensor decode_tensor(std::span<const std::byte> bytes, TensorRole role) {
  if (bytes.size() < kHeaderBytes) throw TruncatedError("tensor header truncated");
  for (std::size_t i = 0; i < kMagic.size(); ++i) {
    if (bytes[i] != static_cast<std::byte>(kMagic[i])) throw FormatError("bad magic bytes");
  }
  const auto version = static_cast<std::uint16_t>(std::to_integer<std::uint16_t>(bytes[4]) |
                                                  (std::to_integer<std::uint16_t>(bytes[5]) << 8));
  if (version != kFormatVersion) {
    throw FormatError("unsupported format version " + std::to_string(version));
  }
  const auto code = std::to_integer<std::uint8_t>(bytes[6]);
  if (code < 1 || code > 3) throw FormatError("unknown dtype code " + std::to_string(code));
  const auto dtype = static_cast<DType>(code);
  const std::size_t rank = std::to_integer<std::uint8_t>(bytes[7]);
  if (rank == 0) throw FormatError("rank 0 tensor");

  if (bytes.size() < kHeaderBytes + 4 * rank) throw TruncatedError("tensor shape truncated");
  std::vector<std::uint32_t> shape(rank);
  std::size_t count = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    shape[i] = get_u32(bytes, kHeaderBytes + 4 * i);
    if (shape[i] == 0) throw FormatError("zero dimension in shape");
    count *= shape[i];
  }

  const std::size_t offset = kHeaderBytes + 4 * rank;
  const std::size_t payload = bytes.size() - offset;
  if (payload != count * element_size(dtype)) {
    throw TruncatedError("declared shape needs " + std::to_string(count * element_size(dtype)) +
                         " payload bytes, file has " + std::to_string(payload));
  }

  Tensor::Storage data;
  switch (dtype) {
    case DType::kFloat32: {
      std::vector<float> v(count);
      for (std::size_t i = 0; i < count; ++i) {
        v[i] = std::bit_cast<float>(get_u32(bytes, offset + 4 * i));
      }
      data = std::move(v);
      break;
    }
    case DType::kUInt32: {
      std::vector<std::uint32_t> v(count);
      for (std::size_t i = 0; i < count; ++i) v[i] = get_u32(bytes, offset + 4 * i);
      data = std::move(v);
      break;
    }
    case DType::kUInt8: {
      std::vector<std::uint8_t> v(count);
      std::memcpy(v.data(), bytes.data() + offset, count);
      data = std::move(v);
      break;
    }
  }
  Tensor t(std::move(shape), std::move(data));
  t.validate(role);
  return t;
}

void write_tensor(const std::filesystem::path& path, const Tensor& t, TensorRole role) {
  const auto bytes = encode_tensor(t, role);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Tensor read_tensor(const std::filesystem::path& path, TensorRole role) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  try {
    return decode_tensor(std::as_bytes(std::span(raw)), role);
  } catch (const TruncatedError& e) {
    throw TruncatedError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// ---- grid conversions ----

namespace {

std::uint32_t dim(std::size_t n) {
  if (n == 0 || n > UINT32_MAX) throw ShapeError("dimension out of range: " + std::to_string(n));
  return static_cast<std::uint32_t>(n);
}

template <typename T>
Tensor stack_to_tensor(std::span<const Grid<T>> stack) {
  if (stack.empty()) throw ShapeError("cannot serialize an empty stack");
  std::vector<T> data;
  data.reserve(stack.size() * stack.front().size());
  for (const auto& g : stack) {
    require_same_shape(g, stack.front(), "stack slices");
    data.insert(data.end(), g.values().begin(), g.values().end());
  }
  return Tensor({dim(stack.size()), dim(stack.front().height()), dim(stack.front().width())},
                std::move(data));
}

template <typename T>
Grid<T> tensor_to_grid(const Tensor& t) {
  if (t.rank() != 2) throw ShapeError("expected rank-2 tensor, got rank " + std::to_string(t.rank()));
  auto v = t.values<T>();
  return Grid<T>(t.shape()[0], t.shape()[1], std::vector<T>(v.begin(), v.end()));
}

template <typename T>
std::vector<Grid<T>> tensor_to_stack(const Tensor& t) {
  if (t.rank() != 3) throw ShapeError("expected rank-3 tensor, got rank " + std::to_string(t.rank()));
  auto v = t.values<T>();
  const std::size_t h = t.shape()[1], w = t.shape()[2];
  std::vector<Grid<T>> out;
  out.reserve(t.shape()[0]);
  for (std::size_t c = 0; c < t.shape()[0]; ++c) {
    auto first = v.begin() + static_cast<std::ptrdiff_t>(c * h * w);
    out.emplace_back(h, w, std::vector<T>(first, first + static_cast<std::ptrdiff_t>(h * w)));
  }
  return out;
}

}  // namespace

Tensor to_tensor(const ProbMap& map) {
  return Tensor({dim(map.height()), dim(map.width())},
                std::vector<float>(map.values().begin(), map.values().end()));
}

Tensor to_tensor(const BinaryMask& mask) {
  return Tensor({dim(mask.height()), dim(mask.width())},
                std::vector<std::uint8_t>(mask.values().begin(), mask.values().end()));
}

Tensor to_tensor(std::span<const ProbMap> stack) { return stack_to_tensor(stack); }
Tensor to_tensor(std::span<const BinaryMask> masks) { return stack_to_tensor(masks); }

ProbMap to_prob_map(const Tensor& t) { return tensor_to_grid<float>(t); }
BinaryMask to_binary_mask(const Tensor& t) { return tensor_to_grid<std::uint8_t>(t); }
ProbStack to_prob_stack(const Tensor& t) { return tensor_to_stack<float>(t); }
std::vector<BinaryMask> to_mask_stack(const Tensor& t) { return tensor_to_stack<std::uint8_t>(t); }

}  // namespace sfid
