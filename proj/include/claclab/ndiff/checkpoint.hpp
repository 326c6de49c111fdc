#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "claclab/core/errors.hpp"
#include "claclab/ndiff/tensor.hpp"

namespace claclab::ndiff {

// Parameter container layout (all integers and floats little-endian):
//
//   "CLAC1"                       5-byte magic
//   u32  tensor_count
//   repeated tensor_count times:
//     u32  name_length, then name_length bytes of UTF-8
//     u32  rank, then rank x u64 dims
//   payload: every tensor's elements as f64, in header order, row-major
//
// See docs/checkpoint-format.md.

inline constexpr std::array<char, 5> kContainerMagic{'C', 'L', 'A', 'C', '1'};

struct NamedTensor {
  std::string name;
  Tensor tensor;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

namespace detail {

template <typename U>
void write_le(std::ostream& os, U value) {
  unsigned char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(U));
}

template <typename U>
U read_le(std::istream& is) {
  unsigned char bytes[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(U))) throw InvalidArgument("checkpoint: truncated container");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace detail

inline void write_container(std::ostream& os, const std::vector<NamedTensor>& tensors) {
  os.write(kContainerMagic.data(), kContainerMagic.size());
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, tensor] : tensors) {
    detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(tensor.rank()));
    for (auto d : tensor.shape()) detail::write_le<std::uint64_t>(os, d);
  }
  for (const auto& nt : tensors) {
    for (double v : nt.tensor.values()) detail::write_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(v));
  }
}

inline std::vector<NamedTensor> read_container(std::istream& is) {
  std::array<char, 5> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kContainerMagic) {
    throw InvalidArgument("checkpoint: missing CLAC1 magic");
  }
  const auto count = detail::read_le<std::uint32_t>(is);
  std::vector<NamedTensor> out;
  std::vector<std::vector<std::size_t>> shapes;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = detail::read_le<std::uint32_t>(is);
    std::string name(len, '\0');
    if (!is.read(name.data(), len)) throw InvalidArgument("checkpoint: truncated tensor name");
    const auto rank = detail::read_le<std::uint32_t>(is);
    if (rank > 8) throw InvalidArgument("checkpoint: implausible tensor rank");
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) d = static_cast<std::size_t>(detail::read_le<std::uint64_t>(is));
    out.push_back({std::move(name), Tensor()});
    shapes.push_back(std::move(shape));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<double> data(Tensor::element_count(shapes[i]));
    for (double& v : data) v = std::bit_cast<double>(detail::read_le<std::uint64_t>(is));
    out[i].tensor = Tensor(shapes[i], std::move(data));
  }
  return out;
}

inline void save_container(const std::string& path, const std::vector<NamedTensor>& tensors) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("checkpoint: cannot open " + path + " for writing");
  write_container(os, tensors);
}

inline std::vector<NamedTensor> load_container(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("checkpoint: cannot open " + path);
  return read_container(is);
}

}  // namespace claclab::ndiff
