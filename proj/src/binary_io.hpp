// Copyright 2026 The GCN-JEM Authors.
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

#ifndef GCNJEM_SRC_BINARY_IO_HPP_
#define GCNJEM_SRC_BINARY_IO_HPP_

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "gcnjem/error.hpp"

namespace gcnjem::internal {

inline void WriteU64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(bytes.data(), bytes.size());
}

inline void WriteF64(std::ostream& out, double v) {
  WriteU64(out, std::bit_cast<std::uint64_t>(v));
}

inline void WriteMagic(std::ostream& out, std::string_view magic) {
  out.write(magic.data(), static_cast<std::streamsize>(magic.size()));
}

inline void ReadExact(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw Error(ErrorCode::kTruncatedFile, "unexpected end of stream");
  }
}

inline std::uint64_t ReadU64(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  ReadExact(in, reinterpret_cast<char*>(bytes.data()), bytes.size());
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

inline double ReadF64(std::istream& in) {
  return std::bit_cast<double>(ReadU64(in));
}

inline void ExpectMagic(std::istream& in, std::string_view magic) {
  std::string got(magic.size(), '\0');
  ReadExact(in, got.data(), got.size());
  if (got != magic) {
    throw Error(ErrorCode::kCorruptMagic,
                "expected '" + std::string(magic) + "', found '" + got + "'");
  }
}

// Guards allocations driven by header fields of untrusted files.
inline void CheckRemaining(std::istream& in, std::uint64_t bytes_needed) {
  const auto here = in.tellg();
  if (here < 0) return;
  in.seekg(0, std::ios::end);
  const auto end = in.tellg();
  in.seekg(here);
  if (end < here || static_cast<std::uint64_t>(end - here) < bytes_needed) {
    throw Error(ErrorCode::kTruncatedFile, "record extends past end of file");
  }
}

}  // namespace gcnjem::internal

#endif  // GCNJEM_SRC_BINARY_IO_HPP_
