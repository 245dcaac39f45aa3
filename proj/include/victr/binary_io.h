// Copyright 2026 The VICTR Authors.
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

// Little-endian record encoding shared by all VICTR artifact files.
//
// Every artifact is framed as
//
//   magic (7 ASCII bytes) | header length (u32) | JSON header | payload
//
// The JSON header is serialized with sorted keys so identical inputs give
// byte-identical files.

#ifndef VICTR_BINARY_IO_H_
#define VICTR_BINARY_IO_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

namespace victr {

inline constexpr std::string_view kGraphMagic = "VICTRG1";
inline constexpr std::string_view kModelMagic = "VICTRM1";
inline constexpr std::string_view kEmbeddingMagic = "VICTRE1";
inline constexpr std::string_view kFusedMagic = "VICTRF1";

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view bytes, uint64_t hash = 14695981039346656037ULL);

class BinaryWriter {
 public:
  void PutU32(uint32_t v);
  void PutU64(uint64_t v);
  void PutF32(float v);
  void PutF64(double v);
  void PutBytes(std::string_view bytes) { buffer_.append(bytes); }

  const std::string &buffer() const { return buffer_; }
  std::string Release() { return std::move(buffer_); }

 private:
  std::string buffer_;
};

// Reads from a borrowed buffer. Every getter throws InputError when the
// buffer is exhausted; `what` names the source in the message.
class BinaryReader {
 public:
  BinaryReader(std::string_view data, std::string what)
      : data_(data), what_(std::move(what)) {}

  uint32_t GetU32();
  uint64_t GetU64();
  float GetF32();
  double GetF64();
  std::string_view GetBytes(size_t n);

  size_t remaining() const { return data_.size() - pos_; }
  size_t position() const { return pos_; }

 private:
  void Need(size_t n) const;

  std::string_view data_;
  std::string what_;
  size_t pos_ = 0;
};

struct FramedFile {
  nlohmann::json header;
  std::string header_text;  // raw bytes the header was parsed from
  std::string payload;
};

std::string EncodeFramed(std::string_view magic, const nlohmann::json &header,
                         std::string_view payload);
FramedFile DecodeFramed(std::string_view bytes, std::string_view magic,
                        const std::string &what);

std::string ReadFileBytes(const std::string &path);
void WriteFileBytes(const std::string &path, std::string_view bytes);

void WriteFramedFile(const std::string &path, std::string_view magic,
                     const nlohmann::json &header, std::string_view payload);
FramedFile ReadFramedFile(const std::string &path, std::string_view magic);

}  // namespace victr

#endif  // VICTR_BINARY_IO_H_
