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

#include "victr/binary_io.h"

#include <bit>
#include <fstream>
#include <iterator>

#include "victr/error.h"

namespace victr {

uint64_t Fnv1a64(std::string_view bytes, uint64_t hash) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

void BinaryWriter::PutU32(uint32_t v) {
  for (int i = 0; i < 4; ++i) buffer_.push_back(static_cast<char>(v >> (8 * i)));
}

void BinaryWriter::PutU64(uint64_t v) {
  for (int i = 0; i < 8; ++i) buffer_.push_back(static_cast<char>(v >> (8 * i)));
}

void BinaryWriter::PutF32(float v) { PutU32(std::bit_cast<uint32_t>(v)); }

void BinaryWriter::PutF64(double v) { PutU64(std::bit_cast<uint64_t>(v)); }

void BinaryReader::Need(size_t n) const {
  if (data_.size() - pos_ < n) {
    throw InputError(what_ + ": truncated payload at byte " +
                     std::to_string(pos_));
  }
}

uint32_t BinaryReader::GetU32() {
  Need(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(static_cast<unsigned char>(data_[pos_ + i]))
         << (8 * i);
  }
  pos_ += 4;
  return v;
}

uint64_t BinaryReader::GetU64() {
  Need(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
         << (8 * i);
  }
  pos_ += 8;
  return v;
}

float BinaryReader::GetF32() { return std::bit_cast<float>(GetU32()); }

double BinaryReader::GetF64() { return std::bit_cast<double>(GetU64()); }

std::string_view BinaryReader::GetBytes(size_t n) {
  Need(n);
  std::string_view out = data_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::string EncodeFramed(std::string_view magic, const nlohmann::json &header,
                         std::string_view payload) {
  const std::string header_text = header.dump();
  BinaryWriter w;
  w.PutBytes(magic);
  w.PutU32(static_cast<uint32_t>(header_text.size()));
  w.PutBytes(header_text);
  w.PutBytes(payload);
  return w.Release();
}

FramedFile DecodeFramed(std::string_view bytes, std::string_view magic,
                        const std::string &what) {
  BinaryReader r(bytes, what);
  if (bytes.size() < magic.size() || bytes.substr(0, magic.size()) != magic) {
    throw InputError(what + ": bad magic, expected " + std::string(magic));
  }
  r.GetBytes(magic.size());
  const uint32_t header_len = r.GetU32();
  std::string_view header_text = r.GetBytes(header_len);
  FramedFile out;
  out.header_text = std::string(header_text);
  try {
    out.header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception &e) {
    throw InputError(what + ": malformed header: " + e.what());
  }
  out.payload = std::string(r.GetBytes(r.remaining()));
  return out;
}

std::string ReadFileBytes(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::string &path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("write failed for " + path);
}

void WriteFramedFile(const std::string &path, std::string_view magic,
                     const nlohmann::json &header, std::string_view payload) {
  WriteFileBytes(path, EncodeFramed(magic, header, payload));
}

FramedFile ReadFramedFile(const std::string &path, std::string_view magic) {
  return DecodeFramed(ReadFileBytes(path), magic, path);
}

}  // namespace victr
