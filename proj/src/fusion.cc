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

#include "victr/fusion.h"

#include <cctype>
#include <cmath>
#include <numbers>
#include <random>

#include "victr/binary_io.h"
#include "victr/error.h"
#include "victr/gcn.h"

namespace victr {
namespace {

double UnitUniform(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void PutMatrixF32(BinaryWriter &w, const Eigen::MatrixXd &m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.PutF32(static_cast<float>(m(i, j)));
  }
}

Eigen::MatrixXd GetMatrixF32(BinaryReader &r, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = r.GetF32();
  }
  return m;
}

int64_t HeaderInt(const nlohmann::json &h, const char *key, const std::string &what) {
  if (!h.contains(key) || !h[key].is_number_integer()) {
    throw InputError(what + ": header field '" + key + "' missing or not an integer");
  }
  return h[key].get<int64_t>();
}

void CheckPayloadSize(const std::string &payload, uint64_t expected, const std::string &what) {
  if (payload.size() != expected) {
    throw InputError(what + ": payload is " + std::to_string(payload.size()) +
                     " bytes, header implies " + std::to_string(expected));
  }
}

}  // namespace

void ValidateTextFeatures(const TextFeatures &text) {
  if (text.length() < 1) throw InputError("text features need at least one word");
  if (text.sentence.size() != text.width()) {
    throw InputError("sentence vector width " + std::to_string(text.sentence.size()) +
                     " != word width " + std::to_string(text.width()));
  }
  if (!text.words.allFinite() || !text.sentence.allFinite()) {
    throw InputError("text features contain non-finite values");
  }
}

FusionParameters InitFusionParameters(int text_width, int visual_width, uint64_t seed) {
  if (text_width < 1 || visual_width < 1) throw InputError("fusion widths must be >= 1");
  FusionParameters p;
  p.w.resize(text_width, visual_width);
  std::mt19937_64 rng(seed);
  const double limit = std::sqrt(6.0 / (text_width + visual_width));
  for (Eigen::Index i = 0; i < p.w.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.w.cols(); ++j) {
      p.w(i, j) = (2.0 * UnitUniform(rng) - 1.0) * limit;
    }
  }
  return p;
}

Attention Attend(const TextFeatures &text, const VisualSemanticMatrix &vs,
                 const FusionParameters &params) {
  const Eigen::Index v = params.w.cols();
  if (params.w.rows() != text.words.cols()) {
    throw InputError("W has " + std::to_string(params.w.rows()) + " rows but word width is " +
                     std::to_string(text.words.cols()));
  }
  if (vs.rows.rows() > 0 && vs.rows.cols() != v) {
    throw InputError("visual semantic width " + std::to_string(vs.rows.cols()) +
                     " != W columns " + std::to_string(v));
  }
  Attention out;
  const Eigen::Index n_obj = vs.rows.rows();
  if (n_obj == 0) {
    out.attended = Eigen::MatrixXd::Zero(text.words.rows(), v);
    out.weights.resize(text.words.rows(), 0);
    return out;
  }
  const Eigen::MatrixXd query = text.words * params.w;
  out.weights = query * vs.rows.transpose();
  for (Eigen::Index l = 0; l < out.weights.rows(); ++l) {
    auto row = out.weights.row(l);
    row.array() -= row.maxCoeff();
    row = row.array().exp().matrix();
    row /= row.sum();
  }
  out.attended = out.weights * vs.rows;
  return out;
}

Eigen::MatrixXd VictrWord(const TextFeatures &text, const Eigen::MatrixXd &attended) {
  if (attended.rows() != text.words.rows()) {
    throw InputError("attended rows " + std::to_string(attended.rows()) + " != words " +
                     std::to_string(text.words.rows()));
  }
  Eigen::MatrixXd out(text.words.rows(), text.words.cols() + attended.cols());
  out << text.words, attended;
  return out;
}

Eigen::VectorXd VictrSentence(const TextFeatures &text, const Eigen::MatrixXd &attended) {
  if (attended.rows() != text.words.rows()) {
    throw InputError("attended rows " + std::to_string(attended.rows()) + " != words " +
                     std::to_string(text.words.rows()));
  }
  Eigen::VectorXd out(text.sentence.size() + attended.cols());
  out << text.sentence, attended.colwise().sum().transpose();
  return out;
}

FusedRepresentation Fuse(CaptionId caption_id, const TextFeatures &text,
                         const VisualSemanticMatrix &vs, const FusionParameters &params) {
  ValidateTextFeatures(text);
  Attention att = Attend(text, vs, params);
  FusedRepresentation out;
  out.caption_id = caption_id;
  out.text_width = text.width();
  out.visual_width = static_cast<int>(params.w.cols());
  out.word = VictrWord(text, att.attended);
  out.sentence = VictrSentence(text, att.attended);
  out.attention = std::move(att.weights);
  return out;
}

TextFeatures BuiltinTextFeatures(std::span<const std::string> tokens, uint64_t seed,
                                 int width) {
  if (width < 1) throw InputError("text feature width must be >= 1");
  if (tokens.empty()) throw InputError("cannot encode an empty token list");
  BinaryWriter seed_bytes;
  seed_bytes.PutU64(seed);
  const uint64_t base = Fnv1a64(seed_bytes.buffer());

  TextFeatures out;
  out.words.resize(static_cast<Eigen::Index>(tokens.size()), width);
  for (size_t t = 0; t < tokens.size(); ++t) {
    std::string lower = tokens[t];
    for (char &c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    std::mt19937_64 rng(Fnv1a64(lower, base));
    Eigen::VectorXd v(width);
    for (int i = 0; i < width; i += 2) {
      // Box-Muller; u1 in (0, 1] keeps the log finite.
      const double u1 = 1.0 - UnitUniform(rng);
      const double u2 = UnitUniform(rng);
      const double r = std::sqrt(-2.0 * std::log(u1));
      v(i) = r * std::cos(2.0 * std::numbers::pi * u2);
      if (i + 1 < width) v(i + 1) = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    const double norm = v.norm();
    if (norm > 0) {
      v /= norm;
    } else {
      v.setZero();
      v(0) = 1.0;
    }
    out.words.row(static_cast<Eigen::Index>(t)) = v.transpose();
  }
  out.sentence = out.words.colwise().mean().transpose();
  return out;
}

std::string EncodeTextFeatures(const TextFeatures &text) {
  nlohmann::json h;
  h["L"] = text.length();
  h["D"] = text.width();
  BinaryWriter w;
  PutMatrixF32(w, text.words);
  for (Eigen::Index i = 0; i < text.sentence.size(); ++i) {
    w.PutF32(static_cast<float>(text.sentence(i)));
  }
  return EncodeFramed(kEmbeddingMagic, h, w.buffer());
}

TextFeatures DecodeTextFeatures(std::string_view bytes, const std::string &what,
                                int expected_width) {
  const FramedFile file = DecodeFramed(bytes, kEmbeddingMagic, what);
  const int64_t l = HeaderInt(file.header, "L", what);
  const int64_t d = HeaderInt(file.header, "D", what);
  if (l < 1 || d < 1) throw InputError(what + ": header needs L >= 1 and D >= 1");
  if (expected_width > 0 && d != expected_width) {
    throw InputError(what + ": feature width D=" + std::to_string(d) +
                     " but configured D=" + std::to_string(expected_width));
  }
  CheckPayloadSize(file.payload, 4 * static_cast<uint64_t>(l * d + d), what);
  BinaryReader r(file.payload, what);
  TextFeatures t;
  t.words = GetMatrixF32(r, l, d);
  t.sentence.resize(d);
  for (int64_t i = 0; i < d; ++i) t.sentence(i) = r.GetF32();
  ValidateTextFeatures(t);
  return t;
}

void WriteTextFeatures(const TextFeatures &text, const std::string &path) {
  WriteFileBytes(path, EncodeTextFeatures(text));
}

TextFeatures LoadTextFeatures(const std::string &path, int expected_width) {
  return DecodeTextFeatures(ReadFileBytes(path), path, expected_width);
}

FusionParameters LoadFusionParameters(const std::string &path, int text_width,
                                      int visual_width) {
  const EmbeddingTable t = ReadEmbeddings(path);
  if (t.size() != text_width || t.width() != visual_width) {
    throw InputError(path + ": W is " + std::to_string(t.size()) + "x" +
                     std::to_string(t.width()) + ", expected " + std::to_string(text_width) +
                     "x" + std::to_string(visual_width));
  }
  if (!t.vectors.allFinite()) throw InputError(path + ": W contains non-finite values");
  return FusionParameters{t.vectors};
}

std::string EncodeFused(const FusedRepresentation &fused) {
  nlohmann::json h;
  h["caption_id"] = fused.caption_id;
  h["L"] = fused.word.rows();
  h["D"] = fused.text_width;
  h["V"] = fused.visual_width;
  h["N_obj"] = fused.attention.cols();
  BinaryWriter w;
  PutMatrixF32(w, fused.attention);
  PutMatrixF32(w, fused.word);
  for (Eigen::Index i = 0; i < fused.sentence.size(); ++i) {
    w.PutF32(static_cast<float>(fused.sentence(i)));
  }
  return EncodeFramed(kFusedMagic, h, w.buffer());
}

FusedRepresentation DecodeFused(std::string_view bytes, const std::string &what) {
  const FramedFile file = DecodeFramed(bytes, kFusedMagic, what);
  FusedRepresentation f;
  f.caption_id = HeaderInt(file.header, "caption_id", what);
  const int64_t l = HeaderInt(file.header, "L", what);
  const int64_t d = HeaderInt(file.header, "D", what);
  const int64_t v = HeaderInt(file.header, "V", what);
  const int64_t n_obj = HeaderInt(file.header, "N_obj", what);
  if (l < 0 || d < 0 || v < 0 || n_obj < 0) throw InputError(what + ": negative dimension");
  f.text_width = static_cast<int>(d);
  f.visual_width = static_cast<int>(v);
  CheckPayloadSize(file.payload, 4 * static_cast<uint64_t>(l * n_obj + l * (d + v) + d + v),
                   what);
  BinaryReader r(file.payload, what);
  f.attention = GetMatrixF32(r, l, n_obj);
  f.word = GetMatrixF32(r, l, d + v);
  f.sentence.resize(d + v);
  for (int64_t i = 0; i < d + v; ++i) f.sentence(i) = r.GetF32();
  return f;
}

void WriteFused(const FusedRepresentation &fused, const std::string &path) {
  WriteFileBytes(path, EncodeFused(fused));
}

FusedRepresentation ReadFused(const std::string &path) {
  return DecodeFused(ReadFileBytes(path), path);
}

}  // namespace victr
