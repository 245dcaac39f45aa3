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

// Attention of caption words over a scene graph's visual semantic rows.
//
//   scores    = (E_word W) E_vs^T           L x N_obj
//   attention = row softmax(scores)
//   E_vs'     = attention E_vs              L x V
//
//   word-level:     E_word ∥ E_vs'            L x (D + V)
//   sentence-level: E_sent ∥ sum_l E_vs'[l]   D + V

#ifndef VICTR_FUSION_H_
#define VICTR_FUSION_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "victr/embedding.h"
#include "victr/scene_graph.h"

namespace victr {

struct TextFeatures {
  Eigen::MatrixXd words;     // L x D
  Eigen::VectorXd sentence;  // D

  int length() const { return static_cast<int>(words.rows()); }
  int width() const { return static_cast<int>(words.cols()); }
};

// Throws InputError unless L >= 1, the sentence width is D and every entry
// is finite.
void ValidateTextFeatures(const TextFeatures &text);

struct FusionParameters {
  Eigen::MatrixXd w;  // D x V
};

// Xavier-uniform D x V map from `seed`.
FusionParameters InitFusionParameters(int text_width, int visual_width, uint64_t seed);

struct Attention {
  Eigen::MatrixXd attended;  // E_vs', L x V
  Eigen::MatrixXd weights;   // L x N_obj
};

// With no objects, `attended` is zero and `weights` has no columns. Throws
// InputError on width mismatches.
Attention Attend(const TextFeatures &text, const VisualSemanticMatrix &vs,
                 const FusionParameters &params);

// Throws InputError if the row counts differ.
Eigen::MatrixXd VictrWord(const TextFeatures &text, const Eigen::MatrixXd &attended);
Eigen::VectorXd VictrSentence(const TextFeatures &text, const Eigen::MatrixXd &attended);

struct FusedRepresentation {
  CaptionId caption_id = 0;
  Eigen::MatrixXd attention;  // L x N_obj
  Eigen::MatrixXd word;       // L x (D + V)
  Eigen::VectorXd sentence;   // D + V
  int text_width = 0;         // D
  int visual_width = 0;       // V
};

FusedRepresentation Fuse(CaptionId caption_id, const TextFeatures &text,
                         const VisualSemanticMatrix &vs, const FusionParameters &params);

// Deterministic stand-in encoder: each lowercased token hashes, with the
// seed, to a unit vector of width `width`; the sentence vector is their
// mean. Throws InputError for an empty token list or width < 1.
TextFeatures BuiltinTextFeatures(std::span<const std::string> tokens, uint64_t seed, int width);

// Text feature file: magic VICTRE1, header {L, D}, then the L x D word
// matrix and the D sentence vector as row-major little-endian f32.
// `expected_width` > 0 is checked against D.
std::string EncodeTextFeatures(const TextFeatures &text);
TextFeatures DecodeTextFeatures(std::string_view bytes, const std::string &what,
                                int expected_width = 0);
void WriteTextFeatures(const TextFeatures &text, const std::string &path);
TextFeatures LoadTextFeatures(const std::string &path, int expected_width = 0);

// A W matrix stored as an embedding file with N = D rows of width V.
FusionParameters LoadFusionParameters(const std::string &path, int text_width,
                                      int visual_width);

// Fused file: magic VICTRF1, header {caption_id, L, D, V, N_obj}, then
// attention, word and sentence blocks as row-major little-endian f32.
std::string EncodeFused(const FusedRepresentation &fused);
FusedRepresentation DecodeFused(std::string_view bytes, const std::string &what);
void WriteFused(const FusedRepresentation &fused, const std::string &path);
FusedRepresentation ReadFused(const std::string &path);

}  // namespace victr

#endif  // VICTR_FUSION_H_
