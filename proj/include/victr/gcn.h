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

// Two-layer graph convolutional network over one-hot node features:
//
//   H1     = relu(A W1 + 1 b1^T)
//   logits = A H1 W2 + 1 b2^T
//
// where A is the normalized adjacency. Only object nodes carry labels (their
// super-class); the hidden activations H1 are the node embeddings.
// Training is full-batch gradient descent with analytic gradients and is
// deterministic for a fixed seed.

#ifndef VICTR_GCN_H_
#define VICTR_GCN_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "victr/relational_graph.h"

namespace victr {

struct GcnModel {
  Eigen::MatrixXd w1;  // N x H
  Eigen::VectorXd b1;  // H
  Eigen::MatrixXd w2;  // H x classes
  Eigen::VectorXd b2;  // classes
  uint64_t seed = 0;

  int num_nodes() const { return static_cast<int>(w1.rows()); }
  int hidden() const { return static_cast<int>(w1.cols()); }
  int num_classes() const { return static_cast<int>(w2.cols()); }

  bool operator==(const GcnModel &o) const {
    return seed == o.seed && w1 == o.w1 && b1 == o.b1 && w2 == o.w2 && b2 == o.b2;
  }
};

struct TrainConfig {
  double learning_rate = 0.02;
  int epochs = 200;
  uint64_t seed = 0;
  // Multiplier on the Xavier-uniform limit.
  double init_scale = 1.0;

  // Throws InputError unless learning_rate > 0, epochs >= 1, init_scale >= 0.
  void Validate() const;
};

// Xavier-uniform weights, zero biases.
GcnModel InitGcnModel(int num_nodes, int hidden, int num_classes, const TrainConfig &config);

struct GcnActivations {
  Eigen::MatrixXd pre_hidden;  // A W1 + b1
  Eigen::MatrixXd hidden;      // relu(pre_hidden)
  Eigen::MatrixXd propagated;  // A hidden
  Eigen::MatrixXd logits;
};

// Throws InputError if the model does not match the adjacency size.
GcnActivations Forward(const GcnModel &model, const NormalizedAdjacency &adjacency);

// node index -> class index
using NodeLabels = std::map<int, int>;

// Mean over labeled nodes of -log softmax(logits row)[label]. Throws
// InputError for labels outside [0, classes) or nodes outside the matrix.
double MaskedCrossEntropy(const Eigen::MatrixXd &logits, const NodeLabels &labels);

struct GcnGradients {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

// Loss at `model` and, if `gradients` is non-null, its analytic gradient.
double LossAndGradients(const GcnModel &model, const NormalizedAdjacency &adjacency,
                        const NodeLabels &labels, GcnGradients *gradients);

struct TrainResult {
  GcnModel model;
  std::vector<double> loss_history;  // loss before each update, one per epoch
};

// Throws InputError for an invalid config or no labeled nodes, and
// InvariantError if the loss becomes non-finite.
TrainResult Train(GcnModel model, const NormalizedAdjacency &adjacency,
                  const NodeLabels &labels, const TrainConfig &config);

// Fraction of labeled nodes whose arg-max logit is the label.
double Accuracy(const GcnModel &model, const NormalizedAdjacency &adjacency,
                const NodeLabels &labels);

struct EmbeddingTable {
  Eigen::MatrixXd vectors;  // one row per vocabulary node
  uint64_t vocab_hash = 0;

  int width() const { return static_cast<int>(vectors.cols()); }
  int size() const { return static_cast<int>(vectors.rows()); }
};

// Hidden activations H1.
EmbeddingTable ExtractEmbeddings(const GcnModel &model, const NormalizedAdjacency &adjacency);

// Largest relative error |a - n| / max(|a|, |n|, 1e-12) between analytic
// and central-difference gradients over `num_coordinates` randomly chosen
// parameters (all of them if there are fewer). Throws InputError unless
// epsilon > 0.
double GradientCheck(const GcnModel &model, const NormalizedAdjacency &adjacency,
                     const NodeLabels &labels, double epsilon, int num_coordinates = 128,
                     uint64_t seed = 0);

// Model file: magic VICTRM1, header {N, H, mu, seed}, then W1, b1, W2, b2 as
// row-major little-endian f64.
std::string EncodeModel(const GcnModel &model);
GcnModel DecodeModel(std::string_view bytes, const std::string &what);
void WriteModel(const GcnModel &model, const std::string &path);
GcnModel ReadModel(const std::string &path);

// Embedding file: magic VICTRE1, header {N, H, vocab_hash}, then N x H
// row-major little-endian f32.
std::string EncodeEmbeddings(const EmbeddingTable &table);
EmbeddingTable DecodeEmbeddings(std::string_view bytes, const std::string &what);
void WriteEmbeddings(const EmbeddingTable &table, const std::string &path);
EmbeddingTable ReadEmbeddings(const std::string &path);

}  // namespace victr

#endif  // VICTR_GCN_H_
