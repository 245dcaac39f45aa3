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

#include "victr/gcn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "victr/binary_io.h"
#include "victr/error.h"

namespace victr {
namespace {

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
double UnitUniform(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void FillXavier(Eigen::MatrixXd *m, double scale, std::mt19937_64 &rng) {
  const double limit = scale * std::sqrt(6.0 / static_cast<double>(m->rows() + m->cols()));
  for (Eigen::Index i = 0; i < m->rows(); ++i) {
    for (Eigen::Index j = 0; j < m->cols(); ++j) {
      (*m)(i, j) = (2.0 * UnitUniform(rng) - 1.0) * limit;
    }
  }
}

void CheckLabels(const NodeLabels &labels, Eigen::Index rows, Eigen::Index classes) {
  for (const auto &[node, label] : labels) {
    if (node < 0 || node >= rows) {
      throw InputError("label on node " + std::to_string(node) + " outside [0, " +
                       std::to_string(rows) + ")");
    }
    if (label < 0 || label >= classes) {
      throw InputError("label " + std::to_string(label) + " on node " +
                       std::to_string(node) + " outside [0, " + std::to_string(classes) +
                       ")");
    }
  }
}

// Row-wise softmax of the labeled rows only.
Eigen::VectorXd SoftmaxRow(const Eigen::MatrixXd &logits, int row) {
  Eigen::VectorXd z = logits.row(row).transpose();
  z.array() -= z.maxCoeff();
  z = z.array().exp();
  return z / z.sum();
}

// Parameter views in the fixed flattening order W1, b1, W2, b2.
struct ParamRef {
  double *data;
  Eigen::Index size;
};

std::array<ParamRef, 4> Params(GcnModel *m) {
  return {ParamRef{m->w1.data(), m->w1.size()}, ParamRef{m->b1.data(), m->b1.size()},
          ParamRef{m->w2.data(), m->w2.size()}, ParamRef{m->b2.data(), m->b2.size()}};
}

std::array<ParamRef, 4> Params(GcnGradients *g) {
  return {ParamRef{g->w1.data(), g->w1.size()}, ParamRef{g->b1.data(), g->b1.size()},
          ParamRef{g->w2.data(), g->w2.size()}, ParamRef{g->b2.data(), g->b2.size()}};
}

double &Coordinate(const std::array<ParamRef, 4> &params, Eigen::Index k) {
  for (const ParamRef &p : params) {
    if (k < p.size) return p.data[k];
    k -= p.size;
  }
  throw InvariantError("parameter coordinate out of range");
}

// Row-major f64 matrix payload.
void PutMatrix(BinaryWriter &w, const Eigen::MatrixXd &m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.PutF64(m(i, j));
  }
}

Eigen::MatrixXd GetMatrix(BinaryReader &r, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = r.GetF64();
  }
  return m;
}

int64_t HeaderInt(const nlohmann::json &h, const char *key, const std::string &what) {
  if (!h.contains(key) || !h[key].is_number_integer()) {
    throw InputError(what + ": header field '" + key + "' missing or not an integer");
  }
  const int64_t v = h[key].get<int64_t>();
  if (v < 0) throw InputError(what + ": header field '" + key + "' is negative");
  return v;
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate > 0) || !std::isfinite(learning_rate)) {
    throw InputError("learning rate must be positive, got " + std::to_string(learning_rate));
  }
  if (epochs < 1) throw InputError("epochs must be >= 1, got " + std::to_string(epochs));
  if (!(init_scale >= 0) || !std::isfinite(init_scale)) {
    throw InputError("init scale must be non-negative");
  }
}

GcnModel InitGcnModel(int num_nodes, int hidden, int num_classes, const TrainConfig &config) {
  if (num_nodes < 0 || hidden < 1 || num_classes < 1) {
    throw InputError("invalid GCN shape N=" + std::to_string(num_nodes) +
                     " H=" + std::to_string(hidden) + " classes=" + std::to_string(num_classes));
  }
  GcnModel m;
  m.seed = config.seed;
  m.w1.resize(num_nodes, hidden);
  m.w2.resize(hidden, num_classes);
  std::mt19937_64 rng(config.seed);
  FillXavier(&m.w1, config.init_scale, rng);
  FillXavier(&m.w2, config.init_scale, rng);
  m.b1 = Eigen::VectorXd::Zero(hidden);
  m.b2 = Eigen::VectorXd::Zero(num_classes);
  return m;
}

GcnActivations Forward(const GcnModel &model, const NormalizedAdjacency &adjacency) {
  const Eigen::Index n = adjacency.matrix.rows();
  if (adjacency.matrix.cols() != n || model.w1.rows() != n) {
    throw InputError("model has " + std::to_string(model.w1.rows()) +
                     " input nodes but adjacency is " + std::to_string(n) + "x" +
                     std::to_string(adjacency.matrix.cols()));
  }
  if (model.b1.size() != model.w1.cols() || model.w2.rows() != model.w1.cols() ||
      model.b2.size() != model.w2.cols()) {
    throw InputError("inconsistent GCN parameter shapes");
  }
  GcnActivations act;
  act.pre_hidden = adjacency.matrix * model.w1;
  act.pre_hidden.rowwise() += model.b1.transpose();
  act.hidden = act.pre_hidden.cwiseMax(0.0);
  act.propagated = adjacency.matrix * act.hidden;
  act.logits = act.propagated * model.w2;
  act.logits.rowwise() += model.b2.transpose();
  return act;
}

double MaskedCrossEntropy(const Eigen::MatrixXd &logits, const NodeLabels &labels) {
  CheckLabels(labels, logits.rows(), logits.cols());
  if (labels.empty()) return 0.0;
  double total = 0.0;
  for (const auto &[node, label] : labels) {
    const auto row = logits.row(node);
    const double max = row.maxCoeff();
    const double lse = max + std::log((row.array() - max).exp().sum());
    total += lse - row(label);
  }
  return total / static_cast<double>(labels.size());
}

double LossAndGradients(const GcnModel &model, const NormalizedAdjacency &adjacency,
                        const NodeLabels &labels, GcnGradients *gradients) {
  const GcnActivations act = Forward(model, adjacency);
  const double loss = MaskedCrossEntropy(act.logits, labels);
  if (gradients == nullptr) return loss;

  // dL/dlogits: (softmax - onehot) / |labels| on labeled rows, 0 elsewhere.
  Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(act.logits.rows(), act.logits.cols());
  const double inv = labels.empty() ? 0.0 : 1.0 / static_cast<double>(labels.size());
  for (const auto &[node, label] : labels) {
    Eigen::VectorXd p = SoftmaxRow(act.logits, node);
    p(label) -= 1.0;
    d_logits.row(node) = inv * p.transpose();
  }
  gradients->w2 = act.propagated.transpose() * d_logits;
  gradients->b2 = d_logits.colwise().sum().transpose();
  // A is used transposed since it need not be symmetric.
  const SparseMatrix a_t = adjacency.matrix.transpose();
  Eigen::MatrixXd d_hidden = a_t * (d_logits * model.w2.transpose());
  Eigen::MatrixXd d_pre = (act.pre_hidden.array() > 0.0).cast<double>() * d_hidden.array();
  gradients->w1 = a_t * d_pre;
  gradients->b1 = d_pre.colwise().sum().transpose();
  return loss;
}

TrainResult Train(GcnModel model, const NormalizedAdjacency &adjacency,
                  const NodeLabels &labels, const TrainConfig &config) {
  config.Validate();
  if (labels.empty()) throw InputError("no labeled nodes to train on");
  TrainResult result;
  result.loss_history.reserve(config.epochs);
  GcnGradients g;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double loss = LossAndGradients(model, adjacency, labels, &g);
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "non-finite loss " << loss << " at epoch " << epoch << " (lr "
          << config.learning_rate << ", N " << model.num_nodes() << ")";
      throw InvariantError(msg.str());
    }
    result.loss_history.push_back(loss);
    model.w1 -= config.learning_rate * g.w1;
    model.b1 -= config.learning_rate * g.b1;
    model.w2 -= config.learning_rate * g.w2;
    model.b2 -= config.learning_rate * g.b2;
  }
  result.model = std::move(model);
  return result;
}

double Accuracy(const GcnModel &model, const NormalizedAdjacency &adjacency,
                const NodeLabels &labels) {
  if (labels.empty()) return 0.0;
  const GcnActivations act = Forward(model, adjacency);
  CheckLabels(labels, act.logits.rows(), act.logits.cols());
  int correct = 0;
  for (const auto &[node, label] : labels) {
    Eigen::Index best = 0;
    act.logits.row(node).maxCoeff(&best);
    if (best == label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

EmbeddingTable ExtractEmbeddings(const GcnModel &model, const NormalizedAdjacency &adjacency) {
  EmbeddingTable table;
  table.vectors = Forward(model, adjacency).hidden;
  return table;
}

double GradientCheck(const GcnModel &model, const NormalizedAdjacency &adjacency,
                     const NodeLabels &labels, double epsilon, int num_coordinates,
                     uint64_t seed) {
  if (!(epsilon > 0)) throw InputError("gradient check epsilon must be positive");
  GcnGradients analytic;
  LossAndGradients(model, adjacency, labels, &analytic);
  const auto grad_params = Params(&analytic);

  GcnModel probe = model;
  const auto params = Params(&probe);
  Eigen::Index total = 0;
  for (const ParamRef &p : params) total += p.size;

  std::vector<Eigen::Index> coords(total);
  std::iota(coords.begin(), coords.end(), 0);
  if (num_coordinates < total) {
    // Partial Fisher-Yates with the local uniform source.
    std::mt19937_64 rng(seed);
    for (Eigen::Index i = 0; i < num_coordinates; ++i) {
      const auto j = i + static_cast<Eigen::Index>(UnitUniform(rng) * (total - i));
      std::swap(coords[i], coords[j]);
    }
    coords.resize(num_coordinates);
  }

  double worst = 0.0;
  for (Eigen::Index k : coords) {
    double &theta = Coordinate(params, k);
    const double saved = theta;
    theta = saved + epsilon;
    const double plus = LossAndGradients(probe, adjacency, labels, nullptr);
    theta = saved - epsilon;
    const double minus = LossAndGradients(probe, adjacency, labels, nullptr);
    theta = saved;
    const double numeric = (plus - minus) / (2.0 * epsilon);
    const double a = Coordinate(grad_params, k);
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-12});
    worst = std::max(worst, std::abs(a - numeric) / denom);
  }
  return worst;
}

std::string EncodeModel(const GcnModel &model) {
  nlohmann::json h;
  h["N"] = model.num_nodes();
  h["H"] = model.hidden();
  h["mu"] = model.num_classes();
  h["seed"] = model.seed;
  BinaryWriter w;
  PutMatrix(w, model.w1);
  for (Eigen::Index i = 0; i < model.b1.size(); ++i) w.PutF64(model.b1(i));
  PutMatrix(w, model.w2);
  for (Eigen::Index i = 0; i < model.b2.size(); ++i) w.PutF64(model.b2(i));
  return EncodeFramed(kModelMagic, h, w.buffer());
}

GcnModel DecodeModel(std::string_view bytes, const std::string &what) {
  const FramedFile file = DecodeFramed(bytes, kModelMagic, what);
  const int64_t n = HeaderInt(file.header, "N", what);
  const int64_t hidden = HeaderInt(file.header, "H", what);
  const int64_t mu = HeaderInt(file.header, "mu", what);
  if (!file.header.contains("seed") || !file.header["seed"].is_number_unsigned()) {
    throw InputError(what + ": header field 'seed' missing");
  }
  const uint64_t expected = 8 * static_cast<uint64_t>(n * hidden + hidden + hidden * mu + mu);
  if (file.payload.size() != expected) {
    throw InputError(what + ": payload is " + std::to_string(file.payload.size()) +
                     " bytes, header implies " + std::to_string(expected));
  }
  BinaryReader r(file.payload, what);
  GcnModel m;
  m.seed = file.header["seed"].get<uint64_t>();
  m.w1 = GetMatrix(r, n, hidden);
  m.b1.resize(hidden);
  for (int64_t i = 0; i < hidden; ++i) m.b1(i) = r.GetF64();
  m.w2 = GetMatrix(r, hidden, mu);
  m.b2.resize(mu);
  for (int64_t i = 0; i < mu; ++i) m.b2(i) = r.GetF64();
  return m;
}

void WriteModel(const GcnModel &model, const std::string &path) {
  WriteFileBytes(path, EncodeModel(model));
}

GcnModel ReadModel(const std::string &path) { return DecodeModel(ReadFileBytes(path), path); }

std::string EncodeEmbeddings(const EmbeddingTable &table) {
  nlohmann::json h;
  h["N"] = table.size();
  h["H"] = table.width();
  h["vocab_hash"] = table.vocab_hash;
  BinaryWriter w;
  for (Eigen::Index i = 0; i < table.vectors.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.vectors.cols(); ++j) {
      w.PutF32(static_cast<float>(table.vectors(i, j)));
    }
  }
  return EncodeFramed(kEmbeddingMagic, h, w.buffer());
}

EmbeddingTable DecodeEmbeddings(std::string_view bytes, const std::string &what) {
  const FramedFile file = DecodeFramed(bytes, kEmbeddingMagic, what);
  const int64_t n = HeaderInt(file.header, "N", what);
  const int64_t hidden = HeaderInt(file.header, "H", what);
  if (!file.header.contains("vocab_hash") || !file.header["vocab_hash"].is_number_unsigned()) {
    throw InputError(what + ": header field 'vocab_hash' missing");
  }
  const uint64_t expected = 4 * static_cast<uint64_t>(n * hidden);
  if (file.payload.size() != expected) {
    throw InputError(what + ": payload is " + std::to_string(file.payload.size()) +
                     " bytes, header implies " + std::to_string(expected));
  }
  BinaryReader r(file.payload, what);
  EmbeddingTable t;
  t.vocab_hash = file.header["vocab_hash"].get<uint64_t>();
  t.vectors.resize(n, hidden);
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = 0; j < hidden; ++j) t.vectors(i, j) = r.GetF32();
  }
  return t;
}

void WriteEmbeddings(const EmbeddingTable &table, const std::string &path) {
  WriteFileBytes(path, EncodeEmbeddings(table));
}

EmbeddingTable ReadEmbeddings(const std::string &path) {
  return DecodeEmbeddings(ReadFileBytes(path), path);
}

}  // namespace victr
