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

#include "support/oracles.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace victr::testing {

DenseMatrix ToDense(const Eigen::MatrixXd &m) {
  DenseMatrix out(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

Eigen::MatrixXd FromDense(const DenseMatrix &m) {
  const size_t cols = m.empty() ? 0 : m[0].size();
  Eigen::MatrixXd out(m.size(), cols);
  for (size_t i = 0; i < m.size(); ++i) {
    for (size_t j = 0; j < cols; ++j) out(i, j) = m[i][j];
  }
  return out;
}

DenseMatrix Multiply(const DenseMatrix &a, const DenseMatrix &b) {
  const size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  DenseMatrix out(n, std::vector<double>(m, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (size_t t = 0; t < k; ++t) s += a[i][t] * b[t][j];
      out[i][j] = s;
    }
  }
  return out;
}

DenseForward GcnForwardOracle(const DenseMatrix &a, const DenseMatrix &w1,
                              const std::vector<double> &b1, const DenseMatrix &w2,
                              const std::vector<double> &b2) {
  DenseForward out;
  out.hidden = Multiply(a, w1);
  for (auto &row : out.hidden) {
    for (size_t j = 0; j < row.size(); ++j) row[j] = std::max(0.0, row[j] + b1[j]);
  }
  out.logits = Multiply(Multiply(a, out.hidden), w2);
  for (auto &row : out.logits) {
    for (size_t j = 0; j < row.size(); ++j) row[j] += b2[j];
  }
  return out;
}

Eigensystem JacobiEigen(DenseMatrix a, int max_sweeps) {
  const size_t n = a.size();
  DenseMatrix v(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-30) break;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t x, size_t y) { return a[x][x] > a[y][y]; });
  Eigensystem out;
  out.vectors.assign(n, std::vector<double>(n));
  for (size_t k = 0; k < n; ++k) {
    out.values.push_back(a[order[k]][order[k]]);
    for (size_t i = 0; i < n; ++i) out.vectors[i][k] = v[i][order[k]];
  }
  return out;
}

DenseMatrix Covariance(const DenseMatrix &x) {
  const size_t n = x.size(), d = x.empty() ? 0 : x[0].size();
  std::vector<double> mean(d, 0.0);
  for (const auto &row : x) {
    for (size_t j = 0; j < d; ++j) mean[j] += row[j] / static_cast<double>(n);
  }
  DenseMatrix cov(d, std::vector<double>(d, 0.0));
  for (const auto &row : x) {
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = 0; j < d; ++j) {
        cov[i][j] += (row[i] - mean[i]) * (row[j] - mean[j]) / static_cast<double>(n - 1);
      }
    }
  }
  return cov;
}

std::map<WeightKey, double> NaiveWeights(std::span<const SceneGraph> corpus) {
  std::map<WeightKey, double> count;
  std::map<std::string, double> from_object, from_relation, from_attribute;
  for (const SceneGraph &g : corpus) {
    auto word = [&](int id) {
      for (const SceneObject &o : g.objects) {
        if (o.id == id) return o.word;
      }
      return std::string("?");
    };
    for (const SceneRelation &r : g.relations) {
      count[{"or", word(r.subject), r.predicate}] += 1;
      count[{"ro", r.predicate, word(r.object)}] += 1;
      from_object[word(r.subject)] += 1;
      from_relation[r.predicate] += 1;
    }
    for (const SceneAttribute &a : g.attributes) {
      count[{"oa", word(a.object_id), a.word}] += 1;
      from_attribute[a.word] += 1;
    }
  }
  std::map<WeightKey, double> out;
  for (const auto &[key, c] : count) {
    const auto &[kind, src, dst] = key;
    const double denom = kind == "or"   ? from_object[src]
                         : kind == "ro" ? from_relation[src]
                                        : from_attribute[dst];
    out[key] = c / denom;
  }
  return out;
}

}  // namespace victr::testing
