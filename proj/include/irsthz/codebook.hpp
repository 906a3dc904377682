// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef IRSTHZ_CODEBOOK_HPP
#define IRSTHZ_CODEBOOK_HPP

#include "irsthz/array.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace irsthz {

/// Smallest S with M^S >= K.
inline int num_stages(int branching, int num_leaves)
{
  if (branching < 2)
    throw std::invalid_argument("num_stages: branching factor must be >= 2");
  if (num_leaves < 1)
    throw std::invalid_argument("num_stages: K must be >= 1");
  int s = 0;
  long long span = 1;
  while (span < num_leaves) {
    span *= branching;
    ++s;
  }
  return std::max(s, 1);
}

namespace detail {

inline long long int_pow(int base, int exp)
{
  long long r = 1;
  for (int i = 0; i < exp; ++i)
    r *= base;
  return r;
}

} // namespace detail

/// K x M^s zero-one matrix D_s; column n (0-based) marks the live leaves below
/// candidate n of stage s. Leaves past K are dropped.
inline RMatrix selection_matrix(int stage, int branching, int num_leaves)
{
  const int total = num_stages(branching, num_leaves);
  if (stage < 1 || stage > total)
    throw std::out_of_range("selection_matrix: stage out of range");
  const long long cols = detail::int_pow(branching, stage);
  const long long span = detail::int_pow(branching, total - stage);
  RMatrix d = RMatrix::Zero(num_leaves, static_cast<Eigen::Index>(cols));
  for (long long n = 0; n < cols; ++n)
    for (long long r = n * span; r < (n + 1) * span && r < num_leaves; ++r)
      d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n)) = 1.0;
  return d;
}

/// Analog/digital split of a beam over two RF chains.
struct TwoChainBeam
{
  CMatrix analog;  ///< N x 2, unit-modulus entries
  CVector digital; ///< length 2

  CVector realize() const { return analog * digital; }
};

/// Any vector is the sum of two unit-modulus vectors scaled by a common c:
/// x_i = c (e^{j a_i} + e^{j b_i}) with c = max|x| / 2, a, b = arg x_i -+ acos(|x_i| / 2c).
inline TwoChainBeam two_rf_factorization(const CVector& w)
{
  const double peak = w.cwiseAbs().maxCoeff();
  if (!(peak > 0.0))
    throw std::invalid_argument("two_rf_factorization: zero beam");
  const double c = 0.5 * peak;
  TwoChainBeam out{CMatrix(w.size(), 2), CVector(2)};
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double ratio = std::min(1.0, std::abs(w[i]) / (2.0 * c));
    const double spread = std::acos(ratio);
    const double arg = std::arg(w[i]);
    out.analog(i, 0) = std::polar(1.0, arg + spread);
    out.analog(i, 1) = std::polar(1.0, arg - spread);
  }
  out.digital << c, c;
  return out;
}

/// One live node of the tree.
struct CodebookEntry
{
  BeamVector beam;        ///< unit norm
  double raw_norm = 1.0;  ///< norm of the projection before normalization
  int first_leaf = 0;     ///< live descendant leaves [first_leaf, end_leaf)
  int end_leaf = 0;
};

/// M-ary tree of beams over K uniform-in-sine leaves. Stages are numbered
/// 1..S (stage S holds the leaves); candidate indices are 0-based, and
/// stage s has M^s slots of which the trailing ones may be null.
class HierarchicalCodebook
{
public:
  HierarchicalCodebook(const ArraySpec& spec, int branching, int num_leaves)
      : spec_(spec), branching_(branching), num_leaves_(num_leaves),
        stages_count_(irsthz::num_stages(branching, num_leaves)),
        grid_(grid_directions(spec, num_leaves))
  {
    leaves_.resize(spec.num_elements, num_leaves);
    for (int i = 0; i < num_leaves; ++i)
      leaves_.col(i) = steering_vector(spec_, grid_.directions[static_cast<std::size_t>(i)]);

    gram_.compute(leaves_ * leaves_.adjoint());
    if (gram_.info() != Eigen::Success)
      throw std::runtime_error("HierarchicalCodebook: L L^H is singular");

    stages_.resize(static_cast<std::size_t>(stages_count_));
    for (int s = 1; s <= stages_count_; ++s) {
      const long long slots = detail::int_pow(branching_, s);
      const long long span = detail::int_pow(branching_, stages_count_ - s);
      auto& row = stages_[static_cast<std::size_t>(s - 1)];
      row.resize(static_cast<std::size_t>(slots));
      for (long long n = 0; n < slots; ++n) {
        const long long first = n * span;
        if (first >= num_leaves_)
          continue;
        const int end = static_cast<int>(std::min<long long>((n + 1) * span, num_leaves_));
        CodebookEntry e;
        e.first_leaf = static_cast<int>(first);
        e.end_leaf = end;
        if (s == stages_count_) {
          e.beam = {leaves_.col(static_cast<Eigen::Index>(first)), BeamKind::narrow};
          e.raw_norm = 1.0;
        } else {
          CVector raw = project(e.first_leaf, e.end_leaf);
          e.raw_norm = raw.norm();
          e.beam = {raw / e.raw_norm, BeamKind::wide};
        }
        row[static_cast<std::size_t>(n)] = std::move(e);
      }
    }
  }

  const ArraySpec& array() const { return spec_; }
  int branching() const { return branching_; }
  int num_leaves() const { return num_leaves_; }
  int num_stages() const { return stages_count_; }
  const BeamGrid& leaf_grid() const { return grid_; }
  double leaf_direction(int leaf) const { return grid_.directions.at(static_cast<std::size_t>(leaf)); }

  /// N_a x K matrix of leaf codewords.
  const CMatrix& leaves() const { return leaves_; }

  std::size_t stage_size(int stage) const { return stage_row(stage).size(); }

  const std::optional<CodebookEntry>& candidate(int stage, int index) const
  {
    const auto& row = stage_row(stage);
    if (index < 0 || static_cast<std::size_t>(index) >= row.size())
      throw std::out_of_range("HierarchicalCodebook: candidate index out of range");
    return row[static_cast<std::size_t>(index)];
  }

  /// Slots of stage+1 below (stage, index), nulls included; empty at the leaf stage.
  std::vector<int> children(int stage, int index) const
  {
    candidate(stage, index); // range check
    if (stage == stages_count_)
      return {};
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(branching_));
    for (int m = 0; m < branching_; ++m)
      out.push_back(index * branching_ + m);
    return out;
  }

  /// Root children (stage 1 slots).
  std::vector<int> roots() const
  {
    std::vector<int> out;
    for (int m = 0; m < branching_; ++m)
      out.push_back(m);
    return out;
  }

  /// Raw projection (L L^H)^{-1} L d for the indicator d of leaves [first, end).
  CVector project(int first, int end) const
  {
    CVector rhs = leaves_.middleCols(first, end - first).rowwise().sum();
    return gram_.solve(rhs);
  }

  /// Projection for column n of D_s; nullopt when the column is empty.
  std::optional<CVector> wide_beam_raw(int stage, int index) const
  {
    const auto& c = candidate(stage, index);
    if (!c)
      return std::nullopt;
    return project(c->first_leaf, c->end_leaf);
  }

private:
  const std::vector<std::optional<CodebookEntry>>& stage_row(int stage) const
  {
    if (stage < 1 || stage > stages_count_)
      throw std::out_of_range("HierarchicalCodebook: stage out of range");
    return stages_[static_cast<std::size_t>(stage - 1)];
  }

  ArraySpec spec_;
  int branching_;
  int num_leaves_;
  int stages_count_;
  BeamGrid grid_;
  CMatrix leaves_;
  Eigen::LLT<CMatrix> gram_;
  std::vector<std::vector<std::optional<CodebookEntry>>> stages_;
};

/// Wide beam of Criterion 2 from an explicit leaf matrix and selection column.
inline std::optional<BeamVector> wide_beam(const CMatrix& leaves, const RMatrix& selection,
                                           int column)
{
  const Eigen::VectorXd d = selection.col(column);
  if (d.sum() == 0.0)
    return std::nullopt;
  Eigen::LLT<CMatrix> gram(leaves * leaves.adjoint());
  if (gram.info() != Eigen::Success)
    throw std::runtime_error("wide_beam: L L^H is singular");
  CVector raw = gram.solve(leaves * d.cast<cplx>());
  return BeamVector{raw / raw.norm(), BeamKind::wide};
}

} // namespace irsthz

#endif // IRSTHZ_CODEBOOK_HPP
