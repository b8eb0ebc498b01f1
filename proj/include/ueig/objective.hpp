// Objective polynomials for the largest U-eigenvalue problem.
//
// Non-symmetric and partially symmetric tensors use the squared norm of the
// contraction over the first m-1 real blocks (degree 2(m-1)); fully
// symmetric tensors use the degree-m form Re<A, (x + iy)^m> over one block.

#ifndef UEIG_OBJECTIVE_HPP
#define UEIG_OBJECTIVE_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ueig/polynomial.hpp"
#include "ueig/realify.hpp"

namespace ueig {

/// Assignment of tensor modes 0..m-2 to real variable blocks. Modes in the
/// same merge group share one block.
struct VariableLayout {
  std::vector<std::size_t> mode_block;  ///< block index per free mode
  std::vector<VarRange> blocks;         ///< block ranges, each of size 2 n
  std::size_t nvars = 0;

  /// complex_dims covers all m modes; the last mode is the excluded one.
  static VariableLayout make(const std::vector<std::size_t>& complex_dims,
                             const std::vector<std::vector<std::size_t>>& merge_groups = {}) {
    if (complex_dims.size() < 2) throw DimensionError("layout needs a tensor of order >= 2");
    const std::size_t free = complex_dims.size() - 1;
    std::vector<long> group_of(free, -1);
    for (std::size_t g = 0; g < merge_groups.size(); ++g)
      for (std::size_t k : merge_groups[g]) {
        if (k >= free) throw DimensionError("inconsistent identification map: mode is not free");
        if (group_of[k] != -1) throw DimensionError("inconsistent identification map: overlapping groups");
        if (complex_dims[k] != complex_dims[merge_groups[g].front()])
          throw DimensionError("inconsistent identification map: merged modes differ in size");
        group_of[k] = static_cast<long>(g);
      }
    VariableLayout lay;
    std::vector<long> block_of_group(merge_groups.size(), -1);
    for (std::size_t k = 0; k < free; ++k) {
      long g = group_of[k];
      if (g >= 0 && block_of_group[static_cast<std::size_t>(g)] >= 0) {
        lay.mode_block.push_back(static_cast<std::size_t>(block_of_group[static_cast<std::size_t>(g)]));
        continue;
      }
      lay.mode_block.push_back(lay.blocks.size());
      if (g >= 0) block_of_group[static_cast<std::size_t>(g)] = static_cast<long>(lay.blocks.size());
      lay.blocks.push_back({lay.nvars, 2 * complex_dims[k]});
      lay.nvars += 2 * complex_dims[k];
    }
    return lay;
  }

  /// Real block vectors u^(1..m-1) for a point in the full variable vector.
  std::vector<Eigen::VectorXd> mode_vectors(const Eigen::VectorXd& u) const {
    std::vector<Eigen::VectorXd> out;
    for (std::size_t b : mode_block) {
      const auto& r = blocks[b];
      out.push_back(u.segment(static_cast<Eigen::Index>(r.offset), static_cast<Eigen::Index>(r.size)));
    }
    return out;
  }
};

/// ||<B, u^(mode_block(1)) x ... x u^(mode_block(m-1))>||^2 over layout.nvars variables.
inline Polynomial build_objective_squared(const RealTensor& b, const VariableLayout& layout) {
  const auto& dims = b.dims();
  const std::size_t m = dims.size();
  if (layout.mode_block.size() + 1 != m) throw DimensionError("layout does not match tensor order");
  for (std::size_t k = 0; k + 1 < m; ++k)
    if (layout.blocks[layout.mode_block[k]].size != dims[k])
      throw DimensionError("inconsistent identification map: block size mismatch");

  std::vector<Polynomial> comps(dims.back(), Polynomial(layout.nvars));
  std::vector<std::size_t> idx(m, 0);
  std::size_t flat = 0;
  Monomial e(layout.nvars);
  do {
    const double c = b[flat++];
    if (c == 0.0) continue;
    std::fill(e.begin(), e.end(), 0);
    for (std::size_t k = 0; k + 1 < m; ++k) ++e[layout.blocks[layout.mode_block[k]].offset + idx[k]];
    comps[idx[m - 1]].add_term(e, c);
  } while (detail::next_index(idx, dims));

  Polynomial f(layout.nvars);
  for (const auto& c : comps) f += c * c;
  return f;
}

/// Re<A, (x + iy)^m> over u = (x, y) in 2n variables. Requires a fully
/// symmetric tensor.
inline Polynomial build_objective_symmetric(const ComplexTensor& a) {
  if (a.symmetry().kind() != SymmetryClass::Kind::Full)
    throw SymmetryError("build_objective_symmetric: tensor is not declared fully symmetric");
  const RealTensor b = realify(a);
  const auto& dims = b.dims();
  const std::size_t nv = dims.front();
  Polynomial f(nv);
  std::vector<std::size_t> idx(dims.size(), 0);
  std::size_t flat = 0;
  Monomial e(nv);
  do {
    const double c = b[flat++];
    if (c == 0.0) continue;
    std::fill(e.begin(), e.end(), 0);
    for (std::size_t j : idx) ++e[j];
    f.add_term(e, c);
  } while (detail::next_index(idx, dims));
  return f;
}

/// Variables left after pinning the first imaginary coordinate of each
/// block to zero (removes the per-block phase freedom).
struct GaugeFixing {
  std::vector<std::size_t> eliminated;  ///< indices into the full variable vector
  std::vector<VarRange> blocks;         ///< block ranges in the reduced vector
  std::size_t full_nvars = 0;
  std::size_t nvars = 0;

  static GaugeFixing make(const std::vector<VarRange>& full_blocks, std::size_t full_nvars, bool enabled) {
    GaugeFixing g;
    g.full_nvars = full_nvars;
    std::size_t off = 0;
    for (const auto& r : full_blocks) {
      std::size_t sz = r.size;
      if (enabled) {
        g.eliminated.push_back(r.offset + r.size / 2);
        --sz;
      }
      g.blocks.push_back({off, sz});
      off += sz;
    }
    g.nvars = off;
    return g;
  }

  Polynomial apply(const Polynomial& p) const { return p.eliminate_zero(eliminated); }

  /// Reinserts zeros at the eliminated coordinates.
  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(full_nvars));
    std::vector<bool> gone(full_nvars, false);
    for (std::size_t v : eliminated) gone[v] = true;
    Eigen::Index j = 0;
    for (std::size_t i = 0; i < full_nvars; ++i)
      if (!gone[i]) full(static_cast<Eigen::Index>(i)) = reduced(j++);
    return full;
  }
};

}  // namespace ueig

#endif  // UEIG_OBJECTIVE_HPP
