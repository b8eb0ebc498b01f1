// Jacobian minor constraints for equality-constrained polynomial programs.
//
// For an objective f and a constraint g over variables u_1..u_n, critical
// points of f on {g = 0} make every 2x2 minor f'_i g'_j - f'_j g'_i vanish.
// Summing the minors along anti-diagonals i + j = r + 2 gives 2n - 3
// polynomials h_1..h_{2n-3}; adding h_r = 0 to the program leaves its
// maximum unchanged and makes the moment hierarchy exact at finite order.

#ifndef UEIG_JACOBIAN_HPP
#define UEIG_JACOBIAN_HPP

#include <cstddef>
#include <vector>

#include "ueig/polynomial.hpp"

namespace ueig {

struct JacobianConstraint {
  std::size_t block = 0;  ///< block index k (0 for the single-constraint form)
  std::size_t r = 0;      ///< one-based anti-diagonal index
  Polynomial poly;
};

namespace detail {

/// h_r over the variables of one block, using block-local indices.
inline std::vector<Polynomial> jacobian_minors(const Polynomial& f, const Polynomial& g, VarRange block) {
  const std::size_t nb = block.size;
  std::vector<Polynomial> fp, gp;
  for (std::size_t i = 0; i < nb; ++i) {
    fp.push_back(f.partial(block.offset + i));
    gp.push_back(g.partial(block.offset + i));
  }
  std::vector<Polynomial> h;
  if (nb < 2) return h;
  for (std::size_t r = 1; r + 3 <= 2 * nb; ++r) {
    Polynomial hr(f.nvars());
    // one-based i < j with i + j = r + 2
    for (std::size_t i = 1; i <= nb; ++i) {
      const std::size_t j = r + 2 - i;
      if (j <= i || j > nb) continue;
      hr += fp[i - 1] * gp[j - 1] - fp[j - 1] * gp[i - 1];
    }
    h.push_back(std::move(hr));
  }
  return h;
}

}  // namespace detail

/// h_r = sum_{i+j=r+2, i<j} (f'_i g'_j - f'_j g'_i), r = 1..2n-3, over all
/// n variables of f.
inline std::vector<Polynomial> build_h_single(const Polynomial& f, const Polynomial& g) {
  if (f.nvars() != g.nvars()) throw DimensionError("build_h_single: variable-count mismatch");
  if (f.nvars() < 2) throw std::invalid_argument("build_h_single: need at least two variables");
  return detail::jacobian_minors(f, g, {0, f.nvars()});
}

/// h_{k,r} for each block k with g_k = ||u^(k)||^2 - 1, pairing only the
/// variables inside block k. Blocks must be disjoint.
inline std::vector<JacobianConstraint> build_h_blocks(const Polynomial& f, const std::vector<VarRange>& blocks) {
  std::vector<bool> used(f.nvars(), false);
  for (const auto& b : blocks) {
    if (b.offset + b.size > f.nvars()) throw std::out_of_range("build_h_blocks: block out of range");
    for (std::size_t i = b.offset; i < b.offset + b.size; ++i) {
      if (used[i]) throw std::invalid_argument("build_h_blocks: overlapping blocks");
      used[i] = true;
    }
  }
  std::vector<JacobianConstraint> out;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const Polynomial g = sphere_constraint(f.nvars(), blocks[k]);
    auto h = detail::jacobian_minors(f, g, blocks[k]);
    for (std::size_t r = 0; r < h.size(); ++r) out.push_back({k, r + 1, std::move(h[r])});
  }
  return out;
}

}  // namespace ueig

#endif  // UEIG_JACOBIAN_HPP
