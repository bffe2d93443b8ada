#pragma once

#include <utility>
#include <vector>

#include "tgd/errors.hpp"
#include "tgd/loops.hpp"

namespace tgd {

struct FoldError : Error {
  using Error::Error;
};

// Collapses elements i..j (0-based, i < j) of a path into one element
// (α_i, [body_b(ρ_j), body_h(ρ_i) -> α_i]).  The fragment must be a loop
// pattern with comparable endpoints and an LR split; otherwise throws
// FoldError naming the failed condition.  Elements after j survive when
// they continue through body_b.
DerivationPath fold_loop(const DerivationPath& path, std::size_t i, std::size_t j);

// Tree version: node j must be a rule-node descendant of node i.  Subtrees
// under body_h(ρ_i) and body_b(ρ_j) are kept, everything else in between
// is dropped.
DerivationTree fold_tree(const DerivationTree& tree, std::size_t node_i, std::size_t node_j);

// (i, j) node pairs on a common root-to-leaf chain that fold_tree accepts
std::vector<std::pair<std::size_t, std::size_t>> foldable_loops(const DerivationTree& tree);

}  // namespace tgd
