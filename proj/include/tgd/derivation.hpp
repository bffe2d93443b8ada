#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tgd/homomorphism.hpp"
#include "tgd/syntax.hpp"

namespace tgd {

struct PathElement {
  Atom atom;
  RuleInstance instance;

  friend bool operator==(const PathElement&, const PathElement&) = default;
};

using DerivationPath = std::vector<PathElement>;

struct PathCheck {
  bool valid = true;
  std::size_t index = 0;  // first offending element
  std::string diagnostic;
  explicit operator bool() const { return valid; }
};

PathCheck validate_path(const DerivationPath& path);
bool paths_comparable(const DerivationPath& p1, const DerivationPath& p2);
std::string to_string(const DerivationPath& path);

// Position of α_{i+1} inside body(ρ_i), if any.
std::optional<std::size_t> recursive_index(const DerivationPath& path, std::size_t i);

struct TreeNode {
  Atom atom;
  std::optional<RuleInstance> instance;  // empty: database leaf (β,β)
  // one entry per body atom of the instance; empty optional = extensional,
  // i.e. left to be matched against the database
  std::vector<std::optional<std::size_t>> children;
  std::optional<std::size_t> parent;

  bool is_fact() const { return !instance.has_value(); }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DerivationTree {
 public:
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& root() const { return nodes.front(); }
  bool empty() const { return nodes.empty(); }
  // rule nodes on the longest root-to-leaf path
  std::size_t depth() const;
  bool is_ground() const;
  // labels of nodes without children nodes; fact leaves are (β,β)
  std::vector<std::pair<Atom, std::string>> leaf_labels() const;
  // body atoms not expanded by a rule node: (node, body position)
  std::vector<std::pair<std::size_t, std::size_t>> extensional() const;
  // every root-to-leaf sequence of rule nodes, as derivation paths
  std::vector<DerivationPath> paths() const;
  std::vector<std::size_t> chain_to(std::size_t node) const;  // root .. node
};

// Structural checks on trees: children match bodies, fresh nulls stay out
// of descendants, leaf bodies are null-free.
PathCheck validate_tree(const DerivationTree& tree);

struct TreeEnumOptions {
  std::size_t depth_bound = 1;
  std::optional<std::string> root_predicate;
  // when set, the root atom is unified with this pattern (its variables are
  // renamed apart first); implies its predicate as root predicate
  std::optional<Atom> root_pattern;
  // when set, only these predicates may be left extensional
  std::optional<std::set<std::string>> extensional;
  std::size_t max_trees = std::numeric_limits<std::size_t>::max();
};

// Every derivation tree up to the depth bound (modulo renaming), by most
// general top-down unification.  The visitor returns false to stop.  Returns
// the number of trees visited.
std::size_t enumerate_trees(const std::vector<RulePtr>& rules, const TreeEnumOptions& opts,
                            const std::function<bool(const DerivationTree&)>& visit);
std::vector<DerivationTree> enumerate_trees(const std::vector<RulePtr>& rules, const TreeEnumOptions& opts);

// All instantiations of an abstract tree on db: extensional atoms become
// database facts with (β,β) leaves.  Nodes introducing the same null must
// become the same ground trigger.
std::size_t instantiate_tree(const DerivationTree& tree, const Database& db,
                             const std::function<bool(const DerivationTree&)>& visit);
std::vector<DerivationTree> instantiate_tree(const DerivationTree& tree, const Database& db,
                                             std::size_t limit = std::numeric_limits<std::size_t>::max());

std::optional<Homomorphism> tree_supports(const DerivationTree& inst, const Atom& goal);

// Renames variables to X1.. and nulls to n1.. in order of first occurrence.
DerivationTree canonical(const DerivationTree& tree);
DerivationPath canonical(const DerivationPath& path);

// Applies a term map to every label of an instance.
RuleInstance rename(const RuleInstance& ri, const std::map<Term, Term>& m);

std::string export_dot(const DerivationTree& tree);

}  // namespace tgd
