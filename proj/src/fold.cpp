#include "tgd/fold.hpp"

#include <algorithm>
#include <functional>

#include "tgd/comparability.hpp"

namespace tgd {

namespace {

struct Plan {
  std::vector<bool> keep_b;  // per body position of ρ_i: true = body_b (taken from ρ_j)
  RuleInstance folded;
};

Plan plan(const DerivationPath& seg) {
  const RuleInstance& ri = seg.front().instance;
  const RuleInstance& rj = seg.back().instance;
  bool last_ok = comparable_instances(ri, rj) || comparable_instances(ri, closed_last(seg));
  if (!last_ok) throw FoldError("endpoints not comparable");
  auto lp = as_loop_pattern(seg);
  if (!lp) throw FoldError("fragment is not a loop pattern");
  auto w = check_lr(*lp);
  if (!w) throw FoldError("no LR split for the fragment (loop restriction fails)");
  const auto& hs = w->splits.front().body_h;

  Plan p;
  TGD rule;
  rule.id = "fold(" + ri.base->id() + ")";
  for (std::size_t k = 0; k < ri.body.size(); ++k) {
    bool in_h = std::find(hs.begin(), hs.end(), ri.body[k]) != hs.end();
    p.keep_b.push_back(!in_h);
    rule.body.push_back(in_h ? ri.body[k] : rj.body.at(k));
  }
  rule.head.push_back(ri.head);
  auto base = std::make_shared<const NormalTGD>(NormalTGD::unchecked(rule));
  p.folded.base = base;
  p.folded.head = ri.head;
  p.folded.body = rule.body;
  p.folded.fresh_nulls = ri.fresh_nulls;
  return p;
}

}  // namespace

DerivationPath fold_loop(const DerivationPath& path, std::size_t i, std::size_t j) {
  if (i >= j || j >= path.size()) throw FoldError("fold needs 0 <= i < j < path length");
  DerivationPath seg(path.begin() + i, path.begin() + j + 1);
  Plan p = plan(seg);
  DerivationPath out(path.begin(), path.begin() + i);
  out.push_back({path[i].atom, p.folded});
  if (j + 1 < path.size()) {
    auto r = recursive_index(path, j);
    if (r && p.keep_b[*r]) out.insert(out.end(), path.begin() + j + 1, path.end());
  }
  return out;
}

DerivationTree fold_tree(const DerivationTree& tree, std::size_t node_i, std::size_t node_j) {
  if (node_i >= tree.nodes.size() || node_j >= tree.nodes.size()) throw FoldError("node out of range");
  auto chain = tree.chain_to(node_j);
  auto at = std::find(chain.begin(), chain.end(), node_i);
  if (at == chain.end() || *at == node_j) throw FoldError("node j is not a proper descendant of node i");
  DerivationPath seg;
  for (auto it = at; it != chain.end(); ++it) {
    const auto& n = tree.nodes[*it];
    if (n.is_fact()) throw FoldError("fact node inside the fragment");
    seg.push_back({n.atom, *n.instance});
  }
  Plan p = plan(seg);

  // rebuild in preorder so parents precede children
  DerivationTree out;
  std::function<std::size_t(std::size_t, std::optional<std::size_t>)> copy =
      [&](std::size_t v, std::optional<std::size_t> parent) -> std::size_t {
    std::size_t idx = out.nodes.size();
    out.nodes.push_back(tree.nodes[v]);
    out.nodes[idx].parent = parent;
    const TreeNode& src = tree.nodes[v];
    std::vector<std::optional<std::size_t>> kids = src.children;
    if (v == node_i) {
      out.nodes[idx].instance = p.folded;
      for (std::size_t k = 0; k < kids.size(); ++k)
        if (p.keep_b[k]) kids[k] = tree.nodes[node_j].children[k];
    }
    for (std::size_t k = 0; k < kids.size(); ++k)
      if (kids[k]) {
        std::size_t c = copy(*kids[k], idx);
        out.nodes[idx].children[k] = c;
      } else {
        out.nodes[idx].children[k] = std::nullopt;
      }
    return idx;
  };
  copy(0, std::nullopt);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> foldable_loops(const DerivationTree& tree) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t j = 0; j < tree.nodes.size(); ++j) {
    if (tree.nodes[j].is_fact()) continue;
    auto chain = tree.chain_to(j);
    for (std::size_t a = 0; a + 1 < chain.size(); ++a) {
      DerivationPath seg;
      for (std::size_t b = a; b < chain.size(); ++b) seg.push_back({tree.nodes[chain[b]].atom, *tree.nodes[chain[b]].instance});
      if (!comparable_instances(seg.front().instance, seg.back().instance)) continue;
      auto lp = as_loop_pattern(seg);
      if (lp && check_lr(*lp)) out.emplace_back(chain[a], j);
    }
  }
  return out;
}

}  // namespace tgd
