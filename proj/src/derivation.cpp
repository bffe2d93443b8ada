#include "tgd/derivation.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tgd/comparability.hpp"
#include "unify.hpp"

namespace tgd {

namespace {

bool mentions(const RuleInstance& ri, const Term& t) {
  auto in = [&](const Atom& a) { return std::find(a.args.begin(), a.args.end(), t) != a.args.end(); };
  if (in(ri.head)) return true;
  return std::any_of(ri.body.begin(), ri.body.end(), in);
}

bool mentions(const TreeNode& n, const Term& t) {
  if (n.instance) return mentions(*n.instance, t);
  return std::find(n.atom.args.begin(), n.atom.args.end(), t) != n.atom.args.end();
}

}  // namespace

PathCheck validate_path(const DerivationPath& path) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto& e = path[i];
    if (!(e.atom == e.instance.head))
      return {false, i, "element " + std::to_string(i + 1) + ": atom " + e.atom.str() + " is not the head of its instance"};
    try {
      auto again = instantiate(e.instance.base, e.instance.theta);
      if (!(again.head == e.instance.head && again.body == e.instance.body))
        return {false, i, "element " + std::to_string(i + 1) + ": instance is not base rule under theta"};
    } catch (const std::exception& ex) {
      return {false, i, "element " + std::to_string(i + 1) + ": " + ex.what()};
    }
    if (i + 1 < path.size()) {
      const auto& body = e.instance.body;
      if (std::find(body.begin(), body.end(), path[i + 1].atom) == body.end())
        return {false, i + 1,
                "element " + std::to_string(i + 2) + ": atom " + path[i + 1].atom.str() + " is not in the body of element " +
                    std::to_string(i + 1)};
    }
    for (const auto& n : e.instance.fresh_nulls)
      for (std::size_t j = i + 1; j < path.size(); ++j)
        if (mentions(path[j].instance, n))
          return {false, j,
                  "freshness: null " + n.str() + " introduced by element " + std::to_string(i + 1) +
                      " reappears in element " + std::to_string(j + 1)};
  }
  return {};
}

bool paths_comparable(const DerivationPath& p1, const DerivationPath& p2) {
  if (p1.size() != p2.size()) return false;
  for (std::size_t i = 0; i < p1.size(); ++i)
    if (!comparable_instances(p1[i].instance, p2[i].instance)) return false;
  return true;
}

std::string to_string(const DerivationPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += "  ";
    out += "(" + path[i].atom.str() + ", " + path[i].instance.base->id() + ": " + path[i].instance.str() + ")";
  }
  return out;
}

std::optional<std::size_t> recursive_index(const DerivationPath& path, std::size_t i) {
  if (i + 1 >= path.size()) return std::nullopt;
  const auto& body = path[i].instance.body;
  auto it = std::find(body.begin(), body.end(), path[i + 1].atom);
  if (it == body.end()) return std::nullopt;
  return static_cast<std::size_t>(it - body.begin());
}

std::size_t DerivationTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t best = 0;
  // parents precede children in every tree we build
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::size_t up = nodes[i].parent ? d[*nodes[i].parent] : 0;
    d[i] = up + (nodes[i].is_fact() ? 0 : 1);
    best = std::max(best, d[i]);
  }
  return best;
}

bool DerivationTree::is_ground() const {
  for (const auto& n : nodes) {
    if (!n.atom.is_ground()) return false;
    if (n.instance)
      for (const auto& b : n.instance->body)
        if (!b.is_ground()) return false;
  }
  return true;
}

std::vector<std::pair<Atom, std::string>> DerivationTree::leaf_labels() const {
  std::vector<std::pair<Atom, std::string>> out;
  for (const auto& n : nodes) {
    bool leaf = std::none_of(n.children.begin(), n.children.end(), [](const auto& c) { return c.has_value(); });
    if (leaf) out.emplace_back(n.atom, n.instance ? n.instance->str() : n.atom.str());
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> DerivationTree::extensional() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t k = 0; k < nodes[i].children.size(); ++k)
      if (!nodes[i].children[k]) out.emplace_back(i, k);
  return out;
}

std::vector<std::size_t> DerivationTree::chain_to(std::size_t node) const {
  std::vector<std::size_t> out;
  for (std::optional<std::size_t> v = node; v; v = nodes[*v].parent) out.push_back(*v);
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<DerivationPath> DerivationTree::paths() const {
  std::vector<DerivationPath> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_fact()) continue;
    bool rule_child = false;
    for (const auto& c : nodes[i].children)
      if (c && !nodes[*c].is_fact()) rule_child = true;
    if (rule_child) continue;
    DerivationPath p;
    for (auto v : chain_to(i)) p.push_back({nodes[v].atom, *nodes[v].instance});
    out.push_back(std::move(p));
  }
  return out;
}

PathCheck validate_tree(const DerivationTree& tree) {
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& n = tree.nodes[i];
    if (n.is_fact()) continue;
    const auto& ri = *n.instance;
    if (!(n.atom == ri.head)) return {false, i, "node atom is not the head of its instance"};
    if (n.children.size() != ri.body.size()) return {false, i, "children do not match the body"};
    for (std::size_t k = 0; k < ri.body.size(); ++k)
      if (n.children[k] && !(tree.nodes[*n.children[k]].atom == ri.body[k]))
        return {false, i, "child " + std::to_string(k + 1) + " does not carry body atom " + ri.body[k].str()};
    bool leaf = true;
    for (const auto& c : n.children)
      if (c && !tree.nodes[*c].is_fact()) leaf = false;
    if (leaf)
      for (const auto& b : ri.body)
        if (b.has_nulls()) return {false, i, "leaf body mentions a null: " + b.str()};
    // fresh nulls stay out of the subtree
    std::vector<std::size_t> stack;
    for (const auto& c : n.children)
      if (c) stack.push_back(*c);
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (const auto& z : ri.fresh_nulls)
        if (mentions(tree.nodes[v], z))
          return {false, v, "null " + z.str() + " introduced by node " + std::to_string(i) + " reappears below it"};
      for (const auto& c : tree.nodes[v].children)
        if (c) stack.push_back(*c);
    }
  }
  for (const auto& [i, k] : tree.extensional())
    if (tree.nodes[i].instance->body[k].has_nulls())
      return {false, i, "unexpanded body atom mentions a null: " + tree.nodes[i].instance->body[k].str()};
  return {};
}

RuleInstance rename(const RuleInstance& ri, const std::map<Term, Term>& m) {
  auto f = [&](const Term& t) {
    auto it = m.find(t);
    return it == m.end() ? t : it->second;
  };
  auto fa = [&](const Atom& a) {
    Atom out{a.predicate, {}};
    for (const auto& t : a.args) out.args.push_back(f(t));
    return out;
  };
  RuleInstance out;
  out.base = ri.base;
  for (const auto& [v, t] : ri.theta.bindings()) out.theta.bind(v, f(t));
  out.head = fa(ri.head);
  for (const auto& b : ri.body) out.body.push_back(fa(b));
  for (const auto& n : ri.fresh_nulls) out.fresh_nulls.push_back(f(n));
  return out;
}

namespace {

class Canon {
 public:
  void see(const Term& t) {
    if (t.is_constant() || m.count(t)) return;
    m.emplace(t, t.is_variable() ? Term::variable("X" + std::to_string(++vars)) : Term::null(++nulls));
  }
  void see(const Atom& a) {
    for (const auto& t : a.args) see(t);
  }
  void see(const RuleInstance& ri) {
    see(ri.head);
    for (const auto& b : ri.body) see(b);
    for (const auto& t : ri.binding_tuple()) see(t);
  }
  Atom map(const Atom& a) const {
    Atom out{a.predicate, {}};
    for (const auto& t : a.args) out.args.push_back(m.count(t) ? m.at(t) : t);
    return out;
  }
  std::map<Term, Term> m;
  std::uint64_t vars = 0, nulls = 0;
};

}  // namespace

DerivationTree canonical(const DerivationTree& tree) {
  Canon c;
  for (const auto& n : tree.nodes) {
    c.see(n.atom);
    if (n.instance) c.see(*n.instance);
  }
  DerivationTree out = tree;
  for (auto& n : out.nodes) {
    n.atom = c.map(n.atom);
    if (n.instance) n.instance = rename(*n.instance, c.m);
  }
  return out;
}

DerivationPath canonical(const DerivationPath& path) {
  Canon c;
  for (const auto& e : path) {
    c.see(e.atom);
    c.see(e.instance);
  }
  DerivationPath out;
  for (const auto& e : path) out.push_back({c.map(e.atom), rename(e.instance, c.m)});
  return out;
}

// ---------------------------------------------------------------- trees

namespace {

struct RawNode {
  detail::Copy copy;
  std::optional<std::size_t> parent;
  std::vector<std::optional<std::size_t>> children;
  std::size_t depth;
};

struct BuildState {
  detail::Store store;
  std::vector<RawNode> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> work;
};

class TreeEnumerator {
 public:
  TreeEnumerator(const std::vector<RulePtr>& rules, const TreeEnumOptions& opts,
                 const std::function<bool(const DerivationTree&)>& visit)
      : rules_(rules), opts_(opts), visit_(visit) {}

  std::size_t run() {
    if (opts_.depth_bound == 0) return 0;
    for (const auto& r : rules_) {
      if (opts_.root_predicate && r->head().predicate != *opts_.root_predicate) continue;
      if (opts_.root_pattern && r->head().predicate != opts_.root_pattern->predicate) continue;
      BuildState s;
      Atom target{r->head().predicate, {}};
      if (opts_.root_pattern) {
        std::map<Term, Term> fresh;
        for (const auto& t : opts_.root_pattern->args) {
          if (t.is_variable() && !fresh.count(t)) fresh.emplace(t, s.store.fresh_var());
          target.args.push_back(t.is_variable() ? fresh.at(t) : t);
        }
      } else {
        for (std::size_t k = 0; k < r->head().args.size(); ++k) target.args.push_back(s.store.fresh_var());
      }
      for (auto& [store, copy] : detail::unify_head(s.store, r, target, false)) {
        BuildState st;
        st.store = std::move(store);
        add_node(st, std::move(copy), std::nullopt, 1);
        if (!expand(st)) return count_;
      }
    }
    return count_;
  }

 private:
  static void add_node(BuildState& s, detail::Copy copy, std::optional<std::size_t> parent, std::size_t depth) {
    std::size_t idx = s.nodes.size();
    std::size_t nb = copy.rule->body().size();
    s.nodes.push_back({std::move(copy), parent, std::vector<std::optional<std::size_t>>(nb), depth});
    for (std::size_t k = nb; k-- > 0;) s.work.emplace_back(idx, k);
  }

  bool expand(BuildState& s) {
    if (s.work.empty()) return emit(s);
    auto [node, k] = s.work.back();
    s.work.pop_back();
    Atom beta = s.nodes[node].copy.body_atom(s.store, k);

    bool may_stay = !beta.has_nulls() && (!opts_.extensional || opts_.extensional->count(beta.predicate));
    if (may_stay) {
      BuildState next = s;
      if (!expand(next)) return false;
    }
    if (s.nodes[node].depth >= opts_.depth_bound) return true;
    for (const auto& r : rules_) {
      if (r->head().predicate != beta.predicate) continue;
      for (auto& [store, copy] : detail::unify_head(s.store, r, beta, true)) {
        BuildState next;
        next.store = std::move(store);
        next.nodes = s.nodes;
        next.work = s.work;
        next.nodes[node].children[k] = next.nodes.size();
        add_node(next, std::move(copy), node, s.nodes[node].depth + 1);
        if (!expand(next)) return false;
      }
    }
    return true;
  }

  bool emit(const BuildState& s) {
    DerivationTree t;
    for (const auto& rn : s.nodes) {
      TreeNode n;
      n.instance = rn.copy.finish(s.store);
      n.atom = n.instance->head;
      n.children = rn.children;
      n.parent = rn.parent;
      t.nodes.push_back(std::move(n));
    }
    if (!validate_tree(t)) return true;
    ++count_;
    return visit_(canonical(t)) && count_ < opts_.max_trees;
  }

  const std::vector<RulePtr>& rules_;
  const TreeEnumOptions& opts_;
  const std::function<bool(const DerivationTree&)>& visit_;
  std::size_t count_ = 0;
};

}  // namespace

std::size_t enumerate_trees(const std::vector<RulePtr>& rules, const TreeEnumOptions& opts,
                            const std::function<bool(const DerivationTree&)>& visit) {
  return TreeEnumerator(rules, opts, visit).run();
}

std::vector<DerivationTree> enumerate_trees(const std::vector<RulePtr>& rules, const TreeEnumOptions& opts) {
  std::vector<DerivationTree> out;
  enumerate_trees(rules, opts, [&](const DerivationTree& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

// --------------------------------------------------------- instantiation

namespace {

class Instantiator {
 public:
  Instantiator(const DerivationTree& t, const Database& db, const std::function<bool(const DerivationTree&)>& visit)
      : tree_(t), visit_(visit) {
    for (const auto& f : db.facts) facts_[f.predicate].push_back(&f);
    ext_ = t.extensional();
    for (const auto& n : t.nodes) {
      if (n.instance)
        for (const auto& v : non_constant_terms(n.instance->body))
          if (v.is_variable()) vars_.insert(v);
      for (const auto& v : n.atom.args)
        if (v.is_variable()) vars_.insert(v);
    }
  }

  std::size_t run() {
    search(0, Homomorphism{});
    return count_;
  }

 private:
  bool search(std::size_t k, const Homomorphism& h) {
    if (k == ext_.size()) return finish(h);
    const auto& [node, pos] = ext_[k];
    const Atom& a = tree_.nodes[node].instance->body[pos];
    auto it = facts_.find(a.predicate);
    if (it == facts_.end()) return true;
    for (const Atom* f : it->second) {
      Homomorphism next = h;
      if (extend_atom(next, a, *f) && !search(k + 1, next)) return false;
    }
    return true;
  }

  bool finish(const Homomorphism& h) {
    for (const auto& v : vars_)
      if (!h.mapping.count(v)) return true;
    std::map<Term, Term> m(h.mapping.begin(), h.mapping.end());
    DerivationTree out;
    out.nodes.reserve(tree_.nodes.size() + ext_.size());
    for (const auto& n : tree_.nodes) {
      TreeNode g = n;
      if (g.instance) g.instance = rename(*g.instance, m);
      g.atom = h.apply(n.atom);
      out.nodes.push_back(std::move(g));
    }
    // one ground trigger per null
    std::map<Term, const RuleInstance*> introducer;
    for (const auto& n : out.nodes) {
      if (!n.instance) continue;
      for (const auto& z : n.instance->fresh_nulls) {
        auto [it, fresh] = introducer.emplace(z, &*n.instance);
        if (!fresh && !(*it->second == *n.instance)) return true;
      }
    }
    for (const auto& [node, pos] : ext_) {
      TreeNode leaf;
      leaf.atom = out.nodes[node].instance->body[pos];
      leaf.parent = node;
      out.nodes[node].children[pos] = out.nodes.size();
      out.nodes.push_back(std::move(leaf));
    }
    ++count_;
    return visit_(out);
  }

  const DerivationTree& tree_;
  const std::function<bool(const DerivationTree&)>& visit_;
  std::unordered_map<std::string, std::vector<const Atom*>> facts_;
  std::vector<std::pair<std::size_t, std::size_t>> ext_;
  std::set<Term> vars_;
  std::size_t count_ = 0;
};

}  // namespace

std::size_t instantiate_tree(const DerivationTree& tree, const Database& db,
                             const std::function<bool(const DerivationTree&)>& visit) {
  if (tree.empty()) return 0;
  return Instantiator(tree, db, visit).run();
}

std::vector<DerivationTree> instantiate_tree(const DerivationTree& tree, const Database& db, std::size_t limit) {
  std::vector<DerivationTree> out;
  if (limit == 0) return out;
  instantiate_tree(tree, db, [&](const DerivationTree& t) {
    out.push_back(t);
    return out.size() < limit;
  });
  return out;
}

std::optional<Homomorphism> tree_supports(const DerivationTree& inst, const Atom& goal) {
  if (inst.empty()) return std::nullopt;
  Homomorphism h;
  if (!extend_atom(h, goal, inst.root().atom)) return std::nullopt;
  return h;
}

// ------------------------------------------------------------------- dot

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const DerivationTree& tree) {
  std::ostringstream os;
  os << "digraph derivation {\n  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& n = tree.nodes[i];
    std::string rho = n.instance ? n.instance->str() : n.atom.str();
    os << "  w" << i << " [label=\"(" << escape(n.atom.str()) << ", " << escape(rho) << ")\"";
    if (n.is_fact()) os << ", style=rounded";
    os << "];\n";
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i)
    for (const auto& c : tree.nodes[i].children)
      if (c) os << "  w" << i << " -> w" << *c << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace tgd
