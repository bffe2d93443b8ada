#include "tgd/classes.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "tgd/normalizer.hpp"

namespace tgd {

ClassCheck is_linear(const std::vector<TGD>& rules) {
  for (const auto& r : rules)
    if (r.body.size() != 1) return {false, r.id + " has " + std::to_string(r.body.size()) + " body atoms"};
  return {};
}

ClassCheck is_multilinear(const std::vector<TGD>& rules) {
  for (const auto& r : rules) {
    auto all = var_set(r.body);
    for (const auto& b : r.body)
      if (var_set({b}) != all) return {false, r.id + ": body atom " + b.str() + " misses some body variable"};
  }
  return {};
}

ClassCheck is_domain_restricted(const std::vector<TGD>& rules) {
  for (const auto& r : rules) {
    auto body = var_set(r.body);
    for (const auto& h : r.head) {
      std::vector<std::string> common;
      auto hv = var_set({h});
      std::set_intersection(hv.begin(), hv.end(), body.begin(), body.end(), std::back_inserter(common));
      if (!common.empty() && common != body)
        return {false, r.id + ": head atom " + h.str() + " mentions some but not all body variables"};
    }
  }
  return {};
}

PositionGraph position_graph(const std::vector<TGD>& rules) {
  PositionGraph g;
  auto positions_of = [](const std::vector<Atom>& atoms, const std::string& v) {
    std::vector<Position> out;
    for (const auto& a : atoms)
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (a.args[i].is_variable() && a.args[i].name() == v) out.push_back({a.predicate, i});
    return out;
  };
  for (const auto& r : rules) {
    for (const auto& atoms : {r.body, r.head})
      for (const auto& a : atoms)
        for (std::size_t i = 0; i < a.args.size(); ++i) g.nodes.insert({a.predicate, i});
    for (const auto& x : r.universal_vars())
      for (const auto& from : positions_of(r.body, x))
        for (const auto& to : positions_of(r.head, x)) g.ordinary.insert({from, to});
    for (const auto& z : r.exist_vars)
      for (const auto& to : positions_of(r.head, z))
        for (const auto& x : r.frontier())
          for (const auto& from : positions_of(r.body, x)) g.special.insert({from, to});
  }
  return g;
}

namespace {

// first directed cycle found by DFS in node order, as a node list
template <class Node>
std::vector<Node> find_cycle(const std::vector<Node>& nodes, const std::map<Node, std::vector<Node>>& adj) {
  std::map<Node, int> color;
  std::vector<Node> stack;
  std::vector<Node> cycle;
  std::function<bool(const Node&)> dfs = [&](const Node& v) {
    color[v] = 1;
    stack.push_back(v);
    if (auto it = adj.find(v); it != adj.end())
      for (const auto& w : it->second) {
        if (color[w] == 1) {
          auto at = std::find(stack.begin(), stack.end(), w);
          cycle.assign(at, stack.end());
          cycle.push_back(w);
          return true;
        }
        if (color[w] == 0 && dfs(w)) return true;
      }
    stack.pop_back();
    color[v] = 2;
    return false;
  };
  for (const auto& v : nodes)
    if (color[v] == 0 && dfs(v)) return cycle;
  return {};
}

}  // namespace

ClassCheck is_acyclic(const std::vector<TGD>& rules) {
  auto g = position_graph(rules);
  std::map<Position, std::vector<Position>> adj;
  for (const auto& [a, b] : g.ordinary) adj[a].push_back(b);
  for (const auto& [a, b] : g.special) adj[a].push_back(b);
  auto cycle = find_cycle(std::vector<Position>(g.nodes.begin(), g.nodes.end()), adj);
  if (cycle.empty()) return {};
  std::string w = "position cycle ";
  for (std::size_t i = 0; i < cycle.size(); ++i) w += (i ? " -> " : "") + cycle[i].str();
  return {false, w};
}

namespace {

// union-find over terms tagged by side (0 = head rule, 1 = body rule)
struct Unifier {
  std::map<std::pair<int, Term>, std::pair<int, Term>> parent;
  std::pair<int, Term> find(std::pair<int, Term> x) {
    auto it = parent.find(x);
    if (it == parent.end() || it->second == x) return x;
    auto r = find(it->second);
    parent[x] = r;
    return r;
  }
  void join(const std::pair<int, Term>& a, const std::pair<int, Term>& b) {
    parent.emplace(a, a);
    parent.emplace(b, b);
    auto ra = find(a), rb = find(b);
    if (ra != rb) parent[ra] = rb;
  }
};

// Is there a piece-unifier mapping the body atoms `piece` of `to` onto
// head atoms of `from` (choice[k] = head index for piece[k])?
bool piece_unifies(const TGD& from, const TGD& to, const std::vector<std::size_t>& piece,
                   const std::vector<std::size_t>& choice) {
  Unifier u;
  for (std::size_t k = 0; k < piece.size(); ++k) {
    const Atom& b = to.body[piece[k]];
    const Atom& h = from.head[choice[k]];
    for (std::size_t i = 0; i < b.args.size(); ++i) u.join({0, h.args[i]}, {1, b.args[i]});
  }
  // collect classes
  std::map<std::pair<int, Term>, std::vector<std::pair<int, Term>>> classes;
  for (const auto& [x, _] : u.parent) classes[u.find(x)].push_back(x);
  for (const auto& [root, members] : classes) {
    std::set<Term> consts;
    bool has_exist = false;
    int head_terms = 0;
    for (const auto& [side, t] : members) {
      if (t.is_constant()) consts.insert(t);
      if (side == 0) {
        ++head_terms;
        if (t.is_variable() && from.is_existential(t.name())) has_exist = true;
      }
    }
    if (consts.size() > 1) return false;
    if (!has_exist) continue;
    if (!consts.empty() || head_terms > 1) return false;
    // body variables glued to an existential must stay inside the piece
    for (const auto& [side, t] : members) {
      if (side != 1) continue;
      for (std::size_t a = 0; a < to.body.size(); ++a) {
        if (std::find(piece.begin(), piece.end(), a) != piece.end()) continue;
        const auto& args = to.body[a].args;
        if (std::find(args.begin(), args.end(), t) != args.end()) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool depends(const TGD& from, const TGD& to) {
  const std::size_t nb = to.body.size();
  if (nb > 12) return false;
  for (std::uint32_t mask = 1; mask < (1u << nb); ++mask) {
    std::vector<std::size_t> piece;
    for (std::size_t a = 0; a < nb; ++a)
      if (mask >> a & 1) piece.push_back(a);
    // every piece atom needs a head atom with the same predicate/arity
    std::vector<std::vector<std::size_t>> options(piece.size());
    bool possible = true;
    for (std::size_t k = 0; k < piece.size() && possible; ++k) {
      for (std::size_t h = 0; h < from.head.size(); ++h)
        if (from.head[h].predicate == to.body[piece[k]].predicate &&
            from.head[h].arity() == to.body[piece[k]].arity())
          options[k].push_back(h);
      possible = !options[k].empty();
    }
    if (!possible) continue;
    std::vector<std::size_t> choice(piece.size());
    std::function<bool(std::size_t)> pick = [&](std::size_t k) {
      if (k == piece.size()) return piece_unifies(from, to, piece, choice);
      for (auto h : options[k]) {
        choice[k] = h;
        if (pick(k + 1)) return true;
      }
      return false;
    };
    if (pick(0)) return true;
  }
  return false;
}

RuleDependencyGraph dependency_graph(const std::vector<TGD>& rules) {
  RuleDependencyGraph g;
  for (const auto& r : rules) g.nodes.push_back(r.id);
  for (std::size_t a = 0; a < rules.size(); ++a)
    for (std::size_t b = 0; b < rules.size(); ++b)
      if (depends(rules[a], rules[b])) g.edges.insert({a, b});
  return g;
}

ClassCheck is_agrd(const std::vector<TGD>& rules) {
  auto g = dependency_graph(rules);
  std::vector<std::size_t> nodes(rules.size());
  std::iota(nodes.begin(), nodes.end(), 0);
  std::map<std::size_t, std::vector<std::size_t>> adj;
  for (const auto& [a, b] : g.edges) adj[a].push_back(b);
  auto cycle = find_cycle(nodes, adj);
  if (cycle.empty()) return {};
  std::string w = "rule dependency cycle ";
  for (std::size_t i = 0; i < cycle.size(); ++i) w += (i ? " -> " : "") + rules[cycle[i]].id;
  return {false, w};
}

MembershipReport report(const std::string& cls, const ClassCheck& c) {
  MembershipReport r;
  r.cls = cls;
  r.verdict = c.member ? Verdict::Yes : Verdict::No;
  if (!c.member) r.evidence.push_back({{"violation", c.witness}});
  return r;
}

const MembershipReport* AuditReport::find(const std::string& cls) const {
  for (const auto& r : reports)
    if (r.cls == cls) return &r;
  return nullptr;
}

AuditReport containment_audit(const SourceRuleSet& rules, const LoopEnumOptions& caps,
                              const std::vector<std::string>& classes) {
  AuditReport out;
  auto want = [&](const std::string& c) { return std::find(classes.begin(), classes.end(), c) != classes.end(); };
  const auto& rs = rules.rules;
  if (want("linear")) out.reports.push_back(report("linear", is_linear(rs)));
  if (want("ml")) out.reports.push_back(report("ml", is_multilinear(rs)));
  if (want("acyclic")) out.reports.push_back(report("acyclic", is_acyclic(rs)));
  if (want("agrd")) out.reports.push_back(report("agrd", is_agrd(rs)));
  if (want("dr")) out.reports.push_back(report("dr", is_domain_restricted(rs)));
  if (want("lr") || want("glr")) {
    auto loops = enumerate_loop_patterns(normalize_rules(rules), caps);
    if (want("lr")) out.reports.push_back(classify_loops("lr", loops, caps));
    if (want("glr")) out.reports.push_back(classify_loops("glr", loops, caps));
  }
  if (const auto* glr = out.find("glr"); glr && glr->verdict == Verdict::No)
    for (const char* c : {"lr", "ml", "acyclic", "agrd", "dr"})
      if (const auto* r = out.find(c); r && r->verdict == Verdict::Yes)
        out.flags.push_back(std::string(c) + " member but not glr");
  if (const auto* lin = out.find("linear"); lin && lin->verdict == Verdict::Yes)
    if (const auto* ml = out.find("ml"); ml && ml->verdict != Verdict::Yes) out.flags.push_back("linear member but not ml");
  return out;
}

}  // namespace tgd
