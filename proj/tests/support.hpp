#pragma once

// Shared generators and brute-force oracles for the test binaries.  The
// oracles deliberately avoid the library's search code.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tgd/chase.hpp"
#include "tgd/derivation.hpp"
#include "tgd/errors.hpp"
#include "tgd/normalizer.hpp"
#include "tgd/syntax.hpp"

namespace tgd::test {

inline Term V(const std::string& n) { return Term::variable(n); }
inline Term C(const std::string& n) { return Term::constant(n); }
inline Term N(std::uint64_t i) { return Term::null(i); }
inline Atom At(std::string p, std::vector<Term> args) { return Atom{std::move(p), std::move(args)}; }

inline std::vector<NormalTGD> normal(const std::string& text) { return normalize_rules(parse_rules(text)); }

inline const NormalTGD& by_id(const std::vector<NormalTGD>& rules, const std::string& id) {
  for (const auto& r : rules)
    if (r.id() == id) return r;
  throw Error("no rule " + id);
}

// ---------------------------------------------------------------------------
// brute-force homomorphisms: every map from the non-constant source terms to
// target terms, filtered

inline bool bf_admissible(const Term& s, const Term& t) {
  if (s.is_constant()) return s == t;
  if (s.is_null()) return !t.is_variable();
  return true;
}

inline std::set<std::map<Term, Term>> bf_homomorphisms(const std::vector<Atom>& source,
                                                       const std::vector<Atom>& target) {
  std::vector<Term> dom;
  for (const auto& a : source)
    for (const auto& t : a.args)
      if (!t.is_constant() && std::find(dom.begin(), dom.end(), t) == dom.end()) dom.push_back(t);
  std::vector<Term> cod;
  for (const auto& a : target)
    for (const auto& t : a.args)
      if (std::find(cod.begin(), cod.end(), t) == cod.end()) cod.push_back(t);
  std::set<Atom> tset(target.begin(), target.end());
  std::set<std::map<Term, Term>> out;
  for (const auto& a : source)
    for (const auto& t : a.args)
      if (t.is_constant() && std::find(cod.begin(), cod.end(), t) == cod.end()) return out;
  std::vector<std::size_t> idx(dom.size(), 0);
  if (!dom.empty() && cod.empty()) return out;
  while (true) {
    std::map<Term, Term> m;
    bool ok = true;
    for (std::size_t k = 0; k < dom.size() && ok; ++k) {
      if (!bf_admissible(dom[k], cod[idx[k]])) ok = false;
      m.emplace(dom[k], cod[idx[k]]);
    }
    if (ok) {
      for (const auto& a : source) {
        Atom img{a.predicate, {}};
        for (const auto& t : a.args) img.args.push_back(t.is_constant() ? t : m.at(t));
        if (!tset.count(img)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) out.insert(m);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == cod.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return out;
}

// nested-loop join: same answers as bf_homomorphisms, usable on larger targets
inline void join_rec(const std::vector<Atom>& source, const std::vector<Atom>& target, std::size_t i,
                     std::map<Term, Term>& m, std::set<std::map<Term, Term>>& out) {
  if (i == source.size()) {
    out.insert(m);
    return;
  }
  for (const auto& t : target) {
    if (t.predicate != source[i].predicate || t.args.size() != source[i].args.size()) continue;
    auto saved = m;
    bool ok = true;
    for (std::size_t k = 0; k < t.args.size() && ok; ++k) {
      const Term& s = source[i].args[k];
      if (!bf_admissible(s, t.args[k])) ok = false;
      else if (!s.is_constant()) {
        auto [it, fresh] = m.emplace(s, t.args[k]);
        if (!fresh && it->second != t.args[k]) ok = false;
      }
    }
    if (ok) join_rec(source, target, i + 1, m, out);
    m = std::move(saved);
  }
}

inline std::set<std::map<Term, Term>> join_homomorphisms(const std::vector<Atom>& source,
                                                         const std::vector<Atom>& target) {
  std::set<std::map<Term, Term>> out;
  std::map<Term, Term> m;
  join_rec(source, target, 0, m, out);
  return out;
}

// ---------------------------------------------------------------------------
// naive level-wise oblivious chase (no indexing, brute-force matching)

struct NaiveChase {
  std::vector<Atom> atoms;
  std::vector<std::size_t> levels;
  bool saturated = false;

  std::size_t level_of(const Atom& a) const {
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i] == a) return levels[i];
    return static_cast<std::size_t>(-1);
  }
};

inline NaiveChase naive_chase(const Database& db, const std::vector<NormalTGD>& rules, std::size_t bound,
                              std::size_t max_atoms = 20000) {
  NaiveChase c;
  for (const auto& f : db.facts) {
    c.atoms.push_back(f);
    c.levels.push_back(0);
  }
  std::set<std::pair<std::string, std::vector<Term>>> fired;
  std::uint64_t next = 1;
  for (std::size_t level = 1; level <= bound; ++level) {
    std::vector<Atom> current = c.atoms;
    std::set<Atom> seen(current.begin(), current.end());
    std::vector<Atom> added;
    for (const auto& r : rules) {
      for (const auto& m : join_homomorphisms(r.body(), current)) {
        std::vector<Term> key;
        for (const auto& v : r.universal_vars()) key.push_back(m.at(V(v)));
        if (!fired.insert({r.id(), key}).second) continue;
        std::map<std::string, Term> ex;
        for (const auto& z : r.exist_vars()) ex.emplace(z, N(next++));
        Atom h{r.head().predicate, {}};
        for (const auto& t : r.head().args) {
          if (t.is_variable() && ex.count(t.name())) h.args.push_back(ex.at(t.name()));
          else h.args.push_back(t.is_constant() ? t : m.at(t));
        }
        if (seen.insert(h).second) added.push_back(h);
      }
    }
    if (added.empty()) {
      c.saturated = true;
      break;
    }
    for (auto& a : added) {
      c.atoms.push_back(a);
      c.levels.push_back(level);
    }
    if (c.atoms.size() > max_atoms) break;
  }
  return c;
}

inline bool naive_entails(const std::vector<Atom>& atoms, const std::vector<Atom>& goal) {
  return !join_homomorphisms(goal, atoms).empty();
}

// ---------------------------------------------------------------------------
// random generators

struct Gen {
  std::mt19937 rng;
  explicit Gen(unsigned seed) : rng(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
};

struct Signature {
  std::vector<std::pair<std::string, std::size_t>> preds;
  std::vector<std::string> constants;
};

inline Signature small_signature(Gen& g, std::size_t npreds = 3, std::size_t max_arity = 2) {
  Signature s;
  for (std::size_t i = 0; i < npreds; ++i) s.preds.push_back({"p" + std::to_string(i), 1 + g.below(max_arity)});
  s.constants = {"a", "b", "c"};
  return s;
}

// A single-head rule with 1..max_body body atoms over X0..X{nvars-1} and at
// most one existential.
inline TGD random_rule(Gen& g, const Signature& sig, const std::string& id, std::size_t max_body = 2,
                       std::size_t nvars = 3, double p_exist = 0.3, double p_const = 0.05) {
  TGD r;
  r.id = id;
  std::size_t nb = 1 + g.below(max_body);
  for (std::size_t i = 0; i < nb; ++i) {
    auto [p, ar] = g.pick(sig.preds);
    Atom a{p, {}};
    for (std::size_t k = 0; k < ar; ++k) {
      if (g.chance(p_const)) a.args.push_back(C(g.pick(sig.constants)));
      else a.args.push_back(V("X" + std::to_string(g.below(nvars))));
    }
    r.body.push_back(a);
  }
  auto bvars = variables_of(r.body);
  auto [p, ar] = g.pick(sig.preds);
  Atom h{p, {}};
  bool used_exist = false;
  for (std::size_t k = 0; k < ar; ++k) {
    if (!used_exist && g.chance(p_exist)) {
      h.args.push_back(V("Z"));
      used_exist = true;
    } else if (bvars.empty() || g.chance(p_const)) {
      h.args.push_back(C(g.pick(sig.constants)));
    } else {
      h.args.push_back(V(g.pick(bvars)));
    }
  }
  r.head.push_back(h);
  if (used_exist) r.exist_vars.push_back("Z");
  return r;
}

inline SourceRuleSet as_source(std::vector<TGD> rules) {
  SourceRuleSet s;
  for (auto& r : rules) {
    for (const auto* part : {&r.body, &r.head})
      for (const auto& a : *part) {
        s.signature[a.predicate] = a.arity();
        for (const auto& t : a.args)
          if (t.is_constant()) s.constants.insert(t.name());
      }
  }
  s.rules = std::move(rules);
  return s;
}

inline std::vector<NormalTGD> to_normal(const std::vector<TGD>& rules) {
  std::vector<NormalTGD> out;
  for (const auto& r : rules) out.emplace_back(r);
  return out;
}

inline Database random_db(Gen& g, const Signature& sig, std::size_t nfacts) {
  Database db;
  for (std::size_t i = 0; i < nfacts; ++i) {
    auto [p, ar] = g.pick(sig.preds);
    Atom a{p, {}};
    for (std::size_t k = 0; k < ar; ++k) a.args.push_back(C(g.pick(sig.constants)));
    db.add(a);
  }
  return db;
}

inline Atom random_goal(Gen& g, const Signature& sig) {
  auto [p, ar] = g.pick(sig.preds);
  Atom a{p, {}};
  for (std::size_t k = 0; k < ar; ++k) {
    if (g.chance(0.3)) a.args.push_back(C(g.pick(sig.constants)));
    else a.args.push_back(V("Q" + std::to_string(g.below(2))));
  }
  return a;
}

inline std::vector<Term> random_tuple(Gen& g, std::size_t len) {
  static const std::vector<Term> pool = {C("a"), C("b"), V("X"), V("Y"), V("Z"), N(1), N(2), N(3)};
  std::vector<Term> t;
  for (std::size_t i = 0; i < len; ++i) t.push_back(g.pick(pool));
  return t;
}

// A tuple with the same shape as `t`: constants kept, variables and nulls
// renamed by a random injective map within their kind.
inline std::vector<Term> reshape(Gen& g, const std::vector<Term>& t) {
  std::vector<std::string> vnames = {"U", "V", "W", "X", "Y", "Z"};
  std::vector<std::uint64_t> nidx = {1, 2, 3, 4, 5, 6};
  std::shuffle(vnames.begin(), vnames.end(), g.rng);
  std::shuffle(nidx.begin(), nidx.end(), g.rng);
  std::map<Term, Term> m;
  std::size_t vi = 0, ni = 0;
  std::vector<Term> out;
  for (const auto& x : t) {
    if (x.is_constant()) {
      out.push_back(x);
      continue;
    }
    if (!m.count(x)) m.emplace(x, x.is_variable() ? V(vnames[vi++]) : N(nidx[ni++]));
    out.push_back(m.at(x));
  }
  return out;
}


// ---------------------------------------------------------------------------
// generators constrained to the comparison classes

// every body atom carries every body variable
inline TGD ml_rule(Gen& g, const std::string& id) {
  static const std::vector<std::pair<std::string, std::size_t>> preds = {{"m1", 1}, {"m2", 2}, {"m3", 3}, {"n2", 2}};
  const std::size_t k = 1 + g.below(2);
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < k; ++i) vars.push_back("X" + std::to_string(i));
  TGD r;
  r.id = id;
  for (std::size_t i = 0, nb = 1 + g.below(2); i < nb; ++i) {
    std::pair<std::string, std::size_t> p;
    do p = g.pick(preds);
    while (p.second < k);
    std::vector<Term> args;
    for (const auto& v : vars) args.push_back(V(v));
    while (args.size() < p.second) args.push_back(V(g.pick(vars)));
    std::shuffle(args.begin(), args.end(), g.rng);
    r.body.push_back({p.first, args});
  }
  auto [hp, ar] = g.pick(preds);
  Atom h{hp, {}};
  for (std::size_t i = 0; i < ar; ++i) {
    if (g.chance(0.3)) {
      h.args.push_back(V("Z"));
      if (r.exist_vars.empty()) r.exist_vars.push_back("Z");
    } else {
      h.args.push_back(V(g.pick(vars)));
    }
  }
  r.head.push_back(h);
  return r;
}

// the head mentions none or all of the body variables
inline TGD dr_rule(Gen& g, const Signature& sig, const std::string& id) {
  TGD r = random_rule(g, sig, id, 2, 3, 0.0, 0.0);
  auto bv = variables_of(r.body);
  std::vector<std::pair<std::string, std::size_t>> wide;
  for (const auto& p : sig.preds)
    if (p.second >= bv.size()) wide.push_back(p);
  Atom h;
  r.exist_vars.clear();
  if (!wide.empty() && g.chance(0.6)) {
    auto [p, ar] = g.pick(wide);
    h.predicate = p;
    for (const auto& v : bv) h.args.push_back(V(v));
    while (h.args.size() < ar) h.args.push_back(V(g.pick(bv)));
    std::shuffle(h.args.begin(), h.args.end(), g.rng);
  } else {
    auto [p, ar] = g.pick(sig.preds);
    h.predicate = p;
    for (std::size_t i = 0; i < ar; ++i) h.args.push_back(g.chance(0.7) ? V("Z") : C(g.pick(sig.constants)));
  }
  for (const auto& t : h.args)
    if (t.is_variable() && t.name() == "Z" && r.exist_vars.empty()) r.exist_vars.push_back("Z");
  r.head = {h};
  return r;
}

inline std::vector<TGD> random_rule_set(Gen& g, const Signature& sig, std::size_t max_rules, double p_exist = 0.3) {
  std::vector<TGD> rules;
  for (std::size_t i = 0, n = 1 + g.below(max_rules); i < n; ++i)
    rules.push_back(random_rule(g, sig, "r" + std::to_string(i + 1), 2, 3, p_exist, 0.05));
  return rules;
}

// ---------------------------------------------------------------------------
// chase invariants

// level of a logged trigger, recomputed from its body atoms
inline std::size_t recomputed_level(const ChaseState& s, const std::vector<NormalTGD>& rules, const TriggerRecord& t) {
  const auto& r = rules[t.rule];
  Substitution th;
  const auto& uv = r.universal_vars();
  for (std::size_t k = 0; k < uv.size(); ++k) th.bind(uv[k], t.binding[k]);
  std::size_t lvl = 0;
  for (const auto& b : th.apply(r.body())) lvl = std::max(lvl, *s.level(b));
  return lvl + 1;
}

// every trigger into the state has its head satisfied (the chase is a model)
inline bool is_model(const ChaseState& s, const std::vector<NormalTGD>& rules) {
  for (const auto& r : rules) {
    for (const auto& m : join_homomorphisms(r.body(), s.atoms())) {
      Homomorphism h;
      for (const auto& [k, v] : m) h.mapping.emplace(k, v);
      bool ok = false;
      for (const auto& a : s.atoms()) {
        Homomorphism e = h;
        if (extend_atom(e, r.head(), a)) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// entailment through derivation trees: some tree of depth <= k rooted at the
// goal, with extensional atoms over the database predicates, has an
// instantiation supporting the goal.  Depth 0 is the goal matching a fact.
// Empty optional when the tree budget ran out before an answer.
inline std::optional<bool> tree_route_entails(const std::vector<RulePtr>& rules, const Database& db,
                                              const Atom& goal, std::size_t k, std::size_t max_trees = 20000) {
  if (naive_entails(db.facts, {goal})) return true;
  if (k == 0) return false;
  TreeEnumOptions o;
  o.depth_bound = k;
  o.root_pattern = goal;
  std::set<std::string> ext;
  for (const auto& f : db.facts) ext.insert(f.predicate);
  o.extensional = ext;
  o.max_trees = max_trees;
  bool found = false;
  std::size_t visited = enumerate_trees(rules, o, [&](const DerivationTree& t) {
    instantiate_tree(t, db, [&](const DerivationTree& inst) {
      if (tree_supports(inst, goal)) found = true;
      return !found;
    });
    return !found;
  });
  if (found) return true;
  if (visited >= max_trees) return std::nullopt;
  return false;
}

}  // namespace tgd::test
