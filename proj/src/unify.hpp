#pragma once

// Most-general unification of rule heads against abstract atoms, shared by
// tree enumeration, loop enumeration and loop closure.

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tgd/rules.hpp"

namespace tgd::detail {

// Fresh variables carry a prefix no parsed identifier can have, so stores
// with different prefixes never capture each other's variables.
class Store {
 public:
  explicit Store(std::string prefix = "#G") : prefix_(std::move(prefix)) {}
  Term fresh_var() { return Term::variable(prefix_ + std::to_string(next_var_++)); }
  Term fresh_null() { return Term::null(next_null_++); }
  // make sure fresh nulls do not collide with nulls already in some input
  void reserve_nulls(std::uint64_t above) { next_null_ = std::max(next_null_, above + 1); }

  Term resolve(Term t) const {
    while (t.is_variable()) {
      auto it = subst_.find(t.name());
      if (it == subst_.end()) break;
      t = it->second;
    }
    return t;
  }
  Atom resolve(const Atom& a) const {
    Atom out{a.predicate, {}};
    for (const auto& t : a.args) out.args.push_back(resolve(t));
    return out;
  }
  void bind(const Term& var, const Term& t) {
    if (var != t) subst_[var.name()] = t;
  }
  // x, y must be resolved
  bool unify(const Term& x, const Term& y) {
    if (x == y) return true;
    if (x.is_variable()) return bind(x, y), true;
    if (y.is_variable()) return bind(y, x), true;
    return false;
  }

  // who introduced each null: (rule id, existential variable)
  std::map<Term, std::pair<std::string, std::string>> introducer;

 private:
  std::string prefix_;
  std::unordered_map<std::string, Term> subst_;
  std::uint64_t next_var_ = 1;
  std::uint64_t next_null_ = 1;
};

struct Copy {
  RulePtr rule;
  std::map<std::string, Term> univ;   // rule universal variable -> store variable
  std::map<std::string, Term> exist;  // existential variable -> null

  Atom body_atom(const Store& s, std::size_t k) const { return s.resolve(rename(rule->body()[k])); }
  Atom head(const Store& s) const { return s.resolve(rename(rule->head())); }
  Atom rename(const Atom& a) const {
    Atom out{a.predicate, {}};
    for (const auto& t : a.args) {
      if (!t.is_variable()) {
        out.args.push_back(t);
      } else if (auto it = univ.find(t.name()); it != univ.end()) {
        out.args.push_back(it->second);
      } else {
        out.args.push_back(exist.at(t.name()));
      }
    }
    return out;
  }
  RuleInstance finish(const Store& s) const {
    Substitution theta;
    for (const auto& [v, t] : univ) theta.bind(v, s.resolve(t));
    for (const auto& [v, t] : exist) theta.bind(v, t);
    return instantiate(rule, theta);
  }
};

// Unifies a fresh copy of `rule`'s head with `target`.  Existential head
// positions force nulls: a variable target gets a fresh null (or, with
// `reuse`, any null the same rule/existential introduced before); a null
// target is shared; a constant target fails.  Returns every outcome.
inline std::vector<std::pair<Store, Copy>> unify_head(const Store& base, const RulePtr& rule, const Atom& target,
                                                      bool reuse) {
  std::vector<std::pair<Store, Copy>> out;
  const Atom& head = rule->head();
  if (head.predicate != target.predicate || head.args.size() != target.args.size()) return out;

  Store s0 = base;
  Copy c0{rule, {}, {}};
  for (const auto& u : rule->universal_vars()) c0.univ.emplace(u, s0.fresh_var());

  std::vector<std::pair<Store, Copy>> frontier{{std::move(s0), std::move(c0)}};
  for (std::size_t k = 0; k < head.args.size(); ++k) {
    std::vector<std::pair<Store, Copy>> next;
    const Term& h = head.args[k];
    for (auto& [s, c] : frontier) {
      Term b = s.resolve(target.args[k]);
      if (h.is_variable() && rule->is_existential(h.name())) {
        if (b.is_constant()) continue;
        if (b.is_null()) {
          if (auto who = s.introducer.find(b);
              who != s.introducer.end() && (who->second.first != rule->id() || who->second.second != h.name()))
            continue;
          auto [it, fresh] = c.exist.emplace(h.name(), b);
          if (fresh || it->second == b) next.emplace_back(std::move(s), std::move(c));
          continue;
        }
        std::vector<std::pair<Store, Copy>> reused;
        if (reuse) {
          for (const auto& [n, who] : s.introducer) {
            if (who.first != rule->id() || who.second != h.name()) continue;
            Store s2 = s;
            Copy c2 = c;
            s2.bind(b, n);
            c2.exist[h.name()] = n;
            reused.emplace_back(std::move(s2), std::move(c2));
          }
        }
        Term n = s.fresh_null();
        s.bind(b, n);
        s.introducer[n] = {rule->id(), h.name()};
        c.exist[h.name()] = n;
        next.emplace_back(std::move(s), std::move(c));
        for (auto& r : reused) next.push_back(std::move(r));
        continue;
      }
      Term x = h.is_variable() ? s.resolve(c.univ.at(h.name())) : h;
      if (s.unify(x, b)) next.emplace_back(std::move(s), std::move(c));
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return frontier;
}

}  // namespace tgd::detail
