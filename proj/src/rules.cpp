#include "tgd/rules.hpp"

#include <algorithm>
#include <set>

#include "tgd/errors.hpp"

namespace tgd {

std::vector<std::string> TGD::frontier() const {
  std::set<std::string> head_vars;
  for (const auto& v : variables_of(head)) head_vars.insert(v);
  std::vector<std::string> out;
  for (const auto& v : variables_of(body))
    if (head_vars.count(v)) out.push_back(v);
  return out;
}

bool TGD::is_existential(const std::string& v) const {
  return std::find(exist_vars.begin(), exist_vars.end(), v) != exist_vars.end();
}

std::string TGD::str() const {
  std::string out = join_atoms(body) + " -> ";
  if (!exist_vars.empty()) {
    out += "exists ";
    for (std::size_t i = 0; i < exist_vars.size(); ++i) out += (i ? "," : "") + exist_vars[i];
    out += ". ";
  }
  return out + join_atoms(head) + ".";
}

NormalTGD::NormalTGD(TGD rule, Unchecked) : rule_(std::move(rule)), universal_(rule_.universal_vars()) {}

NormalTGD NormalTGD::unchecked(TGD rule) { return NormalTGD(std::move(rule), Unchecked{}); }

NormalTGD::NormalTGD(TGD rule) : NormalTGD(std::move(rule), Unchecked{}) {
  if (rule_.head.size() != 1) throw InvalidRule("rule " + rule_.id + ": normal rules have one head atom");
  if (rule_.body.empty()) throw InvalidRule("rule " + rule_.id + ": empty body");
  for (const auto& a : rule_.body)
    if (a.has_nulls()) throw InvalidRule("rule " + rule_.id + ": null in body");
  std::set<std::string> body_vars(universal_.begin(), universal_.end());
  for (const auto& z : rule_.exist_vars) {
    if (body_vars.count(z)) throw InvalidRule("rule " + rule_.id + ": existential " + z + " occurs in body");
    auto n = std::count_if(head().args.begin(), head().args.end(),
                           [&](const Term& t) { return t.is_variable() && t.name() == z; });
    if (n != 1) throw InvalidRule("rule " + rule_.id + ": existential " + z + " must occur exactly once");
  }
  for (const auto& t : head().args) {
    if (t.is_null()) throw InvalidRule("rule " + rule_.id + ": null in head");
    if (t.is_variable() && !body_vars.count(t.name()) && !rule_.is_existential(t.name()))
      throw InvalidRule("rule " + rule_.id + ": undeclared head variable " + t.name());
  }
}

std::vector<RulePtr> share(std::vector<NormalTGD> rules) {
  std::vector<RulePtr> out;
  out.reserve(rules.size());
  for (auto& r : rules) out.push_back(std::make_shared<const NormalTGD>(std::move(r)));
  return out;
}

void Substitution::bind(const std::string& var, const Term& t) {
  auto [it, fresh] = bindings_.emplace(var, t);
  if (!fresh && it->second != t)
    throw InvalidSubstitution("second binding for " + var + ": " + it->second.str() + " vs " + t.str());
}

std::optional<Term> Substitution::lookup(const std::string& var) const {
  auto it = bindings_.find(var);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

Term Substitution::apply(const Term& t) const {
  if (!t.is_variable()) return t;
  auto it = bindings_.find(t.name());
  return it == bindings_.end() ? t : it->second;
}

Atom Substitution::apply(const Atom& a) const {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(apply(t));
  return out;
}

std::vector<Term> Substitution::apply(const std::vector<Term>& ts) const {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(apply(t));
  return out;
}

std::vector<Atom> Substitution::apply(const std::vector<Atom>& as) const {
  std::vector<Atom> out;
  out.reserve(as.size());
  for (const auto& a : as) out.push_back(apply(a));
  return out;
}

Substitution Substitution::then(const Substitution& after) const {
  Substitution out;
  for (const auto& [v, t] : bindings_) out.bindings_[v] = after.apply(t);
  for (const auto& [v, t] : after.bindings_) out.bindings_.emplace(v, t);
  return out;
}

std::vector<Term> RuleInstance::binding_tuple() const {
  std::vector<Term> out;
  for (const auto& u : base->universal_vars()) out.push_back(theta.apply(Term::variable(u)));
  out.insert(out.end(), fresh_nulls.begin(), fresh_nulls.end());
  return out;
}

std::string RuleInstance::str() const { return join_atoms(body) + " -> " + head.str(); }

RuleInstance instantiate(const RulePtr& rule, const Substitution& theta) {
  const auto& univ = rule->universal_vars();
  for (const auto& [v, t] : theta.bindings()) {
    bool known = std::find(univ.begin(), univ.end(), v) != univ.end() || rule->is_existential(v);
    if (!known) throw InvalidSubstitution("rule " + rule->id() + " has no variable " + v);
  }
  RuleInstance ri;
  ri.base = rule;
  ri.theta = theta;
  for (const auto& z : rule->exist_vars()) {
    auto t = theta.lookup(z);
    if (!t || !t->is_null())
      throw InvalidSubstitution("existential " + z + " of rule " + rule->id() + " must be bound to a null");
    ri.fresh_nulls.push_back(*t);
  }
  ri.head = theta.apply(rule->head());
  ri.body = theta.apply(rule->body());
  return ri;
}

}  // namespace tgd
