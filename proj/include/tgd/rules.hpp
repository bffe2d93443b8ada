#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tgd/term.hpp"

namespace tgd {

// body -> exists Z. head, possibly with several head atoms.
struct TGD {
  std::string id;
  std::vector<Atom> body;
  std::vector<Atom> head;
  std::vector<std::string> exist_vars;  // declaration order

  std::vector<std::string> universal_vars() const { return variables_of(body); }
  // body variables that also occur in the head
  std::vector<std::string> frontier() const;
  bool is_existential(const std::string& v) const;
  std::string str() const;

  friend bool operator==(const TGD&, const TGD&) = default;
};

// Single head atom, every existential variable at exactly one head position.
class NormalTGD {
 public:
  // validates the shape; throws InvalidRule
  explicit NormalTGD(TGD rule);
  // skips the null-freeness check; used for the synthetic rules folding creates
  static NormalTGD unchecked(TGD rule);

  const std::string& id() const { return rule_.id; }
  const std::vector<Atom>& body() const { return rule_.body; }
  const Atom& head() const { return rule_.head.front(); }
  const std::vector<std::string>& exist_vars() const { return rule_.exist_vars; }
  const std::vector<std::string>& universal_vars() const { return universal_; }
  const TGD& tgd() const { return rule_; }
  bool is_existential(const std::string& v) const { return rule_.is_existential(v); }
  std::string str() const { return rule_.str(); }

  friend bool operator==(const NormalTGD& a, const NormalTGD& b) { return a.rule_ == b.rule_; }

 private:
  struct Unchecked {};
  NormalTGD(TGD rule, Unchecked);
  TGD rule_;
  std::vector<std::string> universal_;
};

using RulePtr = std::shared_ptr<const NormalTGD>;
std::vector<RulePtr> share(std::vector<NormalTGD> rules);

class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> init) : bindings_(init) {}

  // throws InvalidSubstitution on a conflicting second binding
  void bind(const std::string& var, const Term& t);
  std::optional<Term> lookup(const std::string& var) const;
  bool binds(const std::string& var) const { return bindings_.count(var) != 0; }
  const std::map<std::string, Term>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }

  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;
  std::vector<Term> apply(const std::vector<Term>& ts) const;
  std::vector<Atom> apply(const std::vector<Atom>& as) const;

  // (after ∘ this): applying the result equals applying *this and then `after`
  Substitution then(const Substitution& after) const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<std::string, Term> bindings_;
};

// ρ = σθ
struct RuleInstance {
  RulePtr base;
  Substitution theta;
  Atom head;
  std::vector<Atom> body;
  std::vector<Term> fresh_nulls;  // images of the existential variables, declaration order

  // universal images (first-occurrence order) followed by existential images
  std::vector<Term> binding_tuple() const;
  std::string str() const;  // "body -> head"

  friend bool operator==(const RuleInstance& a, const RuleInstance& b) {
    return a.base->id() == b.base->id() && a.head == b.head && a.body == b.body &&
           a.fresh_nulls == b.fresh_nulls;
  }
};

// Applies θ to a rule.  Unbound universal variables pass through; every
// existential variable must be bound to a null; binding a variable the rule
// does not have is an arity mismatch.  Throws InvalidSubstitution.
RuleInstance instantiate(const RulePtr& rule, const Substitution& theta);

}  // namespace tgd
