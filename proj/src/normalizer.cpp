#include "tgd/normalizer.hpp"

#include <algorithm>

namespace tgd {

bool is_normal(const TGD& rule) {
  if (rule.head.size() != 1) return false;
  for (const auto& z : rule.exist_vars) {
    auto n = std::count_if(rule.head[0].args.begin(), rule.head[0].args.end(),
                           [&](const Term& t) { return t.is_variable() && t.name() == z; });
    if (n != 1) return false;
  }
  return true;
}

namespace {

class FreshNames {
 public:
  explicit FreshNames(const SourceRuleSet& s) {
    for (const auto& [p, _] : s.signature) used_.insert(p);
    for (const auto& r : s.rules) ids_.insert(r.id);
  }
  std::string predicate(const std::string& base) { return pick(used_, base); }
  std::string rule_id(const std::string& base) { return pick(ids_, base); }

 private:
  static std::string pick(std::set<std::string>& used, const std::string& base) {
    std::string name = base;
    for (int k = 1; used.count(name); ++k) name = base + "_" + std::to_string(k);
    used.insert(name);
    return name;
  }
  std::set<std::string> used_;
  std::set<std::string> ids_;
};

Atom atom_over(const std::string& pred, const std::vector<std::string>& vars) {
  Atom a{pred, {}};
  for (const auto& v : vars) a.args.push_back(Term::variable(v));
  return a;
}

}  // namespace

NormalizationResult normalize(const SourceRuleSet& rules, const std::optional<Query>& query) {
  NormalizationResult out;
  FreshNames names(rules);

  for (const auto& r : rules.rules) {
    if (is_normal(r)) {
      out.rules.emplace_back(r);
      continue;
    }
    // route through aux(universal head vars..., existential vars...)
    std::vector<std::string> head_vars;
    for (const auto& v : variables_of(r.head))
      if (!r.is_existential(v)) head_vars.push_back(v);
    for (const auto& v : r.exist_vars) head_vars.push_back(v);

    std::string aux = names.predicate("aux_" + r.id);
    out.aux_predicates.insert(aux);
    Atom aux_atom = atom_over(aux, head_vars);
    TGD split{r.id, r.body, {aux_atom}, r.exist_vars};
    out.provenance[split.id] = r.id;
    out.rules.emplace_back(split);
    for (std::size_t k = 0; k < r.head.size(); ++k) {
      TGD proj{names.rule_id(r.id + "_" + std::to_string(k + 1)), {aux_atom}, {r.head[k]}, {}};
      out.provenance[proj.id] = r.id;
      out.rules.emplace_back(proj);
    }
  }

  if (query) {
    out.source_query = query;
    std::string q = names.predicate("q_star");
    out.aux_predicates.insert(q);
    Atom goal = atom_over(q, query->variables());
    TGD qr{names.rule_id("q_star"), query->atoms, {goal}, {}};
    out.provenance[qr.id] = "query";
    out.rules.emplace_back(qr);
    out.query = Query{{goal}};
  }
  return out;
}

std::vector<NormalTGD> normalize_rules(const SourceRuleSet& rules) { return normalize(rules).rules; }

}  // namespace tgd
