#include "tgd/chase.hpp"

#include <algorithm>
#include <set>

#include "tgd/errors.hpp"
#include "tgd/normalizer.hpp"

namespace tgd {

namespace {

std::string trigger_key(const std::string& rule_id, const std::vector<Term>& binding) {
  std::string key = rule_id;
  for (const auto& t : binding) {
    key += '\x1f';
    key += t.is_null() ? "\x01" + std::to_string(t.index()) : t.name();
  }
  return key;
}

std::vector<Term> universal_image(const NormalTGD& rule, const Homomorphism& h) {
  std::vector<Term> out;
  for (const auto& u : rule.universal_vars()) out.push_back(h.apply(Term::variable(u)));
  return out;
}

const std::vector<std::size_t> kNoAtoms;

}  // namespace

ChaseState::ChaseState(const Database& db) {
  for (const auto& f : db.facts) insert(f, 0);
}

std::size_t ChaseState::insert(Atom a, std::size_t level) {
  auto [it, fresh] = pos_.emplace(a, atoms_.size());
  if (!fresh) return it->second;
  by_pred_[a.predicate].push_back(atoms_.size());
  atoms_.push_back(std::move(a));
  levels_.push_back(level);
  return atoms_.size() - 1;
}

std::optional<std::size_t> ChaseState::level(const Atom& a) const {
  auto it = pos_.find(a);
  if (it == pos_.end()) return std::nullopt;
  return levels_[it->second];
}

bool ChaseState::has_trigger(const std::string& rule_id, const std::vector<Term>& binding) const {
  return trigger_keys_.count(trigger_key(rule_id, binding)) != 0;
}

const std::vector<std::size_t>& ChaseState::by_predicate(const std::string& p) const {
  auto it = by_pred_.find(p);
  return it == by_pred_.end() ? kNoAtoms : it->second;
}

const Atom& ChaseState::apply(std::size_t rule_index, const NormalTGD& rule, const Homomorphism& h) {
  std::size_t lvl = 0;
  for (const auto& b : rule.body()) {
    auto l = level(h.apply(b));
    if (!l) throw TriggerRejected("rule " + rule.id() + ": body atom " + h.apply(b).str() + " not in the instance");
    lvl = std::max(lvl, *l);
  }
  auto binding = universal_image(rule, h);
  for (const auto& t : binding)
    if (t.is_variable()) throw TriggerRejected("rule " + rule.id() + ": homomorphism leaves a variable unbound");
  auto key = trigger_key(rule.id(), binding);
  if (trigger_keys_.count(key)) throw TriggerRejected("rule " + rule.id() + ": trigger already applied");

  Homomorphism ext = h;
  for (const auto& z : rule.exist_vars()) ext.mapping[Term::variable(z)] = Term::null(next_null_++);
  Atom produced = ext.apply(rule.head());
  trigger_keys_.insert(std::move(key));
  std::size_t at = insert(produced, lvl + 1);
  log_.push_back({rule_index, rule.id(), std::move(binding), std::move(produced), lvl + 1});
  return atoms_[at];
}

ChaseState chase_step(ChaseState state, const NormalTGD& rule, const Homomorphism& h, std::size_t rule_index) {
  state.apply(rule_index, rule, h);
  return state;
}

namespace {

struct Candidate {
  std::size_t rule;
  Homomorphism h;
  std::string key;
};

// Semi-naive discovery of the triggers whose body image has maximum level
// exactly `delta_level`.  Body position `pivot` takes a delta atom, earlier
// positions strictly older atoms, later positions anything.
class Discovery {
 public:
  Discovery(const ChaseState& s, const std::vector<NormalTGD>& rules, std::size_t delta_level)
      : s_(s), rules_(rules), delta_(delta_level) {}

  std::vector<Candidate> run(bool parallel) {
    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t r = 0; r < rules_.size(); ++r)
      for (std::size_t p = 0; p < rules_[r].body().size(); ++p) tasks.emplace_back(r, p);
    std::vector<std::vector<Candidate>> found(tasks.size());
    const long n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic) if (parallel && n > 1)
    for (long t = 0; t < n; ++t) found[t] = task(tasks[t].first, tasks[t].second);

    std::vector<Candidate> out;
    std::set<std::string> seen;
    for (auto& bucket : found)
      for (auto& c : bucket)
        if (seen.insert(c.key).second) out.push_back(std::move(c));
    return out;
  }

 private:
  std::vector<Candidate> task(std::size_t r, std::size_t pivot) const {
    std::vector<Candidate> out;
    const auto& rule = rules_[r];
    for (std::size_t ai : s_.by_predicate(rule.body()[pivot].predicate)) {
      if (s_.level_at(ai) != delta_) continue;
      Homomorphism h;
      if (!extend_atom(h, rule.body()[pivot], s_.atoms()[ai])) continue;
      join(rule, r, pivot, 0, h, out);
    }
    return out;
  }

  void join(const NormalTGD& rule, std::size_t r, std::size_t pivot, std::size_t k, const Homomorphism& h,
            std::vector<Candidate>& out) const {
    const auto& body = rule.body();
    if (k == pivot) return join(rule, r, pivot, k + 1, h, out);
    if (k == body.size()) {
      auto binding = universal_image(rule, h);
      if (s_.has_trigger(rule.id(), binding)) return;
      out.push_back({r, h, trigger_key(rule.id(), binding)});
      return;
    }
    for (std::size_t ai : s_.by_predicate(body[k].predicate)) {
      std::size_t l = s_.level_at(ai);
      if (l > delta_ || (k < pivot && l == delta_)) continue;
      Homomorphism next = h;
      if (extend_atom(next, body[k], s_.atoms()[ai])) join(rule, r, pivot, k + 1, next, out);
    }
  }

  const ChaseState& s_;
  const std::vector<NormalTGD>& rules_;
  std::size_t delta_;
};

}  // namespace

ChaseResult run_chase(const Database& db, const std::vector<NormalTGD>& rules, const ChaseOptions& opts) {
  ChaseResult res{ChaseState(db)};
  ChaseState& s = res.state;
  if (s.size() > opts.max_atoms) {
    res.overflow = true;
    return res;
  }
  const std::size_t level_cap = opts.step_indexed ? static_cast<std::size_t>(-1) : opts.bound;
  bool steps_done = opts.step_indexed && opts.bound == 0;
  for (std::size_t level = 1; level <= level_cap && !steps_done; ++level) {
    auto cands = Discovery(s, rules, level - 1).run(opts.parallel);
    if (cands.empty()) {
      res.saturated = true;
      return res;
    }
    res.levels_run = level;
    for (const auto& c : cands) {
      s.apply(c.rule, rules[c.rule], c.h);
      if (s.size() > opts.max_atoms) {
        res.overflow = true;
        return res;
      }
      if (opts.step_indexed && s.step_count() >= opts.bound) {
        steps_done = true;
        break;
      }
    }
  }
  if (!steps_done) {
    res.saturated = Discovery(s, rules, res.levels_run).run(opts.parallel).empty();
  } else {
    // a partially processed level may still have pending triggers
    bool pending = false;
    for (std::size_t l = 0; l <= res.levels_run && !pending; ++l)
      pending = !Discovery(s, rules, l).run(opts.parallel).empty();
    res.saturated = !pending;
  }
  return res;
}

ChaseResult run_chase(const Database& db, const std::vector<NormalTGD>& rules, std::size_t level_bound) {
  ChaseOptions o;
  o.bound = level_bound;
  return run_chase(db, rules, o);
}

std::optional<Homomorphism> entails(const ChaseState& state, const Atom& goal) {
  return entails(state, std::vector<Atom>{goal});
}

std::optional<Homomorphism> entails(const ChaseState& state, const std::vector<Atom>& atoms) {
  std::vector<Atom> target;
  std::set<std::string> preds;
  for (const auto& a : atoms) preds.insert(a.predicate);
  for (const auto& p : preds)
    for (auto i : state.by_predicate(p)) target.push_back(state.atoms()[i]);
  return find_homomorphism(atoms, target);
}

std::string to_string(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::NoWithinBound: return "no-within-bound";
    case Answer::SaturatedNo: return "saturated-no";
    case Answer::Overflow: return "overflow";
  }
  return "?";
}

std::vector<NormalTGD> relevant_rules(const std::vector<NormalTGD>& rules, const std::vector<std::string>& goals) {
  std::set<std::string> want(goals.begin(), goals.end());
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& r : rules)
      if (want.count(r.head().predicate))
        for (const auto& b : r.body()) grew |= want.insert(b.predicate).second;
  }
  std::vector<NormalTGD> out;
  for (const auto& r : rules)
    if (want.count(r.head().predicate)) out.push_back(r);
  return out;
}

AskVerdict ask(const Database& db, const SourceRuleSet& rules, const Query& query, const ChaseOptions& opts) {
  auto norm = normalize(rules);
  std::vector<std::string> goals;
  for (const auto& a : query.atoms) goals.push_back(a.predicate);
  auto relevant = relevant_rules(norm.rules, goals);
  auto res = run_chase(db, relevant, opts);

  AskVerdict v;
  v.bound = opts.bound;
  v.atoms = res.state.size();
  if (auto h = entails(res.state, query.atoms)) {
    v.answer = Answer::Yes;
    for (const auto& a : query.atoms) v.depth = std::max(v.depth, *res.state.level(h->apply(a)));
    v.witness = std::move(h);
  } else if (res.overflow) {
    v.answer = Answer::Overflow;
  } else if (res.saturated) {
    v.answer = Answer::SaturatedNo;
  } else {
    v.answer = Answer::NoWithinBound;
  }
  return v;
}

}  // namespace tgd
