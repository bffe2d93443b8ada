#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tgd/homomorphism.hpp"
#include "tgd/syntax.hpp"

namespace tgd {

struct TriggerRecord {
  std::size_t rule;            // index into the rule list of the run
  std::string rule_id;
  std::vector<Term> binding;   // images of the rule's universal variables
  Atom produced;
  std::size_t level;
};

class ChaseState {
 public:
  ChaseState() = default;
  explicit ChaseState(const Database& db);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool contains(const Atom& a) const { return pos_.count(a) != 0; }
  std::optional<std::size_t> level(const Atom& a) const;
  std::size_t level_at(std::size_t i) const { return levels_[i]; }
  const std::vector<TriggerRecord>& trigger_log() const { return log_; }
  std::uint64_t next_null() const { return next_null_; }
  std::size_t step_count() const { return log_.size(); }
  bool has_trigger(const std::string& rule_id, const std::vector<Term>& binding) const;
  // positions of atoms with the predicate, in insertion order
  const std::vector<std::size_t>& by_predicate(const std::string& p) const;

  // Fires (rule, h).  h must map the body into the state and the trigger
  // must be new; otherwise throws TriggerRejected and leaves the state alone.
  const Atom& apply(std::size_t rule_index, const NormalTGD& rule, const Homomorphism& h);

 private:
  friend class ChaseRunner;
  std::size_t insert(Atom a, std::size_t level);

  std::vector<Atom> atoms_;
  std::vector<std::size_t> levels_;
  std::unordered_map<Atom, std::size_t> pos_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_pred_;
  std::vector<TriggerRecord> log_;
  std::unordered_set<std::string> trigger_keys_;
  std::uint64_t next_null_ = 1;
};

ChaseState chase_step(ChaseState state, const NormalTGD& rule, const Homomorphism& h,
                      std::size_t rule_index = 0);

struct ChaseOptions {
  std::size_t bound = 0;
  bool step_indexed = false;          // bound counts chase steps instead of levels
  std::size_t max_atoms = 1'000'000;
  bool parallel = true;               // OpenMP trigger discovery
};

struct ChaseResult {
  ChaseState state;
  bool saturated = false;  // no applicable trigger remains
  bool overflow = false;   // max_atoms reached, state is partial
  std::size_t levels_run = 0;
};

ChaseResult run_chase(const Database& db, const std::vector<NormalTGD>& rules, const ChaseOptions& opts);
ChaseResult run_chase(const Database& db, const std::vector<NormalTGD>& rules, std::size_t level_bound);

// h with h(goal) ∈ state
std::optional<Homomorphism> entails(const ChaseState& state, const Atom& goal);
// h with h(atoms) ⊆ state
std::optional<Homomorphism> entails(const ChaseState& state, const std::vector<Atom>& atoms);

enum class Answer { Yes, NoWithinBound, SaturatedNo, Overflow };
std::string to_string(Answer a);

struct AskVerdict {
  Answer answer = Answer::NoWithinBound;
  std::optional<Homomorphism> witness;
  std::size_t depth = 0;  // max level among the matched atoms (Yes only)
  std::size_t bound = 0;
  std::size_t atoms = 0;
};

AskVerdict ask(const Database& db, const SourceRuleSet& rules, const Query& query, const ChaseOptions& opts);

// Rules whose head predicate can contribute to any of `goals`.
std::vector<NormalTGD> relevant_rules(const std::vector<NormalTGD>& rules,
                                      const std::vector<std::string>& goals);

}  // namespace tgd
