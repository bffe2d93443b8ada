#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tgd/derivation.hpp"

namespace tgd {

struct LoopPattern {
  DerivationPath path;
  std::vector<std::size_t> recursive;  // recursive[i]: position of α_{i+1} in body(ρ_i)
};

// The last element specialised by replaying one period of the loop after it
// (the first element already carries that much context inside the path).
// Falls back to the element itself if the replay does not unify.
RuleInstance closed_last(const DerivationPath& path);
// same, with the recursive atom of each element given explicitly
RuleInstance closed_last(const DerivationPath& path, const std::vector<std::size_t>& rec);

// first ∼ last (closed), no other comparable pair, at least two elements
bool is_loop_pattern(const DerivationPath& path);
std::optional<LoopPattern> as_loop_pattern(const DerivationPath& path);

struct LoopEnumOptions {
  std::size_t max_len = 64;
  std::size_t max_states = 2'000'000;
  bool parallel = true;
};

struct LoopEnumResult {
  std::vector<LoopPattern> patterns;  // one per ∼-class
  bool capped = false;
  std::string cap_reason;
  std::size_t states = 0;
};

LoopEnumResult enumerate_loop_patterns(const std::vector<RulePtr>& rules, const LoopEnumOptions& opts = {});
LoopEnumResult enumerate_loop_patterns(const std::vector<NormalTGD>& rules, const LoopEnumOptions& opts = {});

struct Split {
  std::vector<Atom> body_h;
  std::vector<Atom> body_b;
};

struct SplitWitness {
  std::vector<Split> splits;               // one per element except the last
  std::vector<std::string> shared;         // ⋂ var(α_j), as path variables
  std::vector<std::string> shared_rule_vars;  // the same, as variables of the first rule
};

// variables of the atoms, sorted
std::vector<std::string> var_set(const std::vector<Atom>& atoms);

std::optional<SplitWitness> check_lr(const LoopPattern& loop);

enum class GlrType { I, II, III, IV, V };
std::string to_string(GlrType t);

struct GlrWitness {
  GlrType type;
  std::optional<std::size_t> element;  // 0-based, for types II and V
  std::optional<Split> split;
  std::optional<SplitWitness> lr;
};

std::optional<GlrWitness> check_glr(const LoopPattern& loop);

enum class Verdict { Yes, No, Inconclusive };
std::string to_string(Verdict v);

struct MembershipReport {
  std::string cls;
  Verdict verdict = Verdict::Yes;
  nlohmann::json evidence = nlohmann::json::array();
  nlohmann::json caps = nlohmann::json::object();
  bool caps_hit = false;
  std::optional<LoopPattern> violating;

  nlohmann::json to_json() const;
};

nlohmann::json to_json(const LoopPattern& loop);
nlohmann::json to_json(const SplitWitness& w);

MembershipReport classify_lr(const SourceRuleSet& rules, const LoopEnumOptions& caps = {});
MembershipReport classify_glr(const SourceRuleSet& rules, const LoopEnumOptions& caps = {});
// both from one enumeration
MembershipReport classify_loops(const std::string& cls, const LoopEnumResult& loops, const LoopEnumOptions& caps);

}  // namespace tgd
