#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tgd/loops.hpp"

namespace tgd {

struct ClassCheck {
  bool member = true;
  std::string witness;  // first violation, or the cycle
};

ClassCheck is_linear(const std::vector<TGD>& rules);
ClassCheck is_multilinear(const std::vector<TGD>& rules);
ClassCheck is_domain_restricted(const std::vector<TGD>& rules);

struct Position {
  std::string predicate;
  std::size_t index;  // 0-based
  friend auto operator<=>(const Position&, const Position&) = default;
  std::string str() const { return predicate + "[" + std::to_string(index + 1) + "]"; }
};

struct PositionGraph {
  std::set<Position> nodes;
  std::set<std::pair<Position, Position>> ordinary;
  std::set<std::pair<Position, Position>> special;
};

PositionGraph position_graph(const std::vector<TGD>& rules);
ClassCheck is_acyclic(const std::vector<TGD>& rules);

struct RuleDependencyGraph {
  std::vector<std::string> nodes;                       // rule ids
  std::set<std::pair<std::size_t, std::size_t>> edges;  // rule index -> rule index
};

// σ1 -> σ2 when some head atom(s) of σ1 piece-unify with body atoms of σ2
bool depends(const TGD& from, const TGD& to);
RuleDependencyGraph dependency_graph(const std::vector<TGD>& rules);
ClassCheck is_agrd(const std::vector<TGD>& rules);

MembershipReport report(const std::string& cls, const ClassCheck& c);

struct AuditReport {
  std::vector<MembershipReport> reports;
  std::vector<std::string> flags;  // observed containment violations
  const MembershipReport* find(const std::string& cls) const;
};

inline const std::vector<std::string> kAllClasses = {"linear", "ml", "acyclic", "agrd", "dr", "lr", "glr"};

AuditReport containment_audit(const SourceRuleSet& rules, const LoopEnumOptions& caps = {},
                              const std::vector<std::string>& classes = kAllClasses);

}  // namespace tgd
