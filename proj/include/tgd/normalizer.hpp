#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tgd/syntax.hpp"

namespace tgd {

struct NormalizationResult {
  std::vector<NormalTGD> rules;
  std::optional<Query> query;        // atomic "? q_star(...)" when a query was given
  std::optional<Query> source_query;
  std::set<std::string> aux_predicates;
  std::map<std::string, std::string> provenance;  // new rule id -> source rule id
};

// Single-head, single-occurrence existentials; the query (if any) is
// atomised through a fresh q_star predicate.
NormalizationResult normalize(const SourceRuleSet& rules, const std::optional<Query>& query = std::nullopt);

// rule-only convenience
std::vector<NormalTGD> normalize_rules(const SourceRuleSet& rules);

bool is_normal(const TGD& rule);

}  // namespace tgd
