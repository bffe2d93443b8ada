#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tgd/rules.hpp"

namespace tgd {

struct SourceRuleSet {
  std::vector<TGD> rules;
  std::map<std::string, std::size_t> signature;  // predicate -> arity
  std::set<std::string> constants;

  friend bool operator==(const SourceRuleSet&, const SourceRuleSet&) = default;
};

// Ground atoms, kept in first-seen order without duplicates.
struct Database {
  std::vector<Atom> facts;

  bool contains(const Atom& a) const;
  void add(Atom a);  // ignores duplicates
  friend bool operator==(const Database&, const Database&) = default;
};

// Boolean conjunctive query; all variables are existentially read.
struct Query {
  std::vector<Atom> atoms;
  std::vector<std::string> variables() const { return variables_of(atoms); }
  friend bool operator==(const Query&, const Query&) = default;
};

// All three throw ParseError carrying line/column.
SourceRuleSet parse_rules(const std::string& text);
Database parse_facts(const std::string& text);
Query parse_query(const std::string& text);

// Arity checks across inputs that are parsed separately.
void check_signature(const SourceRuleSet& rules, const Database& db);

std::string render(const TGD& rule, std::size_t position);  // position is 0-based
std::string render(const SourceRuleSet& rules);
std::string render(const Database& db);
std::string render(const Query& q);
std::string render(const std::vector<NormalTGD>& rules);

// true when the identifier is reserved for labelled nulls (n17 etc.)
bool is_null_name(const std::string& ident);

std::string read_file(const std::string& path);

}  // namespace tgd
