#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace tgd {

enum class TermKind : std::uint8_t { Constant = 0, Null = 1, Variable = 2 };

// A constant, a variable, or a labelled null.  Ordering puts every constant
// before every null; variables sort last.
class Term {
 public:
  Term() = default;

  static Term constant(std::string name) { return Term(TermKind::Constant, std::move(name), 0); }
  static Term variable(std::string name) { return Term(TermKind::Variable, std::move(name), 0); }
  static Term null(std::uint64_t index) { return Term(TermKind::Null, {}, index); }

  TermKind kind() const { return kind_; }
  bool is_constant() const { return kind_ == TermKind::Constant; }
  bool is_variable() const { return kind_ == TermKind::Variable; }
  bool is_null() const { return kind_ == TermKind::Null; }

  // name of a constant or variable; empty for nulls
  const std::string& name() const { return name_; }
  std::uint64_t index() const { return index_; }

  std::string str() const;

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind_ == b.kind_ && a.index_ == b.index_ && a.name_ == b.name_;
  }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (a.kind_ == TermKind::Null) return a.index_ <=> b.index_;
    return a.name_.compare(b.name_) <=> 0;
  }

 private:
  Term(TermKind k, std::string n, std::uint64_t i) : kind_(k), name_(std::move(n)), index_(i) {}

  TermKind kind_ = TermKind::Constant;
  std::string name_;
  std::uint64_t index_ = 0;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;  // no variables
  bool has_nulls() const;
  std::string str() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (auto c = a.predicate.compare(b.predicate) <=> 0; c != 0) return c;
    return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                  b.args.end());
  }
};

std::ostream& operator<<(std::ostream& os, const Term& t);
std::ostream& operator<<(std::ostream& os, const Atom& a);

std::string join_atoms(const std::vector<Atom>& atoms, const char* sep = ", ");

// Distinct variable names of the atoms in order of first occurrence.
std::vector<std::string> variables_of(const std::vector<Atom>& atoms);
// Distinct nulls in order of first occurrence.
std::vector<Term> nulls_of(const std::vector<Atom>& atoms);
// Distinct variables and nulls, in order of first occurrence.
std::vector<Term> non_constant_terms(const std::vector<Atom>& atoms);

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};
struct AtomHash {
  std::size_t operator()(const Atom& a) const noexcept;
};

}  // namespace tgd

template <>
struct std::hash<tgd::Term> : tgd::TermHash {};
template <>
struct std::hash<tgd::Atom> : tgd::AtomHash {};
