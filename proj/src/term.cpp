#include "tgd/term.hpp"

#include <sstream>
#include <unordered_set>

namespace tgd {

std::string Term::str() const {
  if (kind_ == TermKind::Null) return "n" + std::to_string(index_);
  return name_;
}

bool Atom::is_ground() const {
  for (const auto& t : args)
    if (t.is_variable()) return false;
  return true;
}

bool Atom::has_nulls() const {
  for (const auto& t : args)
    if (t.is_null()) return true;
  return false;
}

std::string Atom::str() const {
  std::string out = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].str();
  }
  return out + ")";
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << t.str(); }
std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << a.str(); }

std::string join_atoms(const std::vector<Atom>& atoms, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += sep;
    out += atoms[i].str();
  }
  return out;
}

std::vector<std::string> variables_of(const std::vector<Atom>& atoms) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (t.is_variable() && seen.insert(t.name()).second) out.push_back(t.name());
  return out;
}

std::vector<Term> nulls_of(const std::vector<Atom>& atoms) {
  std::vector<Term> out;
  std::unordered_set<Term> seen;
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (t.is_null() && seen.insert(t).second) out.push_back(t);
  return out;
}

std::vector<Term> non_constant_terms(const std::vector<Atom>& atoms) {
  std::vector<Term> out;
  std::unordered_set<Term> seen;
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (!t.is_constant() && seen.insert(t).second) out.push_back(t);
  return out;
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::size_t h = std::hash<std::string>{}(t.name());
  h ^= std::hash<std::uint64_t>{}(t.index()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h * 31 + static_cast<std::size_t>(t.kind());
}

std::size_t AtomHash::operator()(const Atom& a) const noexcept {
  std::size_t h = std::hash<std::string>{}(a.predicate);
  TermHash th;
  for (const auto& t : a.args) h ^= th(t) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace tgd
