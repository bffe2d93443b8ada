#pragma once

#include <map>
#include <optional>
#include <vector>

#include "tgd/term.hpp"

namespace tgd {

struct Homomorphism {
  std::map<Term, Term> mapping;

  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;
  std::vector<Atom> apply(const std::vector<Atom>& as) const;
  std::string str() const;

  friend bool operator==(const Homomorphism&, const Homomorphism&) = default;
};

// Tries to extend h so that h(s) = t.  Constants are fixed, nulls go to
// constants or nulls, variables go anywhere.  Returns false (h possibly
// partially modified) on failure.
bool extend_term(Homomorphism& h, const Term& s, const Term& t);
bool extend_atom(Homomorphism& h, const Atom& s, const Atom& t);

// Every homomorphism h with h(source) ⊆ target, up to `limit`.  Enumeration
// order: source atoms sorted by predicate (stable), candidates in the
// target's sorted order.
std::vector<Homomorphism> find_homomorphisms(const std::vector<Atom>& source,
                                             const std::vector<Atom>& target,
                                             std::optional<std::size_t> limit = std::nullopt);

std::optional<Homomorphism> find_homomorphism(const std::vector<Atom>& source,
                                              const std::vector<Atom>& target);

}  // namespace tgd
