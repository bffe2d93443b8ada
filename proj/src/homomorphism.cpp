#include "tgd/homomorphism.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace tgd {

Term Homomorphism::apply(const Term& t) const {
  auto it = mapping.find(t);
  return it == mapping.end() ? t : it->second;
}

Atom Homomorphism::apply(const Atom& a) const {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(apply(t));
  return out;
}

std::vector<Atom> Homomorphism::apply(const std::vector<Atom>& as) const {
  std::vector<Atom> out;
  out.reserve(as.size());
  for (const auto& a : as) out.push_back(apply(a));
  return out;
}

std::string Homomorphism::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : mapping) {
    if (k == v && k.is_constant()) continue;
    out += (first ? "" : ", ") + k.str() + "->" + v.str();
    first = false;
  }
  return out + "}";
}

bool extend_term(Homomorphism& h, const Term& s, const Term& t) {
  if (s.is_constant()) return s == t;
  if (s.is_null() && t.is_variable()) return false;
  auto [it, fresh] = h.mapping.emplace(s, t);
  return fresh || it->second == t;
}

bool extend_atom(Homomorphism& h, const Atom& s, const Atom& t) {
  if (s.predicate != t.predicate || s.args.size() != t.args.size()) return false;
  for (std::size_t i = 0; i < s.args.size(); ++i)
    if (!extend_term(h, s.args[i], t.args[i])) return false;
  return true;
}

namespace {

struct Search {
  std::vector<const Atom*> order;
  std::unordered_map<std::string, std::vector<const Atom*>> candidates;
  std::optional<std::size_t> limit;
  std::vector<Homomorphism> out;

  bool run(std::size_t k, const Homomorphism& h) {
    if (k == order.size()) {
      out.push_back(h);
      return !limit || out.size() < *limit;
    }
    auto it = candidates.find(order[k]->predicate);
    if (it == candidates.end()) return true;
    for (const Atom* t : it->second) {
      Homomorphism next = h;
      if (extend_atom(next, *order[k], *t) && !run(k + 1, next)) return false;
    }
    return true;
  }
};

}  // namespace

std::vector<Homomorphism> find_homomorphisms(const std::vector<Atom>& source, const std::vector<Atom>& target,
                                             std::optional<std::size_t> limit) {
  if (limit && *limit == 0) return {};
  Search s;
  s.limit = limit;
  std::vector<std::size_t> idx(source.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return source[a].predicate < source[b].predicate; });
  for (auto i : idx) s.order.push_back(&source[i]);
  std::vector<const Atom*> sorted;
  for (const auto& a : target) sorted.push_back(&a);
  std::sort(sorted.begin(), sorted.end(), [](const Atom* a, const Atom* b) { return *a < *b; });
  sorted.erase(std::unique(sorted.begin(), sorted.end(), [](const Atom* a, const Atom* b) { return *a == *b; }),
               sorted.end());
  for (const Atom* a : sorted) s.candidates[a->predicate].push_back(a);
  s.run(0, Homomorphism{});
  return std::move(s.out);
}

std::optional<Homomorphism> find_homomorphism(const std::vector<Atom>& source, const std::vector<Atom>& target) {
  auto hs = find_homomorphisms(source, target, 1);
  if (hs.empty()) return std::nullopt;
  return hs.front();
}

}  // namespace tgd
