#include "tgd/comparability.hpp"

namespace tgd {

bool comparable_tuples(std::span<const Term> t1, std::span<const Term> t2) {
  if (t1.size() != t2.size()) return false;
  const std::size_t n = t1.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (t1[i].kind() != t2[i].kind()) return false;
    if (t1[i].is_constant() && t1[i] != t2[i]) return false;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((t1[i] == t1[j]) != (t2[i] == t2[j])) return false;
  return true;
}

bool comparable_instances(const RuleInstance& r1, const RuleInstance& r2) {
  if (r1.base != r2.base && (!r1.base || !r2.base || !(*r1.base == *r2.base))) return false;
  auto a = r1.binding_tuple();
  auto b = r2.binding_tuple();
  return comparable_tuples(a, b);
}

std::optional<std::map<Term, Term>> alignment(std::span<const Term> from, std::span<const Term> to) {
  if (!comparable_tuples(from, to)) return std::nullopt;
  std::map<Term, Term> m;
  for (std::size_t i = 0; i < from.size(); ++i) m.emplace(from[i], to[i]);
  return m;
}

}  // namespace tgd
