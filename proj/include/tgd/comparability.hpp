#pragma once

#include <span>

#include "tgd/rules.hpp"

namespace tgd {

// t1 ∼ t2: same length, positionwise type comparable (equal constants,
// variable against variable, null against null) and the same equality
// pattern.  Shared variables/nulls are deliberately not pinned to equal
// positions; that would make ∼ non-transitive.
bool comparable_tuples(std::span<const Term> t1, std::span<const Term> t2);

// same base rule and comparable binding tuples
bool comparable_instances(const RuleInstance& r1, const RuleInstance& r2);

// The positionwise map from[k] -> to[k] for comparable tuples (identity on
// constants).  Empty optional when the tuples are not comparable.
std::optional<std::map<Term, Term>> alignment(std::span<const Term> from, std::span<const Term> to);

}  // namespace tgd
