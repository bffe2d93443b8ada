#pragma once

#include "json.hpp"
#include "tgd/chase.hpp"
#include "tgd/classes.hpp"
#include "tgd/derivation.hpp"
#include "tgd/normalizer.hpp"

namespace tgd {

inline constexpr const char* kSchema = "v1";

nlohmann::json to_json(const Homomorphism& h);
nlohmann::json to_json(const AskVerdict& v);
// one entry per atom: {atom, level, trigger}; trigger is null for database facts
nlohmann::json to_json(const ChaseResult& r);
nlohmann::json to_json(const DerivationTree& t);
nlohmann::json to_json(const NormalizationResult& n);
nlohmann::json to_json(const AuditReport& a);

}  // namespace tgd
