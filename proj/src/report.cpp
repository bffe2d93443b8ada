#include "tgd/report.hpp"

#include <map>

namespace tgd {

using nlohmann::json;

json to_json(const Homomorphism& h) {
  json j = json::object();
  for (const auto& [k, v] : h.mapping)
    if (!k.is_constant()) j[k.str()] = v.str();
  return j;
}

json to_json(const AskVerdict& v) {
  json j = {{"schema", kSchema}, {"answer", to_string(v.answer)}, {"bound", v.bound}, {"atoms", v.atoms}};
  if (v.witness) {
    j["witness"] = to_json(*v.witness);
    j["depth"] = v.depth;
  }
  return j;
}

json to_json(const ChaseResult& r) {
  std::map<Atom, const TriggerRecord*> first;
  for (const auto& t : r.state.trigger_log()) first.emplace(t.produced, &t);
  json atoms = json::array();
  for (std::size_t i = 0; i < r.state.size(); ++i) {
    const Atom& a = r.state.atoms()[i];
    json e = {{"atom", a.str()}, {"level", r.state.level_at(i)}, {"trigger", nullptr}};
    if (r.state.level_at(i) > 0) {
      const auto* t = first.at(a);
      json binding = json::array();
      for (const auto& b : t->binding) binding.push_back(b.str());
      e["trigger"] = {{"rule", t->rule_id}, {"binding", binding}};
    }
    atoms.push_back(std::move(e));
  }
  return {{"schema", kSchema},
          {"atoms", atoms},
          {"saturated", r.saturated},
          {"overflow", r.overflow},
          {"steps", r.state.step_count()}};
}

json to_json(const DerivationTree& t) {
  json nodes = json::array();
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    json e = {{"id", i}, {"atom", n.atom.str()}};
    if (n.instance) {
      e["rule"] = n.instance->base->id();
      e["instance"] = n.instance->str();
    } else {
      e["fact"] = true;
    }
    json kids = json::array();
    for (const auto& c : n.children) kids.push_back(c ? json(*c) : json(nullptr));
    e["children"] = kids;
    nodes.push_back(std::move(e));
  }
  return {{"depth", t.depth()}, {"nodes", nodes}};
}

json to_json(const NormalizationResult& n) {
  json rules = json::array();
  for (const auto& r : n.rules) rules.push_back({{"id", r.id()}, {"rule", r.str()}});
  json j = {{"schema", kSchema}, {"rules", rules}, {"aux_predicates", n.aux_predicates}, {"provenance", n.provenance}};
  if (n.query) j["query"] = "? " + join_atoms(n.query->atoms);
  return j;
}

json to_json(const AuditReport& a) {
  json j = {{"schema", kSchema}};
  json reports = json::array();
  for (const auto& r : a.reports) {
    j[r.cls] = to_string(r.verdict);
    reports.push_back(r.to_json());
  }
  j["reports"] = reports;
  j["flags"] = a.flags;
  return j;
}

}  // namespace tgd
