#include "tgd/loops.hpp"

#include <algorithm>
#include <set>

#include "tgd/comparability.hpp"
#include "tgd/normalizer.hpp"
#include "unify.hpp"

namespace tgd {

namespace {

std::uint64_t max_null(const DerivationPath& path) {
  std::uint64_t m = 0;
  for (const auto& e : path) {
    for (const auto& t : e.instance.binding_tuple())
      if (t.is_null()) m = std::max(m, t.index());
    for (const auto& t : nulls_of(e.instance.body)) m = std::max(m, t.index());
  }
  return m;
}

std::vector<Atom> distinct(const std::vector<Atom>& atoms) {
  std::vector<Atom> out;
  for (const auto& a : atoms)
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  return out;
}

bool contains(const std::vector<Atom>& as, const Atom& a) { return std::find(as.begin(), as.end(), a) != as.end(); }

std::vector<std::string> intersect(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::string> with(std::vector<Atom> as, const Atom& a) {
  as.push_back(a);
  return var_set(as);
}

}  // namespace

std::vector<std::string> var_set(const std::vector<Atom>& atoms) {
  auto v = variables_of(atoms);
  std::sort(v.begin(), v.end());
  return v;
}

RuleInstance closed_last(const DerivationPath& path, const std::vector<std::size_t>& rec) {
  const std::size_t n = path.size();
  const RuleInstance& last = path.back().instance;
  if (n < 2 || rec.size() + 1 < n) return last;
  detail::Store store("#R");
  store.reserve_nulls(max_null(path));
  if (rec[0] >= last.body.size()) return last;
  Atom target = last.body[rec[0]];
  for (std::size_t s = 1; s < n; ++s) {
    auto outcomes = detail::unify_head(store, path[s].instance.base, target, false);
    if (outcomes.empty()) return last;
    store = std::move(outcomes.front().first);
    if (s + 1 < n) target = outcomes.front().second.body_atom(store, rec[s]);
  }
  std::map<Term, Term> m;
  for (const auto& t : last.binding_tuple())
    if (t.is_variable()) m[t] = store.resolve(t);
  return rename(last, m);
}

RuleInstance closed_last(const DerivationPath& path) {
  std::vector<std::size_t> rec;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto r = recursive_index(path, i);
    if (!r) return path.back().instance;
    rec.push_back(*r);
  }
  return closed_last(path, rec);
}

namespace {

// every body position of ρ_i holding α_{i+1}
std::vector<std::size_t> recursive_candidates(const DerivationPath& path, std::size_t i) {
  std::vector<std::size_t> out;
  const auto& body = path[i].instance.body;
  for (std::size_t k = 0; k < body.size(); ++k)
    if (body[k] == path[i + 1].atom) out.push_back(k);
  return out;
}

bool closes(const DerivationPath& path, const RuleInstance& closed) {
  const std::size_t n = path.size();
  if (!comparable_instances(path.front().instance, closed)) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const RuleInstance& rj = j == n - 1 ? closed : path[j].instance;
      if (comparable_instances(path[i].instance, rj)) return false;
    }
  return true;
}

}  // namespace

// When several body atoms of an element equal the next head, each choice of
// recursive atom is a different reading of the path; it is a loop pattern
// if one of them closes.
std::optional<LoopPattern> as_loop_pattern(const DerivationPath& path) {
  const std::size_t n = path.size();
  if (n < 2 || !validate_path(path)) return std::nullopt;
  std::vector<std::vector<std::size_t>> cands;
  for (std::size_t i = 0; i + 1 < n; ++i) cands.push_back(recursive_candidates(path, i));
  std::vector<std::size_t> pick(cands.size(), 0);
  while (true) {
    std::vector<std::size_t> rec;
    for (std::size_t i = 0; i < cands.size(); ++i) rec.push_back(cands[i][pick[i]]);
    if (closes(path, closed_last(path, rec))) return LoopPattern{path, rec};
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == cands[i].size()) pick[i++] = 0;
    if (i == pick.size()) return std::nullopt;
  }
}

bool is_loop_pattern(const DerivationPath& path) { return as_loop_pattern(path).has_value(); }

// ------------------------------------------------------------ enumeration

namespace {

struct Element {
  detail::Copy copy;
  std::size_t rec = 0;
};

struct PathState {
  detail::Store store;
  std::vector<Element> elems;
};

class LoopSearch {
 public:
  LoopSearch(const std::vector<RulePtr>& rules, const LoopEnumOptions& opts) : rules_(rules), opts_(opts) {
    for (const auto& r : rules) heads_.insert(r->head().predicate);
  }

  void from(const RulePtr& start) {
    PathState s;
    Atom target{start->head().predicate, {}};
    for (std::size_t k = 0; k < start->head().args.size(); ++k) target.args.push_back(s.store.fresh_var());
    auto init = detail::unify_head(s.store, start, target, false);
    if (init.empty()) return;
    s.store = std::move(init.front().first);
    s.elems.push_back({std::move(init.front().second), 0});
    dfs(s);
  }

  LoopEnumResult result;

 private:
  DerivationPath materialise(const PathState& s) const {
    DerivationPath p;
    for (const auto& e : s.elems) {
      RuleInstance ri = e.copy.finish(s.store);
      p.push_back({ri.head, ri});
    }
    return p;
  }

  void record(const PathState& s) {
    auto path = materialise(s);
    if (!is_loop_pattern(path)) return;
    auto canon = canonical(path);
    for (const auto& lp : result.patterns)
      if (paths_comparable(lp.path, canon)) return;
    result.patterns.push_back(*as_loop_pattern(canon));
  }

  // A comparable interior pair only dooms the path if later unifications
  // cannot separate it: every variable still open (it occurs in the last
  // element's body) must sit at the same positions in both elements.
  bool closed_pair_comparable(const PathState& s) const {
    const std::size_t closed = s.elems.size() - 1;
    std::vector<RuleInstance> inst;
    for (std::size_t i = 0; i < closed; ++i) inst.push_back(s.elems[i].copy.finish(s.store));
    const auto open = var_set(s.elems.back().copy.finish(s.store).body);
    auto is_open = [&](const Term& t) { return t.is_variable() && std::binary_search(open.begin(), open.end(), t.name()); };
    for (std::size_t i = 0; i < closed; ++i)
      for (std::size_t j = i + 1; j < closed; ++j) {
        if (!comparable_instances(inst[i], inst[j])) continue;
        auto a = inst[i].binding_tuple(), b = inst[j].binding_tuple();
        bool stable = true;
        for (std::size_t k = 0; k < a.size() && stable; ++k)
          if ((is_open(a[k]) || is_open(b[k])) && a[k] != b[k]) stable = false;
        if (stable) return true;
      }
    return false;
  }

  void dfs(PathState& s) {
    if (result.capped) return;
    if (++result.states > opts_.max_states) {
      result.capped = true;
      result.cap_reason = "max_states";
      return;
    }
    const std::size_t m = s.elems.size();
    if (m >= 2 && s.elems.back().copy.rule->id() == s.elems.front().copy.rule->id()) record(s);
    const auto& last = s.elems.back();
    for (std::size_t k = 0; k < last.copy.rule->body().size(); ++k) {
      Atom beta = last.copy.body_atom(s.store, k);
      if (!heads_.count(beta.predicate)) continue;
      for (const auto& r : rules_) {
        if (r->head().predicate != beta.predicate) continue;
        for (auto& [store, copy] : detail::unify_head(s.store, r, beta, false)) {
          if (m >= opts_.max_len) {
            result.capped = true;
            result.cap_reason = "max_len";
            return;
          }
          PathState next{std::move(store), s.elems};
          next.elems.back().rec = k;
          next.elems.push_back({std::move(copy), 0});
          if (closed_pair_comparable(next)) continue;
          dfs(next);
          if (result.capped) return;
        }
      }
    }
  }

  const std::vector<RulePtr>& rules_;
  const LoopEnumOptions& opts_;
  std::set<std::string> heads_;
};

}  // namespace

LoopEnumResult enumerate_loop_patterns(const std::vector<RulePtr>& rules, const LoopEnumOptions& opts) {
  std::vector<LoopEnumResult> parts(rules.size());
  const long n = static_cast<long>(rules.size());
#pragma omp parallel for schedule(dynamic) if (opts.parallel && n > 1)
  for (long i = 0; i < n; ++i) {
    LoopSearch search(rules, opts);
    search.from(rules[i]);
    parts[i] = std::move(search.result);
  }
  LoopEnumResult out;
  for (auto& p : parts) {
    out.states += p.states;
    if (p.capped && !out.capped) {
      out.capped = true;
      out.cap_reason = p.cap_reason;
    }
    for (auto& lp : p.patterns) {
      bool dup = std::any_of(out.patterns.begin(), out.patterns.end(),
                             [&](const LoopPattern& q) { return paths_comparable(q.path, lp.path); });
      if (!dup) out.patterns.push_back(std::move(lp));
    }
  }
  return out;
}

LoopEnumResult enumerate_loop_patterns(const std::vector<NormalTGD>& rules, const LoopEnumOptions& opts) {
  return enumerate_loop_patterns(share(rules), opts);
}

// ------------------------------------------------------------ LR / GLR

namespace {

// ⋂_{j=1..n} var(α_j)
std::vector<std::string> shared_vars(const LoopPattern& loop) {
  std::vector<std::string> acc = var_set({loop.path.front().atom});
  for (const auto& e : loop.path) acc = intersect(acc, var_set({e.atom}));
  return acc;
}

// body(ρ_i) \ {α_{i+1}}, distinct
std::vector<Atom> others(const LoopPattern& loop, std::size_t i) {
  std::vector<Atom> out;
  for (const auto& a : distinct(loop.path[i].instance.body))
    if (!(a == loop.path[i + 1].atom)) out.push_back(a);
  return out;
}

// First split (by increasing subset mask over the non-recursive atoms)
// satisfying pred(body_h, body_b).
template <class Pred>
std::optional<Split> find_split(const LoopPattern& loop, std::size_t i, Pred pred) {
  auto rest = others(loop, i);
  if (rest.size() > 20) return std::nullopt;
  for (std::uint32_t mask = 0; mask < (1u << rest.size()); ++mask) {
    Split s;
    s.body_b.push_back(loop.path[i + 1].atom);
    for (std::size_t k = 0; k < rest.size(); ++k) (mask >> k & 1 ? s.body_h : s.body_b).push_back(rest[k]);
    if (pred(s)) return s;
  }
  return std::nullopt;
}

}  // namespace

std::optional<SplitWitness> check_lr(const LoopPattern& loop) {
  const auto& p = loop.path;
  if (p.size() < 2) return std::nullopt;
  SplitWitness w;
  w.shared = shared_vars(loop);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    auto s = find_split(loop, i, [&](const Split& s) {
      return intersect(with(s.body_h, p[i].atom), var_set(s.body_b)) == w.shared;
    });
    if (!s) return std::nullopt;
    w.splits.push_back(std::move(*s));
  }
  const auto& first = p.front().instance;
  std::vector<std::string> all = first.base->universal_vars();
  for (const auto& z : first.base->exist_vars()) all.push_back(z);
  for (const auto& v : all) {
    Term img = first.theta.apply(Term::variable(v));
    if (img.is_variable() && std::binary_search(w.shared.begin(), w.shared.end(), img.name()))
      w.shared_rule_vars.push_back(v);
  }
  return w;
}

std::string to_string(GlrType t) {
  switch (t) {
    case GlrType::I: return "I";
    case GlrType::II: return "II";
    case GlrType::III: return "III";
    case GlrType::IV: return "IV";
    case GlrType::V: return "V";
  }
  return "?";
}

std::optional<GlrWitness> check_glr(const LoopPattern& loop) {
  const auto& p = loop.path;
  const std::size_t n = p.size();
  if (n < 2) return std::nullopt;

  if (auto w = check_lr(loop)) return GlrWitness{GlrType::I, std::nullopt, std::nullopt, std::move(w)};

  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto s = find_split(loop, i, [&](const Split& s) {
      return intersect(with(s.body_h, p[i].atom), var_set(s.body_b)).empty();
    });
    if (s) return GlrWitness{GlrType::II, i, std::move(s), std::nullopt};
  }

  bool type3 = true;
  for (std::size_t i = 0; i + 1 < n && type3; ++i) {
    auto all = with(p[i].instance.body, p[i].instance.head);
    for (const auto& b : p[i].instance.body)
      if (var_set({b}) != all) type3 = false;
  }
  if (type3) return GlrWitness{GlrType::III, std::nullopt, std::nullopt, std::nullopt};

  bool type4 = true;
  std::vector<std::string> prefix = var_set({p[0].atom});
  for (std::size_t i = 0; i + 1 < n && type4; ++i) {
    if (i > 0) prefix = intersect(prefix, var_set({p[i].atom}));
    auto rec = var_set({p[i + 1].atom});
    for (const auto& b : others(loop, i)) {
      auto common = intersect(rec, var_set({b}));
      if (!common.empty() && intersect(common, prefix) != common) type4 = false;
    }
  }
  if (type4) return GlrWitness{GlrType::IV, std::nullopt, std::nullopt, std::nullopt};

  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<Atom> later;
    for (std::size_t j = i + 1; j < n; ++j) later.push_back(p[j].atom);
    Split s;
    for (const auto& a : distinct(p[i].instance.body))
      (a.has_nulls() && !contains(later, a) ? s.body_h : s.body_b).push_back(a);
    if (!s.body_h.empty()) return GlrWitness{GlrType::V, i, std::move(s), std::nullopt};
  }
  return std::nullopt;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

nlohmann::json atoms_json(const std::vector<Atom>& as) {
  auto j = nlohmann::json::array();
  for (const auto& a : as) j.push_back(a.str());
  return j;
}

nlohmann::json split_json(const Split& s) { return {{"body_h", atoms_json(s.body_h)}, {"body_b", atoms_json(s.body_b)}}; }

}  // namespace

nlohmann::json to_json(const LoopPattern& loop) {
  auto j = nlohmann::json::array();
  for (std::size_t i = 0; i < loop.path.size(); ++i) {
    const auto& e = loop.path[i];
    nlohmann::json el = {{"atom", e.atom.str()}, {"rule", e.instance.base->id()}, {"instance", e.instance.str()}};
    if (i < loop.recursive.size()) el["recursive_atom"] = e.instance.body[loop.recursive[i]].str();
    j.push_back(el);
  }
  return j;
}

nlohmann::json to_json(const SplitWitness& w) {
  auto splits = nlohmann::json::array();
  for (const auto& s : w.splits) splits.push_back(split_json(s));
  return {{"shared", w.shared}, {"shared_rule_vars", w.shared_rule_vars}, {"splits", splits}};
}

nlohmann::json MembershipReport::to_json() const {
  return {{"class", cls}, {"verdict", to_string(verdict)}, {"evidence", evidence}, {"caps", caps}};
}

MembershipReport classify_loops(const std::string& cls, const LoopEnumResult& loops, const LoopEnumOptions& caps) {
  MembershipReport rep;
  rep.cls = cls;
  rep.caps = {{"max_path_len", caps.max_len},
              {"max_states", caps.max_states},
              {"states", loops.states},
              {"loop_classes", loops.patterns.size()},
              {"hit", loops.capped}};
  if (loops.capped) rep.caps["reason"] = loops.cap_reason;
  rep.caps_hit = loops.capped;
  const bool glr = cls == "glr";
  for (const auto& lp : loops.patterns) {
    nlohmann::json ev = {{"loop", tgd::to_json(lp)}};
    bool ok = false;
    if (glr) {
      if (auto w = check_glr(lp)) {
        ok = true;
        ev["type"] = to_string(w->type);
        if (w->lr) ev["witness"] = tgd::to_json(*w->lr);
        if (w->split) ev["witness"] = {{"element", *w->element + 1}, {"split", split_json(*w->split)}};
      }
    } else if (auto w = check_lr(lp)) {
      ok = true;
      ev["witness"] = tgd::to_json(*w);
    }
    ev["accepted"] = ok;
    if (!ok && rep.verdict != Verdict::No) {
      rep.verdict = Verdict::No;
      rep.violating = lp;
    }
    rep.evidence.push_back(std::move(ev));
  }
  if (rep.verdict == Verdict::Yes && loops.capped) rep.verdict = Verdict::Inconclusive;
  return rep;
}

MembershipReport classify_lr(const SourceRuleSet& rules, const LoopEnumOptions& caps) {
  return classify_loops("lr", enumerate_loop_patterns(normalize_rules(rules), caps), caps);
}

MembershipReport classify_glr(const SourceRuleSet& rules, const LoopEnumOptions& caps) {
  return classify_loops("glr", enumerate_loop_patterns(normalize_rules(rules), caps), caps);
}

}  // namespace tgd
