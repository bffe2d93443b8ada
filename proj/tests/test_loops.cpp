#include <gtest/gtest.h>

#include <functional>

#include "support.hpp"
#include "tgd/comparability.hpp"
#include "tgd/loops.hpp"

using namespace tgd;
using namespace tgd::test;

namespace {

std::vector<RulePtr> fixture(const char* f) {
  return share(normal(read_file(std::string(TGD_FIXTURES) + "/" + f)));
}

PathElement el(const RulePtr& r, Substitution th) {
  auto ri = instantiate(r, th);
  return {ri.head, ri};
}

std::string rule_sequence(const DerivationPath& p) {
  std::string s;
  for (const auto& e : p) s += e.instance.base->id() + " ";
  return s;
}

// Independent loop oracle with its own union-find unifier.  Every sequence
// of (rule, body atom) choices up to a length is solved as one system of
// equations head(i+1) = chosen body atom of i, giving the most general path.
// The last element is closed by solving the sequence extended by one more
// period below it.  No search code of the library is used.
class BruteLoops {
 public:
  BruteLoops(std::vector<RulePtr> rules, std::size_t max_len) : rules_(std::move(rules)), max_len_(max_len) {}

  std::vector<DerivationPath> run() {
    std::vector<Choice> seq;
    extend(seq);
    return found_;
  }

 private:
  struct Choice {
    RulePtr rule;
    std::size_t atom;  // body atom unified with the next element's head
  };

  // union-find over "element:variable" keys; a class may carry one constant
  // or one null (an existential of some element)
  struct Solver {
    std::map<std::string, std::string> parent;
    std::map<std::string, Term> fixed;
    std::map<std::string, std::size_t> names;

    std::string find(const std::string& k) {
      auto [it, fresh] = parent.emplace(k, k);
      if (fresh || it->second == k) return k;
      return it->second = find(it->second);
    }
    bool fix(const std::string& k, const Term& t) {
      auto r = find(k);
      auto [it, fresh] = fixed.emplace(r, t);
      return fresh || it->second == t;
    }
    bool join(const std::string& a, const std::string& b) {
      auto ra = find(a), rb = find(b);
      if (ra == rb) return true;
      parent[ra] = rb;
      if (auto it = fixed.find(ra); it != fixed.end()) {
        Term t = it->second;
        fixed.erase(it);
        return fix(rb, t);
      }
      return true;
    }
  };

  static std::string key(std::size_t i, const std::string& v) { return std::to_string(i) + ":" + v; }

  static bool is_exist(const RulePtr& r, const std::string& v) {
    const auto& ex = r->exist_vars();
    return std::find(ex.begin(), ex.end(), v) != ex.end();
  }

  // solve the chain of `rules` where element i's body atom `atoms[i]`
  // equals element i+1's head
  static std::optional<Solver> solve(const std::vector<Choice>& seq) {
    Solver s;
    for (std::size_t i = 0; i < seq.size(); ++i)
      for (const auto& z : seq[i].rule->exist_vars())
        if (!s.fix(key(i, z), N(100 * (i + 1)))) return std::nullopt;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      const Atom& b = seq[i].rule->body()[seq[i].atom];
      const Atom& h = seq[i + 1].rule->head();
      if (b.predicate != h.predicate) return std::nullopt;
      for (std::size_t k = 0; k < b.args.size(); ++k) {
        const Term &x = b.args[k], &y = h.args[k];
        if (x.is_constant() && y.is_constant()) {
          if (x != y) return std::nullopt;
        } else if (x.is_constant()) {
          if (!s.fix(key(i + 1, y.name()), x)) return std::nullopt;
        } else if (y.is_constant()) {
          if (!s.fix(key(i, x.name()), y)) return std::nullopt;
        } else if (!s.join(key(i, x.name()), key(i + 1, y.name()))) {
          return std::nullopt;
        }
      }
    }
    return s;
  }

  static RuleInstance element(Solver& s, const std::vector<Choice>& seq, std::size_t i) {
    Substitution th;
    const auto& r = seq[i].rule;
    for (const auto* vs : {&r->universal_vars(), &r->exist_vars()})
      for (const auto& v : *vs) {
        auto root = s.find(key(i, v));
        if (auto it = s.fixed.find(root); it != s.fixed.end()) th.bind(v, it->second);
        else th.bind(v, V("U" + std::to_string(s.names.emplace(root, s.names.size()).first->second)));
      }
    return instantiate(r, th);
  }

  void test(const std::vector<Choice>& seq) {
    const std::size_t n = seq.size();
    auto s = solve(seq);
    if (!s) return;
    DerivationPath p;
    for (std::size_t i = 0; i < n; ++i) {
      auto ri = element(*s, seq, i);
      p.push_back({ri.head, ri});
    }
    if (!validate_path(p)) return;
    // one more period below the last element; the atom chosen in the last
    // element is the one chosen in the first
    std::vector<Choice> ext = seq;
    ext.back().atom = seq.front().atom;
    for (std::size_t i = 1; i < n; ++i) ext.push_back(seq[i]);
    auto se = solve(ext);
    if (!se) return;
    RuleInstance closed = element(*se, ext, n - 1);
    if (!comparable_instances(p.front().instance, closed)) return;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (i == 0 && j + 1 == n) continue;
        if (comparable_instances(p[i].instance, j + 1 == n ? closed : p[j].instance)) return;
      }
    found_.push_back(p);
  }

  // seq's last element has no chosen atom yet
  void extend(std::vector<Choice>& seq) {
    if (seq.empty()) {
      for (const auto& r : rules_) {
        seq.push_back({r, 0});
        extend(seq);
        seq.pop_back();
      }
      return;
    }
    if (seq.size() >= 2 && seq.front().rule == seq.back().rule) test(seq);
    if (seq.size() == max_len_) return;
    const std::size_t last = seq.size() - 1;
    for (std::size_t k = 0; k < seq[last].rule->body().size(); ++k)
      for (const auto& r : rules_) {
        if (seq[last].rule->body()[k].predicate != r->head().predicate) continue;
        seq[last].atom = k;
        seq.push_back({r, 0});
        extend(seq);
        seq.pop_back();
      }
  }

  std::vector<RulePtr> rules_;
  std::size_t max_len_;
  std::vector<DerivationPath> found_;
};

bool same_class_but_last(const DerivationPath& a, const DerivationPath& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].instance.base->id() != b[i].instance.base->id()) return false;
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (!comparable_instances(a[i].instance, b[i].instance)) return false;
  return true;
}

}  // namespace

TEST(LoopPattern, Example2Paths) {
  auto rules = fixture("example2.tgd");
  auto s1 = rules[0], s2 = rules[1];
  DerivationPath p1 = {el(s1, {{"X", V("Y1")}, {"Y", N(1)}, {"Z", N(2)}}),
                       el(s2, {{"X", V("X1")}, {"Y", V("Y1")}, {"Z", N(1)}, {"W", N(2)}}),
                       el(s1, {{"X", V("Y1")}, {"Y", V("X1")}, {"Z", V("Z1")}})};
  DerivationPath p2 = {el(s2, {{"X", N(3)}, {"Y", V("X2")}, {"Z", N(1)}, {"W", N(2)}}),
                       el(s1, {{"X", V("X2")}, {"Y", N(3)}, {"Z", N(4)}})};
  DerivationPath p3 = p2;
  p3.push_back(el(s2, {{"X", V("X1")}, {"Y", V("X2")}, {"Z", N(3)}, {"W", N(4)}}));
  EXPECT_TRUE(is_loop_pattern(p1));
  EXPECT_FALSE(is_loop_pattern(p2));
  EXPECT_TRUE(is_loop_pattern(p3));
  EXPECT_FALSE(is_loop_pattern({p1[0]}));
  auto lp = as_loop_pattern(p1);
  ASSERT_TRUE(lp);
  EXPECT_EQ(lp->recursive, (std::vector<std::size_t>{0, 0}));
}

TEST(EnumerateLoops, Example2HasTwoClasses) {
  auto res = enumerate_loop_patterns(fixture("example2.tgd"));
  EXPECT_FALSE(res.capped);
  ASSERT_EQ(res.patterns.size(), 2u);
  std::set<std::string> seqs;
  for (const auto& lp : res.patterns) {
    seqs.insert(rule_sequence(lp.path));
    EXPECT_TRUE(validate_path(lp.path));
    EXPECT_TRUE(is_loop_pattern(lp.path));
  }
  EXPECT_EQ(seqs, (std::set<std::string>{"r1 r2 r1 ", "r2 r1 r2 "}));
}

TEST(EnumerateLoops, Example3ContainsBothLoopShapes) {
  auto res = enumerate_loop_patterns(fixture("example3.tgd"));
  std::set<std::string> seqs;
  for (const auto& lp : res.patterns) seqs.insert(rule_sequence(lp.path));
  EXPECT_TRUE(seqs.count("r2 r1 r2 "));
  EXPECT_TRUE(seqs.count("r1 r2 r1 "));
}

TEST(EnumerateLoops, NoChainingNoLoops) {
  auto res = enumerate_loop_patterns(normal("a(X) -> b(X).\nc(X) -> d(X)."));
  EXPECT_TRUE(res.patterns.empty());
  EXPECT_FALSE(res.capped);
}

TEST(EnumerateLoops, CapIsReported) {
  LoopEnumOptions o;
  o.max_len = 2;
  auto res = enumerate_loop_patterns(fixture("example2.tgd"), o);
  EXPECT_TRUE(res.capped);
}

TEST(EnumerateLoops, DeterministicAndParallelInvariant) {
  for (const char* f : {"example2.tgd", "example3.tgd", "research.tgd", "prop4_agrd.tgd", "prop4_not_glr.tgd"}) {
    LoopEnumOptions par, ser;
    ser.parallel = false;
    auto a = enumerate_loop_patterns(fixture(f), par);
    auto b = enumerate_loop_patterns(fixture(f), ser);
    auto c = enumerate_loop_patterns(fixture(f), par);
    ASSERT_EQ(a.patterns.size(), b.patterns.size()) << f;
    for (std::size_t i = 0; i < a.patterns.size(); ++i) {
      EXPECT_EQ(to_string(a.patterns[i].path), to_string(b.patterns[i].path));
      EXPECT_EQ(to_string(a.patterns[i].path), to_string(c.patterns[i].path));
    }
  }
}

TEST(EnumerateLoops, AgreesWithBruteForceOnSmallSets) {
  Gen g(41);
  std::size_t sets = 0, brute_total = 0;
  for (int round = 0; round < 1000 && sets < 200; ++round) {
    auto sig = small_signature(g, 2, 3);
    std::vector<TGD> src;
    for (std::size_t i = 0, n = 1 + g.below(2); i < n; ++i)
      src.push_back(random_rule(g, sig, "r" + std::to_string(i + 1), 2, 3, 0.4, 0.0));
    auto rules = share(to_normal(src));
    LoopEnumOptions o;
    o.max_len = 12;
    auto res = enumerate_loop_patterns(rules, o);
    if (res.capped) continue;
    const std::size_t len = 6;
    BruteLoops bl(rules, len);
    auto brute = bl.run();
    ++sets;
    brute_total += brute.size();
    // every enumerated class of length <= len is realised by brute force
    for (const auto& lp : res.patterns) {
      if (lp.path.size() > len) continue;
      bool hit =
          std::any_of(brute.begin(), brute.end(), [&](const auto& b) { return same_class_but_last(b, lp.path); });
      EXPECT_TRUE(hit) << render(as_source(src)) << to_string(lp.path);
    }
    // every brute-force loop pattern belongs to an enumerated class
    for (const auto& b : brute) {
      bool hit = std::any_of(res.patterns.begin(), res.patterns.end(),
                             [&](const auto& lp) { return same_class_but_last(lp.path, b); });
      EXPECT_TRUE(hit) << render(as_source(src)) << to_string(b);
    }
  }
  EXPECT_GE(sets, 40u);
  EXPECT_GT(brute_total, 0u);
}

TEST(CheckLr, Example3Witness) {
  auto res = enumerate_loop_patterns(fixture("example3.tgd"));
  bool seen = false;
  for (const auto& lp : res.patterns) {
    auto w = check_lr(lp);
    ASSERT_TRUE(w) << to_string(lp.path);
    if (rule_sequence(lp.path) == "r2 r1 r2 ") {
      seen = true;
      ASSERT_EQ(w->shared_rule_vars, (std::vector<std::string>{"X"}));
      ASSERT_EQ(w->shared.size(), 1u);
    }
    for (std::size_t i = 0; i < w->splits.size(); ++i) {
      const auto& s = w->splits[i];
      EXPECT_NE(std::find(s.body_b.begin(), s.body_b.end(), lp.path[i + 1].atom), s.body_b.end());
    }
  }
  EXPECT_TRUE(seen);
}

// exhaustive bipartition oracle for the loop-restriction condition
bool lr_oracle(const LoopPattern& lp) {
  std::vector<std::string> shared;
  for (std::size_t j = 0; j < lp.path.size(); ++j) {
    auto v = var_set({lp.path[j].atom});
    if (j == 0) shared = v;
    else {
      std::vector<std::string> out;
      std::set_intersection(shared.begin(), shared.end(), v.begin(), v.end(), std::back_inserter(out));
      shared = out;
    }
  }
  for (std::size_t i = 0; i + 1 < lp.path.size(); ++i) {
    const auto& body = lp.path[i].instance.body;
    bool any = false;
    for (std::size_t mask = 0; mask < (std::size_t{1} << body.size()) && !any; ++mask) {
      std::vector<Atom> h = {lp.path[i].atom}, b;
      bool rec_in_b = false;
      for (std::size_t k = 0; k < body.size(); ++k) {
        if (mask >> k & 1) h.push_back(body[k]);
        else {
          b.push_back(body[k]);
          if (k == lp.recursive[i]) rec_in_b = true;
        }
      }
      if (!rec_in_b) continue;
      // an atom occurring twice in the body cannot sit on both sides
      bool clash = false;
      for (std::size_t k = 1; k < h.size(); ++k)
        if (std::find(b.begin(), b.end(), h[k]) != b.end()) clash = true;
      if (clash) continue;
      auto hv = var_set(h), bv = var_set(b);
      std::vector<std::string> inter;
      std::set_intersection(hv.begin(), hv.end(), bv.begin(), bv.end(), std::back_inserter(inter));
      if (inter == shared) any = true;
    }
    if (!any) return false;
  }
  return true;
}

TEST(CheckLr, AgreesWithBipartitionOracle) {
  Gen g(43);
  std::size_t checked = 0;
  for (int round = 0; round < 300; ++round) {
    auto sig = small_signature(g, 3, 3);
    std::vector<TGD> src;
    for (std::size_t i = 0, n = 1 + g.below(3); i < n; ++i)
      src.push_back(random_rule(g, sig, "r" + std::to_string(i + 1), 3, 4, 0.3, 0.0));
    LoopEnumOptions o;
    o.max_len = 10;
    o.max_states = 50000;
    auto res = enumerate_loop_patterns(to_normal(src), o);
    for (const auto& lp : res.patterns) {
      EXPECT_EQ(check_lr(lp).has_value(), lr_oracle(lp)) << to_string(lp.path);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100u);
  // Example 2's loops, decided by the same oracle
  for (const auto& lp : enumerate_loop_patterns(fixture("example2.tgd")).patterns)
    EXPECT_EQ(check_lr(lp).has_value(), lr_oracle(lp));
}

TEST(CheckLr, ForcedSingletonSplit) {
  auto rules = share(normal("p(X,Y) -> p(Y,X)."));
  auto res = enumerate_loop_patterns(rules);
  ASSERT_FALSE(res.patterns.empty());
  for (const auto& lp : res.patterns) {
    auto w = check_lr(lp);
    ASSERT_TRUE(w);
    for (const auto& s : w->splits) EXPECT_TRUE(s.body_h.empty());
  }
}

TEST(CheckGlr, TypesAndOrder) {
  // single-atom bodies carrying every variable: multilinear shape
  auto ml = enumerate_loop_patterns(normal("p(X,Y) -> exists Z. p(Y,Z)."));
  for (const auto& lp : ml.patterns) {
    auto w = check_glr(lp);
    ASSERT_TRUE(w);
    if (check_lr(lp)) EXPECT_EQ(w->type, GlrType::I);
    else EXPECT_EQ(w->type, GlrType::III);
  }
  auto bad = enumerate_loop_patterns(fixture("prop4_not_glr.tgd"));
  bool violated = false;
  for (const auto& lp : bad.patterns)
    if (!check_glr(lp)) violated = true;
  EXPECT_TRUE(violated);
}

TEST(Classify, FixtureVerdicts) {
  auto rs = [](const char* f) { return parse_rules(read_file(std::string(TGD_FIXTURES) + "/" + f)); };
  EXPECT_EQ(classify_lr(rs("example3.tgd")).verdict, Verdict::Yes);
  EXPECT_EQ(classify_glr(rs("example3.tgd")).verdict, Verdict::Yes);
  EXPECT_EQ(classify_lr(rs("research.tgd")).verdict, Verdict::Yes);
  auto no = classify_glr(rs("prop4_not_glr.tgd"));
  EXPECT_EQ(no.verdict, Verdict::No);
  ASSERT_TRUE(no.violating);
  EXPECT_TRUE(is_loop_pattern(no.violating->path));
  LoopEnumOptions tiny;
  tiny.max_len = 2;
  auto inc = classify_lr(rs("example2.tgd"), tiny);
  EXPECT_TRUE(inc.caps_hit);
  EXPECT_NE(inc.verdict, Verdict::No);
}

TEST(Classify, ReportsAreDeterministic) {
  auto s = parse_rules(read_file(std::string(TGD_FIXTURES) + "/research.tgd"));
  EXPECT_EQ(classify_glr(s).to_json().dump(), classify_glr(s).to_json().dump());
  EXPECT_EQ(classify_lr(s).to_json().dump(), classify_lr(s).to_json().dump());
}

TEST(Classify, LrImpliesGlr) {
  Gen g(47);
  for (int round = 0; round < 150; ++round) {
    auto sig = small_signature(g, 3, 2);
    std::vector<TGD> src;
    for (std::size_t i = 0, n = 1 + g.below(3); i < n; ++i) src.push_back(random_rule(g, sig, "r" + std::to_string(i + 1)));
    LoopEnumOptions o;
    o.max_states = 50000;
    auto lr = classify_lr(as_source(src), o);
    auto glr = classify_glr(as_source(src), o);
    if (lr.verdict == Verdict::Yes) EXPECT_EQ(glr.verdict, Verdict::Yes) << render(as_source(src));
  }
}
