// tgdtool: parse, normalise, chase, ask, tree, loops, classify.
//
// Exit codes: 0 success / yes, 1 no, 2 overflow, 3 inconclusive,
// 64 usage, 65 parse error, 66 unreadable input.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tgd/errors.hpp"
#include "tgd/report.hpp"

using nlohmann::json;

namespace {

constexpr int kUsage = 64;
constexpr int kParse = 65;
constexpr int kNoInput = 66;

struct Config {
  std::string rules_path;
  std::string db_path;
  std::string query;
  std::size_t depth = 1;
  bool step_indexed = false;
  std::string classes = "linear,ml,acyclic,agrd,dr,lr,glr";
  std::size_t max_atoms = 1'000'000;
  std::size_t max_path_len = 64;
  std::size_t max_trees = 20;
  std::string root;
  std::string emit;
  std::string out;
  bool serial = false;
};

struct Inputs {
  tgd::SourceRuleSet rules;
  std::optional<tgd::Database> db;
  std::optional<tgd::Query> query;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  try {
    return tgd::read_file(path);
  } catch (const tgd::Error& e) {
    throw IoError(e.what());
  }
}

Inputs load(const Config& c) {
  Inputs in;
  in.rules = tgd::parse_rules(slurp(c.rules_path));
  if (!c.db_path.empty()) {
    in.db = tgd::parse_facts(slurp(c.db_path));
    tgd::check_signature(in.rules, *in.db);
  }
  if (!c.query.empty()) in.query = tgd::parse_query(c.query[0] == '@' ? slurp(c.query.substr(1)) : c.query);
  return in;
}

void write(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw IoError("cannot write " + c.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

tgd::LoopEnumOptions caps(const Config& c) {
  tgd::LoopEnumOptions o;
  o.max_len = c.max_path_len;
  o.parallel = !c.serial;
  return o;
}

int cmd_parse(const Config& c) {
  auto in = load(c);
  if (c.emit == "json") {
    json rules = json::array();
    for (const auto& r : in.rules.rules) rules.push_back({{"id", r.id}, {"rule", r.str()}});
    json j = {{"schema", tgd::kSchema}, {"rules", rules}, {"signature", in.rules.signature}};
    if (in.db) j["facts"] = in.db->facts.size();
    if (in.query) j["query"] = tgd::render(*in.query);
    write(c, dump(j));
    return 0;
  }
  std::string text = tgd::render(in.rules);
  if (in.db) text += tgd::render(*in.db);
  if (in.query) text += tgd::render(*in.query) + "\n";
  write(c, text);
  return 0;
}

int cmd_normalize(const Config& c) {
  auto in = load(c);
  auto n = tgd::normalize(in.rules, in.query);
  if (c.emit == "json") {
    write(c, dump(tgd::to_json(n)));
    return 0;
  }
  std::string text = tgd::render(n.rules);
  if (n.query) text += tgd::render(*n.query) + "\n";
  write(c, text);
  return 0;
}

tgd::ChaseOptions chase_options(const Config& c) {
  tgd::ChaseOptions o;
  o.bound = c.depth;
  o.step_indexed = c.step_indexed;
  o.max_atoms = c.max_atoms;
  o.parallel = !c.serial;
  return o;
}

int cmd_chase(const Config& c) {
  auto in = load(c);
  if (!in.db) throw CLI::ValidationError("chase", "--db is required");
  auto res = tgd::run_chase(*in.db, tgd::normalize_rules(in.rules), chase_options(c));
  if (res.overflow) std::cerr << "overflow: more than " << c.max_atoms << " atoms; output is partial\n";
  std::string facts;
  for (const auto& a : res.state.atoms()) facts += a.str() + ".\n";
  json side = tgd::to_json(res);
  if (c.emit == "json") {
    write(c, dump(side));
  } else {
    write(c, facts);
    if (!c.out.empty()) {
      Config sc = c;
      sc.out = c.out + ".json";
      write(sc, dump(side));
    }
  }
  return res.overflow ? 2 : 0;
}

int cmd_ask(const Config& c) {
  auto in = load(c);
  if (!in.db || !in.query) throw CLI::ValidationError("ask", "--db and --query are required");
  auto v = tgd::ask(*in.db, in.rules, *in.query, chase_options(c));
  write(c, dump(tgd::to_json(v)));
  switch (v.answer) {
    case tgd::Answer::Yes: return 0;
    case tgd::Answer::Overflow: return 2;
    default: return 1;
  }
}

int cmd_tree(const Config& c) {
  auto in = load(c);
  auto rules = tgd::share(tgd::normalize_rules(in.rules));
  tgd::TreeEnumOptions o;
  o.depth_bound = c.depth;
  if (!c.root.empty()) o.root_predicate = c.root;
  std::vector<tgd::DerivationTree> trees;
  tgd::enumerate_trees(rules, o, [&](const tgd::DerivationTree& t) {
    if (!in.db) {
      trees.push_back(t);
    } else {
      tgd::instantiate_tree(t, *in.db, [&](const tgd::DerivationTree& g) {
        trees.push_back(g);
        return trees.size() < c.max_trees;
      });
    }
    return trees.size() < c.max_trees;
  });
  std::string text;
  if (c.emit == "json") {
    json arr = json::array();
    for (const auto& t : trees) arr.push_back(tgd::to_json(t));
    text = dump({{"schema", tgd::kSchema}, {"trees", arr}});
  } else if (c.emit == "text") {
    for (const auto& t : trees) {
      for (const auto& p : t.paths()) text += tgd::to_string(p) + "\n";
      text += "\n";
    }
  } else {
    for (const auto& t : trees) text += tgd::export_dot(t);
  }
  write(c, text);
  return 0;
}

int cmd_loops(const Config& c) {
  auto in = load(c);
  auto res = tgd::enumerate_loop_patterns(tgd::normalize_rules(in.rules), caps(c));
  if (c.emit == "json") {
    json arr = json::array();
    for (const auto& lp : res.patterns) arr.push_back(tgd::to_json(lp));
    write(c, dump({{"schema", tgd::kSchema},
                   {"loops", arr},
                   {"caps", {{"max_path_len", c.max_path_len}, {"hit", res.capped}}}}));
  } else {
    std::string text;
    for (const auto& lp : res.patterns) text += tgd::to_string(lp.path) + "\n";
    if (res.capped) text += "# enumeration capped (" + res.cap_reason + ")\n";
    write(c, text);
  }
  return res.capped ? 3 : 0;
}

int cmd_classify(const Config& c) {
  auto in = load(c);
  std::vector<std::string> classes;
  std::stringstream ss(c.classes);
  for (std::string cls; std::getline(ss, cls, ',');) {
    if (std::find(tgd::kAllClasses.begin(), tgd::kAllClasses.end(), cls) == tgd::kAllClasses.end())
      throw CLI::ValidationError("--classes", "unknown class " + cls);
    classes.push_back(cls);
  }
  auto audit = tgd::containment_audit(in.rules, caps(c), classes);
  if (c.emit == "text") {
    std::string text;
    for (const auto& r : audit.reports) text += r.cls + ": " + tgd::to_string(r.verdict) + "\n";
    for (const auto& f : audit.flags) text += "flag: " + f + "\n";
    write(c, text);
  } else {
    write(c, dump(tgd::to_json(audit)));
  }
  bool no = false, unsure = false;
  for (const auto& r : audit.reports) {
    no |= r.verdict == tgd::Verdict::No;
    unsure |= r.verdict == tgd::Verdict::Inconclusive;
  }
  return no ? 1 : unsure ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"existential rules: chase, derivation trees, loop patterns, class membership"};
  app.require_subcommand(1, 1);
  Config c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("rules", c.rules_path, "rule file")->required();
    sub->add_option("--out", c.out, "write output to FILE");
    sub->add_flag("--serial", c.serial, "disable OpenMP kernels");
  };

  auto* parse = app.add_subcommand("parse", "check and pretty-print inputs");
  common(parse);
  parse->add_option("--db", c.db_path, "fact file");
  parse->add_option("--query", c.query, "query text or @file");
  parse->add_option("--emit", c.emit, "text|json")->check(CLI::IsMember({"text", "json"}));

  auto* norm = app.add_subcommand("normalize", "single-head normal form and atomic query");
  common(norm);
  norm->add_option("--query", c.query, "query text or @file");
  norm->add_option("--emit", c.emit, "text|json")->check(CLI::IsMember({"text", "json"}));

  auto* chase = app.add_subcommand("chase", "bounded oblivious chase");
  common(chase);
  chase->add_option("--db", c.db_path, "fact file")->required();
  chase->add_option("--depth", c.depth, "level bound (steps with --step-indexed)");
  chase->add_flag("--step-indexed", c.step_indexed, "bound counts chase steps");
  chase->add_option("--max-atoms", c.max_atoms, "resource cap");
  chase->add_option("--emit", c.emit, "text|json")->check(CLI::IsMember({"text", "json"}));

  auto* ask = app.add_subcommand("ask", "BCQ entailment up to a bound");
  common(ask);
  ask->add_option("--db", c.db_path, "fact file")->required();
  ask->add_option("--query", c.query, "query text or @file")->required();
  ask->add_option("--depth", c.depth, "level bound");
  ask->add_flag("--step-indexed", c.step_indexed, "bound counts chase steps");
  ask->add_option("--max-atoms", c.max_atoms, "resource cap");

  auto* tree = app.add_subcommand("tree", "enumerate derivation trees");
  common(tree);
  tree->add_option("--depth", c.depth, "depth bound");
  tree->add_option("--root", c.root, "root predicate");
  tree->add_option("--db", c.db_path, "instantiate on this fact file");
  tree->add_option("--max-trees", c.max_trees, "stop after this many trees");
  tree->add_option("--emit", c.emit, "dot|json|text")->check(CLI::IsMember({"dot", "json", "text"}));

  auto* loops = app.add_subcommand("loops", "loop patterns up to comparability");
  common(loops);
  loops->add_option("--max-path-len", c.max_path_len, "path length cap");
  loops->add_option("--emit", c.emit, "text|json")->check(CLI::IsMember({"text", "json"}));

  auto* classify = app.add_subcommand("classify", "class membership report");
  common(classify);
  classify->add_option("--classes", c.classes, "comma list of linear,ml,acyclic,agrd,dr,lr,glr");
  classify->add_option("--max-path-len", c.max_path_len, "path length cap");
  classify->add_option("--emit", c.emit, "json|text")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
    if (c.max_path_len == 0 || c.max_atoms == 0 || c.max_trees == 0)
      throw CLI::ValidationError("caps", "caps must be positive");
    if (parse->parsed()) return cmd_parse(c);
    if (norm->parsed()) return cmd_normalize(c);
    if (chase->parsed()) return cmd_chase(c);
    if (ask->parsed()) return cmd_ask(c);
    if (tree->parsed()) {
      if (c.emit.empty()) c.emit = "dot";
      return cmd_tree(c);
    }
    if (loops->parsed()) return cmd_loops(c);
    if (classify->parsed()) return cmd_classify(c);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kUsage;
  } catch (const tgd::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kNoInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}
