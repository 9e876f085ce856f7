// zfm: decision procedures for the expansion of a Z[F]-module by V_F.
//
// Exit codes: 0 success, 1 property false, 2 input error, 3 resource cap.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "zfm/bridge.hpp"
#include "zfm/fsets.hpp"
#include "zfm/io.hpp"

using namespace zfm;
using nlohmann::json;

namespace {

constexpr const char* kSyntax = R"(Formulas
  forall x,y. phi   exists x. phi   ~phi  !phi  phi & psi  phi | psi
  phi -> psi  phi <-> psi  true  false  (phi)
  t = s   t != s   t <=o s   t <o s   t ~ s
  IF(t)  IFa[a](t)  R(t,s)  eps(u,g)  Sigma(t)  sim(u,v)  prec(u,v)
Terms
  variables (letters, digits, _, trailing primes), 0, integers or <a,b>,
  digit words [d0,d1,...] (least significant first), t+s, t-s, -t,
  F(t), VF(t), Finv(t), f(g,u), f_literal(g,u), restrict(g,u1,u2),
  restrict_open(g,u1,u2)
F-sets
  expr := sum ('|' sum | 'U' sum)*      sum := atom ('+' atom)*
  atom := K(a=E [, k=N]) | Orb(E) | coset(E) | subgroup(E, ...) | (expr)
  E is an integer, [x, y] or <x, y>
Digit regexes
  literals are digits (integers, [x, y] or <x, y>); | * + ? ( ) () {}
)";

struct Options {
  std::string instance = "buchi2";
  std::size_t max_len = 6;
  std::string format = "text";
  std::optional<std::size_t> cap;
  unsigned seed = 1;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Presentation load_instance(const Options& o) {
  Presentation p = std::filesystem::exists(o.instance) ? Presentation::load(o.instance)
                                                       : Presentation::builtin(o.instance);
  if (!o.cap) return p;
  std::vector<Element> sigma0, order;
  for (std::size_t d = 0; d < p.num_digits(); ++d)
    if (p.in_sigma0(d)) sigma0.push_back(p.digit(d));
  for (std::size_t d : p.digits_in_order()) order.push_back(p.digit(d));
  return Presentation(p.name(), p.F(), p.digits(), sigma0, order, *o.cap);
}

std::string cache_dir() {
  const char* dir = std::getenv("ZFM_CACHE_DIR");
  return dir ? dir : "";
}

/// Presentation, structure, library and compiler for one run.
struct Session {
  Structure s;
  Library lib;
  Compiler c;
  explicit Session(const Options& o)
      : s(load_instance(o), cache_dir()), lib(Library::standard(s.presentation())), c(s, lib) {}
  const Presentation& p() const { return s.presentation(); }
};

Element element(const Presentation& p, const std::string& text) {
  const auto e = parse_element(text, p.rank());
  if (!e) throw InputError("bad element '" + text + "'");
  return *e;
}

std::size_t digit(const Presentation& p, const std::string& text) {
  const auto d = p.digit_index(element(p, text));
  if (!d || *d == 0) throw InputError("'" + text + "' is not a nonzero digit");
  return *d;
}

std::vector<std::string> free_vars(const Formula& f) {
  const auto fv = free_variables(f);
  return {fv.begin(), fv.end()};
}

std::vector<Element> members(const Structure& s, const Relation& r, std::size_t max_len) {
  std::vector<Element> out;
  for (const auto& w : enumerate(intersect(r.dfa, s.canonical_domain()), max_len))
    out.push_back(s.presentation().eval(w));
  return out;
}

json elements(const std::vector<Element>& v) {
  json out = json::array();
  for (const auto& e : v) out.push_back(to_string(e));
  return out;
}

std::string joined(const std::vector<Element>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + to_string(v[i]);
  return out;
}

void emit(const Options& o, const json& j, const std::string& text) {
  if (o.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

SymbolNamer track_namer(const Presentation& p, std::size_t arity, bool sharp) {
  const TrackAlphabet alph{p.num_digits(), arity, sharp ? Padding::Sharp : Padding::Zero};
  return [&p, alph](Symbol s) {
    const auto letters = alph.decode(s);
    std::string out = letters.size() > 1 ? "(" : "";
    for (std::size_t i = 0; i < letters.size(); ++i) {
      if (i) out += ",";
      out += letters[i] == p.num_digits() ? "#" : to_string(p.digit(letters[i]));
    }
    return letters.size() > 1 ? out + ")" : out;
  };
}

/// Base relations by name, with their track names.
std::vector<std::pair<std::string, std::pair<const Relation*, std::vector<std::string>>>> base_relations(
    const Structure& s) {
  std::vector<std::pair<std::string, std::pair<const Relation*, std::vector<std::string>>>> out{
      {"equality", {&s.equality(), {"x", "y"}}},
      {"addition", {&s.addition(), {"x", "y", "z"}}},
      {"F", {&s.f_graph(), {"x", "y"}}},
      {"Finv", {&s.f_inverse(), {"u", "v"}}},
      {"zero", {&s.zero(), {"x"}}},
      {"Sigma", {&s.sigma(), {"x"}}},
      {"IF", {&s.in_IF(), {"x"}}},
      {"preceq", {&s.preceq(), {"u", "v"}}},
      {"prec", {&s.prec(), {"u", "v"}}},
      {"sim", {&s.sim(), {"u", "v"}}},
      {"VF", {&s.valuation(), {"g", "u"}}},
      {"R", {&s.rightmost(), {"g", "u"}}},
      {"below", {&s.below_valuation(), {"u", "g"}}},
      {"eps", {&s.occurs(), {"u", "g"}}},
      {"f", {&s.truncation(), {"g", "u", "h"}}},
      {"f_literal", {&s.truncation_literal(), {"g", "u", "h"}}},
      {"restrict", {&s.restriction(true), {"g", "u1", "u2", "r"}}},
      {"restrict_open", {&s.restriction(false), {"g", "u1", "u2", "r"}}},
  };
  const Presentation& p = s.presentation();
  for (std::size_t d = 1; d < p.num_digits(); ++d)
    out.push_back({"IFa[" + to_string(p.digit(d)) + "]", {&s.in_IFa(d), {"x"}}});
  return out;
}

// ---------------------------------------------------------------- commands

int cmd_check(const Options& o, const std::string& file) {
  Options local = o;
  if (!file.empty()) local.instance = file;
  const Presentation p = load_instance(local);
  const SpanningReport rep = check_spanning(p);
  json j{{"instance", p.name()}, {"pass", rep.all_pass()}, {"warnings", rep.warnings}};
  j["conditions"] = json::array();
  for (const auto& c : rep.conditions) j["conditions"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  emit(o, j, rep.to_text());
  return rep.all_pass() ? 0 : 1;
}

int cmd_decide(const Options& o, const std::string& text) {
  Session ss(o);
  const Formula f = parse_formula(text, ss.p(), ss.lib);
  const Decision d = decide(ss.c, f);
  json witness = json::object();
  std::string out = d.truth ? "true\n" : "false\n";
  for (const auto& [name, value] : d.witness) {
    witness[name] = to_string(value);
    out += "  " + name + " = " + to_string(value) + "\n";
  }
  json j{{"formula", text}, {"truth", d.truth}};
  if (!d.witness.empty()) j["witness"] = witness;
  emit(o, j, out);
  return d.truth ? 0 : 1;
}

int cmd_solve(const Options& o, const std::string& text) {
  Session ss(o);
  const Formula f = parse_formula(text, ss.p(), ss.lib);
  const auto vars = free_vars(f);
  const auto rows = solve(ss.c, f, vars, o.max_len);
  json j{{"formula", text}, {"vars", vars}, {"solutions", json::array()}};
  std::string out;
  for (const auto& row : rows) {
    j["solutions"].push_back(elements(row));
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? ", " : "") + vars[i] + " = " + to_string(row[i]);
    out += "\n";
  }
  emit(o, j, out);
  return 0;
}

int cmd_count(const Options& o, const std::string& text) {
  Session ss(o);
  const Formula f = parse_formula(text, ss.p(), ss.lib);
  const auto vars = free_vars(f);
  json j{{"formula", text}, {"vars", vars}, {"counts", json::array()}};
  std::string out;
  for (std::size_t n = 0; n <= o.max_len; ++n) {
    const std::string c = count(ss.c, f, vars, n).str();
    j["counts"].push_back(c);
    out += std::to_string(n) + " " + c + "\n";
  }
  emit(o, j, out);
  return 0;
}

int cmd_fset(const Options& o, const std::string& action, const std::string& text, const std::string& member) {
  Session ss(o);
  const FSetExpr e = parse_fset(text, ss.p());
  const std::string canon = to_string(e, ss.p());
  if (action == "build") {
    const Relation r = fset_automaton(ss.c, e);
    const auto m = members(ss.s, r, o.max_len);
    const Formula f = fset_formula(ss.p(), ss.lib, e);
    emit(o,
         {{"fset", canon}, {"states", r.num_states()}, {"formula", to_string(f, ss.p())}, {"members", elements(m)}},
         canon + "\nstates " + std::to_string(r.num_states()) + "\nformula " + to_string(f, ss.p()) +
             "\nmembers " + joined(m) + "\n");
    return 0;
  }
  if (action == "member") {
    const Element g = element(ss.p(), member);
    const bool in = ss.s.holds(fset_automaton(ss.c, e), {g});
    emit(o, {{"fset", canon}, {"element", to_string(g)}, {"member", in}}, in ? "true\n" : "false\n");
    return in ? 0 : 1;
  }
  const Relation by_formula = ss.c.compile(fset_formula(ss.p(), ss.lib, e), {"g"});
  const Relation by_automaton = fset_automaton(ss.c, e);
  const auto a = members(ss.s, by_formula, o.max_len);
  const auto b = members(ss.s, by_automaton, o.max_len);
  const bool same = equivalent(by_formula, by_automaton);
  emit(o,
       {{"fset", canon}, {"equivalent", same}, {"formula_members", elements(a)}, {"enumerated_members", elements(b)}},
       canon + "\nformula    " + joined(a) + "\nenumerated " + joined(b) + "\n" + (same ? "agree\n" : "differ\n"));
  return same ? 0 : 1;
}

Reading reading_of(const Presentation& p, const std::string& name) {
  if (name.empty()) return default_reading(p);
  if (name == "uniform") return Reading::Uniform;
  if (name == "unique") return Reading::Unique;
  throw InputError("reading must be uniform or unique");
}

int cmd_compile_regex(const Options& o, const std::string& regex, const std::string& anchor,
                      const std::string& reading_name, bool expand) {
  Session ss(o);
  const Reading reading = reading_of(ss.p(), reading_name);
  const Library before = ss.lib;
  const Formula f = rho(ss.p(), ss.lib, {parse_digit_regex(regex, ss.p()), digit(ss.p(), anchor)}, reading);
  json defs = json::array();
  std::string out;
  if (expand) {
    out = "rho(g, x) := " + to_string(expand_macros(f, ss.lib), ss.p()) + "\n";
  } else {
    for (const auto& [name, d] : ss.lib.all()) {
      if (before.find(name)) continue;
      std::string params;
      for (std::size_t i = 0; i < d.params.size(); ++i) params += (i ? ", " : "") + d.params[i];
      const std::string line = name + "(" + params + ") := " + to_string(d.body, ss.p());
      defs.push_back(line);
      out += line + "\n";
    }
    out += "rho(g, x) := " + to_string(f, ss.p()) + "\n";
  }
  emit(o,
       {{"regex", regex},
        {"anchor", anchor},
        {"reading", reading == Reading::Uniform ? "uniform" : "unique"},
        {"definitions", defs},
        {"formula", expand ? to_string(expand_macros(f, ss.lib), ss.p()) : to_string(f, ss.p())}},
       out);
  return 0;
}

int cmd_roundtrip(const Options& o, const std::string& file) {
  Session ss(o);
  std::ifstream in(file);
  if (!in) throw InputError("cannot read " + file);
  const Dfa words = dfa_from_json(json::parse(in));
  if (words.num_symbols != ss.s.base()) throw InputError("automaton alphabet is not the digit set");
  const std::size_t track[] = {0};
  const Relation a = ss.s.saturate(words, 1, track);
  const Formula f = set_to_formula(ss.s, ss.lib, a);
  const Relation back = ss.c.compile(f, {"g"});
  const bool same = equivalent(a, back);
  const auto ma = members(ss.s, a, o.max_len), mb = members(ss.s, back, o.max_len);
  emit(o,
       {{"set", file},
        {"states", a.num_states()},
        {"formula_size", formula_size(f)},
        {"compiled_states", back.num_states()},
        {"pass", same && ma == mb}},
       "states " + std::to_string(a.num_states()) + "\nformula size " + std::to_string(formula_size(f)) +
           "\ncompiled states " + std::to_string(back.num_states()) + "\n" + (same && ma == mb ? "pass\n" : "fail\n"));
  return same && ma == mb ? 0 : 1;
}

int cmd_sparse(const Options& o, const std::string& regex, std::size_t random) {
  const Presentation p = load_instance(o);
  if (random == 0) {
    const Dfa d = minimize(determinize(compile_regex(parse_digit_regex(regex, p), p.num_digits())));
    const bool sparse = is_sparse(d);
    json counts = json::array();
    for (std::size_t n = 0; n <= o.max_len; ++n) counts.push_back(count_exact(d, n).str());
    emit(o, {{"regex", regex}, {"sparse", sparse}, {"counts", counts}}, sparse ? "sparse\n" : "not sparse\n");
    return 0;
  }
  std::mt19937 rng(o.seed);
  json rows = json::array();
  std::string out;
  for (std::size_t i = 0; i < random; ++i) {
    Dfa d;
    d.num_symbols = 2;
    const std::size_t n = 2 + rng() % 5;
    for (std::size_t q = 0; q < n; ++q) d.add_state(rng() % 2 == 0);
    for (auto& t : d.delta) t = static_cast<State>(rng() % n);
    const bool sparse = is_sparse(d);
    const std::string c = count_exact(d, 32).str();
    rows.push_back({{"states", n}, {"sparse", sparse}, {"count32", c}});
    out += std::to_string(i) + " " + (sparse ? "sparse" : "not sparse") + " " + c + "\n";
  }
  emit(o, rows, out);
  return 0;
}

int cmd_ip(const Options& o, std::size_t n, std::size_t search_len) {
  Session ss(o);
  const IpSearch r = ip_witness_search(ss.s, n, search_len);
  json j{{"n", n}, {"search_len", search_len}, {"candidates", r.candidates}, {"tuples_tried", r.tuples_tried},
         {"best_traces", r.best_traces}, {"found", r.witness.has_value()}};
  std::string out = "candidates " + std::to_string(r.candidates) + "\ntuples tried " +
                    std::to_string(r.tuples_tried) + "\nbest traces " + std::to_string(r.best_traces) + "\n";
  if (r.witness) {
    j["u"] = elements(r.witness->u);
    j["g"] = elements(r.witness->g);
    out += "u " + joined(r.witness->u) + "\n";
    for (std::size_t t = 0; t < r.witness->g.size(); ++t) out += "g[" + std::to_string(t) + "] " + to_string(r.witness->g[t]) + "\n";
  } else {
    out += "no witness\n";
  }
  emit(o, j, out);
  return r.witness ? 0 : 1;
}

int cmd_export(const Options& o, const std::string& target, bool sharp) {
  Session ss(o);
  Relation rel;
  std::vector<std::string> tracks;
  bool found = false;
  for (const auto& [name, entry] : base_relations(ss.s)) {
    if (name != target) continue;
    rel = *entry.first;
    tracks = entry.second;
    found = true;
  }
  if (!found) {
    const Formula f = parse_formula(target, ss.p(), ss.lib);
    tracks = free_vars(f);
    rel = ss.c.compile(f, tracks);
  }
  const Dfa d = sharp ? to_sharp(rel.dfa, rel.base, rel.arity) : rel.dfa;
  const SymbolNamer name = track_namer(ss.p(), rel.arity, sharp);
  if (o.format == "dot") {
    std::cout << to_dot(d, name);
  } else if (o.format == "json") {
    json j = to_json(d, name);
    j["tracks"] = tracks;
    j["padding"] = sharp ? "sharp" : "zero";
    std::cout << j.dump(2) << "\n";
  } else {
    std::string t;
    for (std::size_t i = 0; i < tracks.size(); ++i) t += (i ? ", " : "") + tracks[i];
    std::cout << target << " (" << t << ") states " << d.num_states() << " symbols " << d.num_symbols << "\n";
  }
  return 0;
}

int cmd_relations_build(const Options& o) {
  Session ss(o);
  json j = json::array();
  std::string out;
  for (const auto& [name, entry] : base_relations(ss.s)) {
    j.push_back({{"name", name}, {"arity", entry.first->arity}, {"states", entry.first->num_states()}});
    out += name + " arity " + std::to_string(entry.first->arity) + " states " +
           std::to_string(entry.first->num_states()) + "\n";
  }
  emit(o, j, out);
  return 0;
}

void error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedures for Z[F]-modules expanded by V_F"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("-i,--instance", o.instance, "Built-in instance name or presentation file")->capture_default_str();
  app.add_option("--max-len", o.max_len, "Word length bound for enumerations")->capture_default_str();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}))->capture_default_str();
  app.add_option("--cap", o.cap, "Carry saturation state cap");
  app.add_option("--seed", o.seed, "Seed for randomized commands")->capture_default_str();

  std::string text, file, action, member, regex, anchor, reading, target;
  std::size_t n = 3, search_len = 12, random = 0;
  bool expand = false, sharp = false;

  auto* check = app.add_subcommand("check", "Check (C1)-(C3) and the standing assumption");
  check->add_option("file", file, "Presentation file (defaults to --instance)");
  auto* decide_cmd = app.add_subcommand("decide", "Decide a sentence");
  decide_cmd->add_option("formula", text)->required();
  auto* solve_cmd = app.add_subcommand("solve", "List solutions up to --max-len");
  solve_cmd->add_option("formula", text)->required();
  auto* count_cmd = app.add_subcommand("count", "Count solutions by length");
  count_cmd->add_option("formula", text)->required();
  auto* fset = app.add_subcommand("fset", "F-set expressions");
  fset->require_subcommand(1);
  for (const char* a : {"build", "member", "compare-formula-vs-enum"}) {
    auto* sub = fset->add_subcommand(a);
    sub->add_option("expr", text)->required();
    if (std::string(a) == "member") sub->add_option("element", member)->required();
    sub->callback([&action, a] { action = a; });
  }
  auto* regex_cmd = app.add_subcommand("compile-regex", "Formula rho_L for a digit regex");
  regex_cmd->add_option("--regex", regex)->required();
  regex_cmd->add_option("--anchor", anchor)->required();
  regex_cmd->add_option("--reading", reading, "uniform or unique");
  regex_cmd->add_flag("--expand", expand, "Expand to base predicates");
  auto* roundtrip = app.add_subcommand("roundtrip", "Automaton to formula to automaton");
  roundtrip->add_option("--set", file, "Unary automaton in JSON")->required();
  auto* sparse = app.add_subcommand("sparse", "Sparseness of a digit regex");
  sparse->add_option("--regex", regex);
  sparse->add_option("--random", random, "Classify this many random DFAs instead");
  auto* ip = app.add_subcommand("ip", "Search for an independence witness");
  ip->add_option("-n", n)->capture_default_str();
  ip->add_option("--search-len", search_len)->capture_default_str();
  auto* exp = app.add_subcommand("export", "Export a base relation or a formula");
  exp->add_option("target", target)->required();
  exp->add_flag("--sharp", sharp, "Use the # padded alphabet");
  auto* relations = app.add_subcommand("relations", "Relation cache");
  relations->require_subcommand(1);
  auto* build = relations->add_subcommand("build", "Build and cache all base relations");
  auto* syntax = app.add_subcommand("syntax", "Print the input grammars");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    error("usage", e.what());
    return 2;
  }

  try {
    if (*check) return cmd_check(o, file);
    if (*decide_cmd) return cmd_decide(o, text);
    if (*solve_cmd) return cmd_solve(o, text);
    if (*count_cmd) return cmd_count(o, text);
    if (*fset) return cmd_fset(o, action, text, member);
    if (*regex_cmd) return cmd_compile_regex(o, regex, anchor, reading, expand);
    if (*roundtrip) return cmd_roundtrip(o, file);
    if (*sparse) {
      if (regex.empty() && random == 0) throw InputError("sparse needs --regex or --random");
      return cmd_sparse(o, regex, random);
    }
    if (*ip) return cmd_ip(o, n, search_len);
    if (*exp) return cmd_export(o, target, sharp);
    if (*build) return cmd_relations_build(o);
    if (*syntax) {
      std::cout << kSyntax;
      return 0;
    }
  } catch (const ResourceCap& e) {
    error("resource", e.what());
    return 3;
  } catch (const std::exception& e) {
    error("input", e.what());
    return 2;
  }
  return 2;
}
