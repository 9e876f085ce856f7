#include "zfm/io.hpp"

#include <map>
#include <sstream>

namespace zfm {

namespace {

std::vector<char> dead_states(const Dfa& a) {
  std::vector<char> dead(a.num_states(), 0);
  const auto use = useful_states(a);
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    bool self = true;
    for (Symbol s = 0; s < a.num_symbols && self; ++s) {
      self = a.next(static_cast<State>(q), s) == static_cast<State>(q);
    }
    dead[q] = !use[q] && !a.accepting[q] && self;
  }
  return dead;
}

}  // namespace

std::string to_dot(const Dfa& a, const SymbolNamer& name) {
  const auto dead = dead_states(a);
  std::ostringstream out;
  out << "digraph automaton {\n  rankdir=LR;\n  init [shape=point];\n";
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    if (dead[q]) continue;
    out << "  q" << q << " [shape=" << (a.accepting[q] ? "doublecircle" : "circle") << "];\n";
  }
  out << "  init -> q" << a.initial << ";\n";
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    if (dead[q]) continue;
    std::map<State, std::string> labels;
    for (Symbol s = 0; s < a.num_symbols; ++s) {
      const State t = a.next(static_cast<State>(q), s);
      if (dead[t]) continue;
      auto& l = labels[t];
      if (!l.empty()) l += ",";
      l += name(s);
    }
    for (const auto& [t, l] : labels) {
      out << "  q" << q << " -> q" << t << " [label=\"" << l << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

nlohmann::json to_json(const Dfa& a, const SymbolNamer& name) {
  nlohmann::json j;
  auto alphabet = nlohmann::json::array();
  for (Symbol s = 0; s < a.num_symbols; ++s) alphabet.push_back(name(s));
  j["alphabet"] = alphabet;
  j["initial"] = a.initial;
  auto acc = nlohmann::json::array();
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    if (a.accepting[q]) acc.push_back(q);
  }
  j["states"] = a.num_states();
  j["accepting"] = acc;
  auto tr = nlohmann::json::array();
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    for (Symbol s = 0; s < a.num_symbols; ++s) tr.push_back({q, s, a.next(static_cast<State>(q), s)});
  }
  j["transitions"] = tr;
  return j;
}

Dfa dfa_from_json(const nlohmann::json& j) {
  Dfa d;
  d.num_symbols = j.at("alphabet").size();
  const auto states = j.at("states").get<std::size_t>();
  for (std::size_t q = 0; q < states; ++q) d.add_state(false);
  for (const auto& q : j.at("accepting")) d.accepting.at(q.get<std::size_t>()) = 1;
  d.initial = j.at("initial").get<State>();
  std::vector<char> set(states * d.num_symbols, 0);
  for (const auto& t : j.at("transitions")) {
    const auto q = t.at(0).get<std::size_t>();
    const auto s = t.at(1).get<std::size_t>();
    const auto to = t.at(2).get<State>();
    if (q >= states || s >= d.num_symbols || to < 0 || static_cast<std::size_t>(to) >= states) {
      throw std::invalid_argument("transition out of range");
    }
    d.delta[q * d.num_symbols + s] = to;
    set[q * d.num_symbols + s] = 1;
  }
  for (char c : set) {
    if (!c) throw std::invalid_argument("automaton is not complete");
  }
  if (d.initial < 0 || static_cast<std::size_t>(d.initial) >= states) {
    throw std::invalid_argument("initial state out of range");
  }
  return d;
}

}  // namespace zfm
