#pragma once

#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "zfm/automata.hpp"

namespace zfm {

using SymbolNamer = std::function<std::string(Symbol)>;

/// Graphviz rendering; parallel edges are merged into one comma-separated
/// label and edges into a non-accepting sink are omitted.
std::string to_dot(const Dfa& a, const SymbolNamer& name);

/// {"alphabet": [...names], "initial", "accepting": [...], "transitions":
/// [[from, symbol, to], ...]}.
nlohmann::json to_json(const Dfa& a, const SymbolNamer& name);
/// Inverse of to_json; symbol names are ignored, indices are positional.
Dfa dfa_from_json(const nlohmann::json& j);

}  // namespace zfm
