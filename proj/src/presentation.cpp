#include "zfm/presentation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace zfm {

namespace {

using Key = std::vector<BigInt>;

Key key_of(const Element& e) { return Key(e.data(), e.data() + e.size()); }

BigInt max_norm(const Element& e) {
  BigInt m = 0;
  for (Eigen::Index i = 0; i < e.size(); ++i) m = std::max(m, BigInt(abs(e[i])));
  return m;
}

bool fits_small(const BigInt& v) {
  static const BigInt limit = BigInt(1) << 40;
  return abs(v) < limit;
}

}  // namespace

Element element_of(std::initializer_list<long long> coords) {
  Element e(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (long long c : coords) e[i++] = c;
  return e;
}

std::string to_string(const Element& e) {
  if (e.size() == 1) return e[0].str();
  std::string s = "<";
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += e[i].str();
  }
  return s + ">";
}

std::optional<Element> parse_element(std::string_view text, std::size_t rank) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto integer = [](std::string_view s) -> std::optional<BigInt> {
    if (s.empty()) return std::nullopt;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return std::nullopt;
    for (std::size_t j = i; j < s.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(s[j]))) return std::nullopt;
    }
    return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  text = trim(text);
  std::vector<BigInt> coords;
  if (!text.empty() && text.front() == '<') {
    if (text.back() != '>') return std::nullopt;
    text = text.substr(1, text.size() - 2);
    while (true) {
      const auto comma = text.find(',');
      const auto v = integer(trim(text.substr(0, comma)));
      if (!v) return std::nullopt;
      coords.push_back(*v);
      if (comma == std::string_view::npos) break;
      text = text.substr(comma + 1);
    }
  } else {
    const auto v = integer(text);
    if (!v) return std::nullopt;
    coords.push_back(*v);
  }
  if (coords.size() != rank) return std::nullopt;
  Element e(static_cast<Eigen::Index>(rank));
  for (std::size_t i = 0; i < rank; ++i) e[static_cast<Eigen::Index>(i)] = coords[i];
  return e;
}

// ------------------------------------------------------------ construction

Presentation::Presentation(std::string name, IntMatrix f, std::vector<Element> sigma,
                           std::vector<Element> sigma0, std::vector<Element> digit_order,
                           std::size_t carry_bound)
    : name_(std::move(name)), f_(std::move(f)), carry_bound_(carry_bound) {
  const auto r = f_.rows();
  if (r == 0) throw InvalidPresentation("rank must be positive");
  if (f_.cols() != r) throw InvalidPresentation("F must be square");
  for (const auto& s : sigma) {
    if (s.size() != r) throw InvalidPresentation("digit " + to_string(s) + " has wrong rank");
  }
  det_ = determinant(f_);
  if (det_ == 0) throw InvalidPresentation("F is singular");
  adj_ = adjugate(f_);
  if (sigma.empty()) throw InvalidPresentation("Sigma is empty");

  // Zero first, the rest in the given order; duplicates rejected.
  std::map<Key, std::size_t> seen;
  for (const auto& s : sigma) {
    if (!seen.emplace(key_of(s), 0).second) {
      throw InvalidPresentation("duplicate digit " + to_string(s));
    }
  }
  const Element z = zero();
  auto zero_it = std::find(sigma.begin(), sigma.end(), z);
  if (zero_it != sigma.end()) std::rotate(sigma.begin(), zero_it, zero_it + 1);
  sigma_ = std::move(sigma);

  const std::size_t n = sigma_.size();
  sigma0_.assign(n, 0);
  coset_rep_.assign(n, n);
  negated_.assign(n, n);
  for (const auto& s0 : sigma0) {
    const auto i = digit_index(s0);
    if (!i) throw InvalidPresentation("Sigma0 element " + to_string(s0) + " is not in Sigma");
    sigma0_[*i] = 1;
  }
  for (std::size_t d = 0; d < n; ++d) {
    if (const auto m = digit_index(Element(-sigma_[d]))) negated_[d] = *m;
    for (std::size_t s = 0; s < n; ++s) {
      if (sigma0_[s] && in_image(Element(sigma_[d] - sigma_[s]))) {
        coset_rep_[d] = s;
        break;
      }
    }
  }

  // Digit order.
  std::vector<std::size_t> order;
  if (!digit_order.empty()) {
    for (const auto& e : digit_order) {
      const auto i = digit_index(e);
      if (!i) throw InvalidPresentation("digit_order entry " + to_string(e) + " is not in Sigma");
      order.push_back(*i);
    }
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() != n || std::unique(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InvalidPresentation("digit_order must list every digit exactly once");
    }
  } else {
    order.resize(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const BigInt na = max_norm(sigma_[a]), nb = max_norm(sigma_[b]);
      if (na != nb) return na < nb;
      return key_of(sigma_[b]) < key_of(sigma_[a]);
    });
  }
  rank_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) rank_[order[i]] = i;

  // Machine-integer mirrors.
  bool small = fits_small(det_);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) small = small && fits_small(f_(i, j)) && fits_small(adj_(i, j));
  }
  for (const auto& s : sigma_) {
    for (Eigen::Index i = 0; i < r; ++i) small = small && fits_small(s[i]);
  }
  if (!small) throw InvalidPresentation("entries too large for carry automata");
  small_det_ = static_cast<std::int64_t>(det_);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) {
      small_f_.push_back(static_cast<std::int64_t>(f_(i, j)));
      small_adj_.push_back(static_cast<std::int64_t>(adj_(i, j)));
    }
  }
  for (const auto& s : sigma_) {
    SmallVec v(static_cast<std::size_t>(r));
    for (Eigen::Index i = 0; i < r; ++i) v[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(s[i]);
    small_sigma_.push_back(std::move(v));
  }
}

std::optional<std::size_t> Presentation::digit_index(const Element& e) const {
  for (std::size_t i = 0; i < sigma_.size(); ++i) {
    if (sigma_[i] == e) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> Presentation::digits_in_order() const {
  std::vector<std::size_t> out(sigma_.size());
  for (std::size_t d = 0; d < sigma_.size(); ++d) out[rank_[d]] = d;
  return out;
}

bool Presentation::in_image(const Element& x) const {
  const Element t = adj_ * x;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t[i] % det_ != 0) return false;
  }
  return true;
}

std::optional<Element> Presentation::apply_Finv(const Element& x) const {
  Element t = adj_ * x;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t[i] % det_ != 0) return std::nullopt;
    t[i] /= det_;
  }
  return t;
}

SmallVec Presentation::small_F(const SmallVec& x) const {
  const std::size_t r = rank();
  SmallVec out(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < r; ++j) acc += static_cast<__int128>(small_f_[i * r + j]) * x[j];
    if (acc > INT64_MAX / 4 || acc < INT64_MIN / 4) throw std::overflow_error("carry overflow");
    out[i] = static_cast<std::int64_t>(acc);
  }
  return out;
}

bool Presentation::small_Finv(const SmallVec& x, SmallVec& out) const {
  const std::size_t r = rank();
  out.assign(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < r; ++j) acc += static_cast<__int128>(small_adj_[i * r + j]) * x[j];
    if (acc % small_det_ != 0) return false;
    acc /= small_det_;
    if (acc > INT64_MAX / 4 || acc < INT64_MIN / 4) throw std::overflow_error("carry overflow");
    out[i] = static_cast<std::int64_t>(acc);
  }
  return true;
}

Element Presentation::eval(std::span<const Symbol> w) const {
  Element g = zero();
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i] >= sigma_.size()) throw std::out_of_range("digit index out of range");
    g = Element(f_ * g + sigma_[w[i]]);
  }
  return g;
}

Word Presentation::word_of(const std::vector<Element>& letters) const {
  Word w;
  for (const auto& e : letters) {
    const auto i = digit_index(e);
    if (!i) throw std::invalid_argument("letter " + to_string(e) + " is not a digit");
    w.push_back(static_cast<Symbol>(*i));
  }
  return w;
}

bool Presentation::expanding(double* min_modulus) const {
  const auto r = f_.rows();
  Eigen::MatrixXd m(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) m(i, j) = static_cast<double>(f_(i, j));
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  const double lo = solver.eigenvalues().cwiseAbs().minCoeff();
  if (min_modulus) *min_modulus = lo;
  return lo > 1.0 + 1e-9;
}

std::string word_to_string(const Presentation& p, std::span<const Symbol> w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += to_string(p.digit(w[i]));
  }
  return s + "]";
}

// ------------------------------------------------------------- text format

namespace {

Element element_from_json(const nlohmann::json& j, std::size_t rank) {
  Element e(static_cast<Eigen::Index>(rank));
  if (j.is_number_integer()) {
    if (rank != 1) throw InvalidPresentation("expected a vector of length " + std::to_string(rank));
    e[0] = j.get<long long>();
    return e;
  }
  if (!j.is_array() || j.size() != rank) {
    throw InvalidPresentation("expected a vector of length " + std::to_string(rank));
  }
  for (std::size_t i = 0; i < rank; ++i) e[static_cast<Eigen::Index>(i)] = j[i].get<long long>();
  return e;
}

std::vector<Element> elements_from_json(const nlohmann::json& j, std::size_t rank) {
  if (!j.is_array()) throw InvalidPresentation("expected a list of elements");
  std::vector<Element> out;
  for (const auto& x : j) out.push_back(element_from_json(x, rank));
  return out;
}

nlohmann::json element_to_json(const Element& e) {
  if (e.size() == 1) return static_cast<long long>(e[0]);
  auto j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < e.size(); ++i) j.push_back(static_cast<long long>(e[i]));
  return j;
}

}  // namespace

Presentation Presentation::parse(std::string_view text, std::string name) {
  std::map<std::string, nlohmann::json> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidPresentation("line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    try {
      kv[key] = nlohmann::json::parse(line.substr(eq + 1));
    } catch (const nlohmann::json::exception&) {
      throw InvalidPresentation("line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  auto need = [&](const std::string& k) -> const nlohmann::json& {
    const auto it = kv.find(k);
    if (it == kv.end()) throw InvalidPresentation("missing key " + k);
    return it->second;
  };
  try {
    if (kv.count("name")) name = kv["name"].get<std::string>();
    const auto rank = need("rank").get<std::size_t>();
    const auto& fj = need("F");
    std::vector<long long> flat;
    for (const auto& x : fj) {
      if (x.is_array()) {
        for (const auto& y : x) flat.push_back(y.get<long long>());
      } else {
        flat.push_back(x.get<long long>());
      }
    }
    if (flat.size() != rank * rank) throw InvalidPresentation("F must have rank*rank entries");
    IntMatrix f(rank, rank);
    for (std::size_t i = 0; i < rank * rank; ++i) {
      f(static_cast<Eigen::Index>(i / rank), static_cast<Eigen::Index>(i % rank)) = flat[i];
    }
    const auto sigma = elements_from_json(need("sigma"), rank);
    const auto sigma0 = elements_from_json(need("sigma0"), rank);
    std::vector<Element> order;
    if (kv.count("digit_order")) order = elements_from_json(kv["digit_order"], rank);
    const std::size_t cap = kv.count("carry_bound") ? kv["carry_bound"].get<std::size_t>() : 10000;
    return Presentation(name, f, sigma, sigma0, order, cap);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidPresentation(std::string("bad value: ") + e.what());
  }
}

Presentation Presentation::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidPresentation("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string stem = path.substr(path.find_last_of('/') + 1);
  stem = stem.substr(0, stem.find('.'));
  return parse(ss.str(), stem);
}

std::string Presentation::to_text() const {
  std::ostringstream out;
  out << "name = \"" << name_ << "\"\n";
  out << "rank = " << rank() << "\n";
  auto fj = nlohmann::json::array();
  for (Eigen::Index i = 0; i < f_.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < f_.cols(); ++j) row.push_back(static_cast<long long>(f_(i, j)));
    fj.push_back(row);
  }
  out << "F = " << fj.dump() << "\n";
  auto list = [&](auto pred) {
    auto j = nlohmann::json::array();
    for (std::size_t d : digits_in_order()) {
      if (pred(d)) j.push_back(element_to_json(sigma_[d]));
    }
    return j.dump();
  };
  out << "sigma = " << list([](std::size_t) { return true; }) << "\n";
  out << "sigma0 = " << list([&](std::size_t d) { return sigma0_[d] != 0; }) << "\n";
  out << "digit_order = " << list([](std::size_t) { return true; }) << "\n";
  out << "carry_bound = " << carry_bound_ << "\n";
  return out.str();
}

std::vector<std::string> Presentation::builtin_names() { return {"buchi2", "buchi3", "gauss"}; }

Presentation Presentation::builtin(std::string_view name) {
  if (name == "buchi2") {
    return parse(
        "rank = 1\nF = [2]\nsigma = [-1, 0, 1]\nsigma0 = [0, 1]\ndigit_order = [0, 1, -1]\n",
        "buchi2");
  }
  if (name == "buchi3") {
    return parse(
        "rank = 1\nF = [3]\nsigma = [-1, 0, 1]\nsigma0 = [0, 1, -1]\ndigit_order = [0, 1, -1]\n",
        "buchi3");
  }
  if (name == "gauss") {
    // Multiplication by 2i on Z[i]; no box digit set spans for 1+i.
    return parse(
        "rank = 2\nF = [[0, -2], [2, 0]]\n"
        "sigma = [[0,0],[1,0],[-1,0],[0,1],[0,-1],[1,1],[-1,-1],[1,-1],[-1,1]]\n"
        "sigma0 = [[0,0],[1,0],[0,1],[1,1]]\n",
        "gauss");
  }
  throw InvalidPresentation("unknown instance " + std::string(name));
}

// ---------------------------------------------------------------- spanning

bool SpanningReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

std::string SpanningReport::to_text() const {
  std::ostringstream out;
  for (const auto& c : conditions) {
    out << (c.pass ? "pass " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << "\n";
  }
  for (const auto& w : warnings) out << "warning: " << w << "\n";
  return out.str();
}

SpanningReport check_spanning(const Presentation& p) {
  SpanningReport rep;
  const std::size_t n = p.num_digits();
  const auto& s = p.digits();
  auto add = [&](std::string name, bool pass, std::string detail = "") {
    rep.conditions.push_back({std::move(name), pass, std::move(detail)});
  };

  // Structure.
  const bool has_zero = s[0] == p.zero();
  add("zero digit", has_zero, has_zero ? "" : "0 is not in Sigma");
  std::string asym;
  for (std::size_t d = 0; d < n && asym.empty(); ++d) {
    if (p.negated(d) == n) asym = to_string(Element(-s[d])) + " is not in Sigma";
  }
  add("symmetry", asym.empty(), asym);
  std::string standing;
  for (std::size_t d = 0; d < n && standing.empty(); ++d) {
    if (s[d] != p.zero() && p.in_image(s[d])) standing = to_string(s[d]) + " lies in F(Z^r)";
  }
  add("standing assumption", standing.empty(), standing);
  std::string reps;
  if (!p.in_sigma0(0) && has_zero) reps = "0 is not in Sigma0";
  for (std::size_t d = 0; d < n && reps.empty(); ++d) {
    if (p.coset_rep(d) == n) reps = "coset of " + to_string(s[d]) + " has no representative";
    if (p.in_sigma0(d) && p.coset_rep(d) != d) {
      reps = to_string(s[d]) + " and " + to_string(s[p.coset_rep(d)]) + " share a coset";
    }
  }
  add("coset representatives", reps.empty(), reps);

  // C2 over non-increasing rank triples (the sum is symmetric).
  std::map<Key, char> plus_f;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) plus_f[key_of(Element(s[a] + p.F() * s[b]))] = 1;
  }
  const auto order = p.digits_in_order();
  std::string c2;
  for (std::size_t i = 0; i < n && c2.empty(); ++i) {
    for (std::size_t j = 0; j <= i && c2.empty(); ++j) {
      for (std::size_t k = 0; k <= j && c2.empty(); ++k) {
        const Element sum = s[order[i]] + s[order[j]] + s[order[k]];
        if (!plus_f.count(key_of(sum))) {
          c2 = "(" + to_string(s[order[i]]) + "," + to_string(s[order[j]]) + "," +
               to_string(s[order[k]]) + "): " + to_string(sum) + " not in Sigma+F(Sigma)";
        }
      }
    }
  }
  add("C2", c2.empty(), c2);

  std::string c3;
  for (std::size_t i = 0; i < n && c3.empty(); ++i) {
    for (std::size_t j = 0; j <= i && c3.empty(); ++j) {
      const Element sum = s[order[i]] + s[order[j]];
      if (const auto b = p.apply_Finv(sum); b && !p.digit_index(*b)) {
        c3 = "(" + to_string(s[order[i]]) + "," + to_string(s[order[j]]) + "): " +
             to_string(sum) + " = F(" + to_string(*b) + ") with " + to_string(*b) +
             " not in Sigma";
      }
    }
  }
  add("C3", c3.empty(), c3);

  // C1: the Z[F]-module generated by Sigma must be Z^r.
  const auto r = static_cast<Eigen::Index>(p.rank());
  IntMatrix gens(static_cast<Eigen::Index>(n), r);
  for (std::size_t d = 0; d < n; ++d) gens.row(static_cast<Eigen::Index>(d)) = s[d].transpose();
  IntMatrix h = hermite_normal_form(gens);
  while (true) {
    IntMatrix both(2 * h.rows(), r);
    both << h, h * p.F().transpose();
    IntMatrix next = hermite_normal_form(both);
    if (next.rows() == h.rows() && next == h) break;
    h = next;
  }
  const BigInt index = lattice_index(h);
  add("C1", index == 1,
      index == 1 ? "" : index == 0 ? "Z[F]-module generated by Sigma has lower rank"
                                   : "Z[F]-module generated by Sigma has index " + index.str());

  double lo = 0;
  if (!p.expanding(&lo)) {
    rep.warnings.push_back("F has an eigenvalue of modulus " + std::to_string(lo) +
                           " <= 1; carry saturation may not terminate");
  }
  return rep;
}

// ---------------------------------------------------------------- encoding

namespace {

/// Layers of the search graph x -> F^{-1}(x - a) from g, cut at the depth
/// where 0 first appears. Returns that depth.
struct ShortestPaths {
  std::vector<std::map<Key, Element>> layers;
  std::size_t length = 0;
};

ShortestPaths explore(const Presentation& p, const Element& g, std::size_t cap) {
  ShortestPaths sp;
  std::map<Key, char> seen;
  sp.layers.push_back({{key_of(g), g}});
  seen[key_of(g)] = 1;
  const Key zero = key_of(p.zero());
  while (!sp.layers.back().count(zero)) {
    std::map<Key, Element> next;
    for (const auto& [k, x] : sp.layers.back()) {
      for (std::size_t d = 0; d < p.num_digits(); ++d) {
        if (auto y = p.apply_Finv(Element(x - p.digit(d)))) {
          const Key ky = key_of(*y);
          if (seen.emplace(ky, 1).second) next.emplace(ky, std::move(*y));
        }
      }
    }
    if (next.empty() || sp.layers.size() > cap) {
      throw std::runtime_error("no representation found for " + to_string(g));
    }
    sp.layers.push_back(std::move(next));
  }
  sp.length = sp.layers.size() - 1;
  return sp;
}

constexpr std::size_t kSearchCap = 4096;

}  // namespace

std::size_t min_length(const Presentation& p, const Element& g) {
  return explore(p, g, kSearchCap).length;
}

Word canonical_word(const Presentation& p, const Element& g) {
  if (g == p.zero()) return {};
  const auto sp = explore(p, g, kSearchCap);
  const std::size_t len = sp.length;
  // good[i]: nodes at depth i that reach 0 in exactly len - i steps.
  std::vector<std::map<Key, char>> good(len + 1);
  good[len][key_of(p.zero())] = 1;
  for (std::size_t i = len; i-- > 0;) {
    for (const auto& [k, x] : sp.layers[i]) {
      for (std::size_t d = 0; d < p.num_digits(); ++d) {
        const auto y = p.apply_Finv(Element(x - p.digit(d)));
        if (y && good[i + 1].count(key_of(*y))) {
          good[i][k] = 1;
          break;
        }
      }
    }
  }
  const auto order = p.digits_in_order();
  Word w;
  Element x = g;
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t d : order) {
      const auto y = p.apply_Finv(Element(x - p.digit(d)));
      if (y && good[i + 1].count(key_of(*y))) {
        w.push_back(static_cast<Symbol>(d));
        x = *y;
        break;
      }
    }
  }
  return w;
}

Word encode(const Presentation& p, const Element& g) {
  const auto r = static_cast<Eigen::Index>(p.rank());
  Eigen::MatrixXd f(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) f(i, j) = static_cast<double>(p.F()(i, j));
  }
  const Eigen::MatrixXd finv = f.inverse();
  Eigen::MatrixXd pw = Eigen::MatrixXd::Identity(r, r);
  Eigen::MatrixXd metric = Eigen::MatrixXd::Zero(r, r);
  for (int j = 0; j <= 20; ++j) {
    metric += pw.transpose() * pw;
    pw = finv * pw;
  }
  auto norm = [&](const Element& x) {
    Eigen::VectorXd v(r);
    for (Eigen::Index i = 0; i < r; ++i) v[i] = static_cast<double>(x[i]);
    return v.dot(metric * v);
  };

  Word w;
  Element x = g;
  std::map<Key, char> visited;
  const std::size_t cap = 64 + 4 * msb(BigInt(max_norm(g) + 1));
  const auto order = p.digits_in_order();
  while (x != p.zero()) {
    if (!visited.emplace(key_of(x), 1).second || w.size() > cap) return canonical_word(p, g);
    std::optional<Element> best;
    std::size_t best_digit = 0;
    double best_norm = 0;
    for (std::size_t d : order) {
      auto y = p.apply_Finv(Element(x - p.digit(d)));
      if (!y) continue;
      const double ny = norm(*y);
      if (!best || ny < best_norm) {
        best = std::move(y);
        best_digit = d;
        best_norm = ny;
      }
    }
    if (!best) return canonical_word(p, g);
    w.push_back(static_cast<Symbol>(best_digit));
    x = *best;
  }
  return w;
}

Word normalize_unicity(const Presentation& p, std::span<const Symbol> input) {
  if (p.eval(input) == p.zero()) throw std::invalid_argument("normalize_unicity: word denotes 0");
  Word w(input.begin(), input.end());
  std::size_t m = 0;
  while (w[m] == 0) ++m;
  const std::size_t a = w[m];
  const std::size_t b = p.coset_rep(a);
  if (b == a) return w;
  w[m] = static_cast<Symbol>(b);
  // a = b + F(v) with v in Sigma by (C3); propagate v upwards using (C2).
  const auto v = p.apply_Finv(Element(p.digit(a) - p.digit(b)));
  Element carry = *v;
  const auto order = p.digits_in_order();
  for (std::size_t i = m + 1; carry != p.zero(); ++i) {
    if (i == w.size()) w.push_back(0);
    const Element s = p.digit(w[i]) + carry;
    if (const auto d = p.digit_index(s)) {
      w[i] = static_cast<Symbol>(*d);
      carry = p.zero();
      continue;
    }
    bool found = false;
    for (std::size_t d : order) {
      const auto c = p.apply_Finv(Element(s - p.digit(d)));
      if (c && p.digit_index(*c)) {
        w[i] = static_cast<Symbol>(d);
        carry = *c;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("C2 violated while normalizing");
  }
  while (!w.empty() && w.back() == 0) w.pop_back();
  return w;
}

}  // namespace zfm
