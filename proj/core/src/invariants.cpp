#include "confset/invariants.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "text_cursor.hpp"

namespace confset {

// ---- laws

namespace {

LawWord parse_word(std::string_view text, std::size_t base) {
  detail::Cursor c(text, base);
  LawWord w;
  if (c.at_end()) c.fail("empty side of a law (write 1 for the identity)");
  if (c.accept_keyword("1") || c.accept_keyword("e")) {
    if (!c.at_end()) c.fail("the identity word stands alone");
    return w;
  }
  while (!c.at_end()) {
    c.accept('*');
    if (!c.accept('v')) c.fail("expected a variable v1, v2, ...");
    const auto idx = c.integer();
    if (idx < 1) c.fail("variables are numbered from 1");
    std::int64_t e = 1;
    if (c.accept('^')) {
      const bool paren = c.accept('(');
      e = c.integer();
      if (paren) c.expect(')');
    }
    if (e == 0) continue;
    if (!w.empty() && w.back().first == static_cast<unsigned>(idx)) {
      w.back().second += e;
      if (w.back().second == 0) w.pop_back();
    } else {
      w.emplace_back(static_cast<unsigned>(idx), e);
    }
  }
  return w;
}

std::string word_text(const LawWord& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += "v" + std::to_string(w[i].first);
    if (w[i].second != 1) s += "^" + std::to_string(w[i].second);
  }
  return s;
}

std::map<unsigned, std::int64_t> exponent_sums(const LawWord& w) {
  std::map<unsigned, std::int64_t> m;
  for (auto [v, e] : w) m[v] += e;
  for (auto it = m.begin(); it != m.end();) it = it->second == 0 ? m.erase(it) : std::next(it);
  return m;
}

// exponent of the finite part of Z^n, F or Z^n x F; nullopt for other shapes
std::optional<std::uint64_t> finite_exponent(const GroupDescriptor& g) {
  auto table_exponent = [](const GroupDescriptor& f) {
    std::uint64_t e = 1;
    const GroupDescriptor fd = f;
    for (std::uint32_t i = 1; i <= f.table().order(); ++i) e = std::lcm(e, *fd.order(FinitePoint{i}));
    return e;
  };
  switch (g.kind()) {
    case GroupKind::FreeAbelian:
      return 1;
    case GroupKind::Finite:
      return table_exponent(g);
    case GroupKind::Product: {
      std::uint64_t e = 1;
      for (const auto& f : g.factors()) {
        if (f.kind() == GroupKind::FreeAbelian) continue;
        if (f.kind() != GroupKind::Finite) return std::nullopt;
        e = std::lcm(e, table_exponent(f));
      }
      return e;
    }
    default:
      return std::nullopt;
  }
}

std::optional<std::string> law_proof(const GroupDescriptor& g, const LawSpec& law) {
  if (g.is_abelian() && exponent_sums(law.lhs) == exponent_sums(law.rhs))
    return "the group is abelian and both sides have the same exponent sums";
  const auto e = finite_exponent(g);
  if (!e) return std::nullopt;
  // a b^k = b^k a with exp(F) | k: b^k has trivial finite part, so it is central
  auto central_power = [&](const LawWord& l, const LawWord& r) -> std::optional<std::string> {
    if (l.size() != 2 || r.size() != 2) return std::nullopt;
    if (l[0] != r[1] || l[1] != r[0] || l[0].first == l[1].first) return std::nullopt;
    for (const auto& f : {l[0], l[1]}) {
      const std::uint64_t k = static_cast<std::uint64_t>(f.second < 0 ? -f.second : f.second);
      if (k % *e == 0)
        return "v" + std::to_string(f.first) + "^" + std::to_string(f.second) +
               " has trivial finite part (the finite exponent " + std::to_string(*e) + " divides " +
               std::to_string(k) + "), hence is central";
    }
    return std::nullopt;
  };
  return central_power(law.lhs, law.rhs);
}

}  // namespace

LawSpec LawSpec::parse(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ParseError("a law needs '='", text.size());
  if (text.find('=', eq + 1) != std::string_view::npos) throw ParseError("a law has exactly one '='", text.find('=', eq + 1));
  LawSpec law;
  law.lhs = parse_word(text.substr(0, eq), 0);
  law.rhs = parse_word(text.substr(eq + 1), eq + 1);
  for (const auto* w : {&law.lhs, &law.rhs})
    for (auto [v, e] : *w) law.variables = std::max(law.variables, v);
  return law;
}

bool LawSpec::semigroup_law() const {
  for (const auto* w : {&lhs, &rhs})
    for (auto [v, e] : *w)
      if (e < 0) return false;
  return true;
}

std::string LawSpec::to_string() const { return word_text(lhs) + " = " + word_text(rhs); }

GroupElement evaluate_word(const GroupDescriptor& g, const LawWord& w, const std::vector<GroupElement>& values) {
  GroupElement r = g.identity();
  for (auto [v, e] : w) {
    if (v < 1 || v > values.size()) throw DomainError("law variable v" + std::to_string(v) + " has no value");
    r = g.multiply(r, g.power(values[v - 1], e));
  }
  return r;
}

std::string LawResult::to_string(const GroupDescriptor& g) const {
  std::ostringstream os;
  if (counterexample) {
    os << "counterexample";
    for (std::size_t i = 0; i < counterexample->size(); ++i)
      os << " v" << (i + 1) << '=' << g.format((*counterexample)[i]);
  } else {
    os << "holds-on-ball";
  }
  os << " (radius " << radius << ", " << tuples_checked << " tuples)\n";
  if (structural_proof) os << "holds globally: " << *structural_proof << '\n';
  return os.str();
}

LawResult check_law(const GeneratingSequence& gens, const LawSpec& law, unsigned radius, const LawCheckOptions& options) {
  const GroupDescriptor& g = gens.group();
  const auto b = ball(gens, radius);
  const unsigned t = law.variables;
  LawResult r;
  r.radius = radius;

  long double total = 1;
  for (unsigned i = 0; i < t; ++i) total *= static_cast<long double>(b.size());
  if (total > 2e8L) throw DomainError("law check over " + std::to_string(b.size()) + "^" + std::to_string(t) + " tuples is too large");

  // index tuples enumerated lexicographically within one first-variable value
  auto scan = [&](std::size_t first, std::vector<std::size_t>& found, std::uint64_t& checked) -> bool {
    std::vector<std::size_t> idx(t, 0);
    if (t) idx[0] = first;
    std::vector<GroupElement> values(t);
    while (true) {
      for (unsigned i = 0; i < t; ++i) values[i] = b[idx[i]];
      ++checked;
      if (!(evaluate_word(g, law.lhs, values) == evaluate_word(g, law.rhs, values))) {
        found = idx;
        return true;
      }
      bool done = true;
      for (unsigned pos = t; pos-- > 1;) {
        if (++idx[pos] < b.size()) {
          done = false;
          break;
        }
        idx[pos] = 0;
      }
      if (done) return false;
    }
  };

  std::optional<std::vector<std::size_t>> hit;
  if (t == 0) {
    r.tuples_checked = 1;
    if (!(evaluate_word(g, law.lhs, {}) == evaluate_word(g, law.rhs, {}))) hit = std::vector<std::size_t>{};
  } else {
    const std::size_t firsts = b.size();
    const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(firsts)));
    std::vector<std::optional<std::vector<std::size_t>>> hits(firsts);
    std::vector<std::uint64_t> counts(firsts, 0);
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](unsigned w) {
      try {
        for (std::size_t f = w; f < firsts; f += workers) {
          std::vector<std::size_t> found;
          if (scan(f, found, counts[f])) hits[f] = found;
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };
    if (workers == 1) {
      // sequential path stops at the first counterexample
      for (std::size_t f = 0; f < firsts; ++f) {
        std::vector<std::size_t> found;
        if (scan(f, found, counts[f])) {
          hits[f] = found;
          break;
        }
      }
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    for (std::size_t f = 0; f < firsts; ++f) {
      r.tuples_checked += counts[f];
      if (hits[f]) {
        hit = hits[f];
        break;
      }
    }
  }

  if (hit) {
    r.holds_on_ball = false;
    std::vector<GroupElement> ce;
    for (auto i : *hit) ce.push_back(b[i]);
    r.counterexample = std::move(ce);
  } else {
    r.structural_proof = law_proof(g, law);
  }
  return r;
}

// ---- nilpotency

std::string NilpotencyResult::to_string(const GroupDescriptor& g) const {
  std::ostringstream os;
  if (consistent) {
    os << "consistent-with-class-<=" << c << " (radius " << radius << ")\n";
  } else {
    os << "violation: [";
    for (std::size_t i = 0; i < chain.size(); ++i) os << (i ? ", " : "") << g.format(chain[i]);
    os << "] = " << (value ? g.format(*value) : "?") << " (radius " << radius << ")\n";
  }
  os << "levels";
  for (auto s : level_sizes) os << ' ' << s;
  os << '\n';
  return os.str();
}

NilpotencyResult nilpotency_witness(const GeneratingSequence& gens, unsigned c, unsigned radius) {
  if (c < 1) throw DomainError("nilpotency class bound must be >= 1");
  const GroupDescriptor& g = gens.group();
  const auto b = ball(gens, radius);
  std::vector<GroupElement> binv;
  binv.reserve(b.size());
  for (const auto& x : b) binv.push_back(g.invert(x));

  struct Node {
    GroupElement value;
    std::size_t parent;  // index into the previous level
    std::size_t last;    // ball index of the last entry
  };
  NilpotencyResult r;
  r.c = c;
  r.radius = radius;

  std::vector<std::vector<Node>> levels(1);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!g.is_identity(b[i])) levels[0].push_back({b[i], 0, i});
  r.level_sizes.push_back(levels[0].size());

  auto chain_of = [&](std::size_t level, std::size_t idx) {
    std::vector<GroupElement> out;
    for (std::size_t l = level + 1; l-- > 0;) {
      const Node& n = levels[l][idx];
      out.push_back(b[n.last]);
      idx = n.parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
  };

  for (unsigned k = 1; k <= c; ++k) {
    std::vector<Node> next;
    std::set<GroupElement> seen;
    const auto& cur = levels.back();
    for (std::size_t u = 0; u < cur.size(); ++u) {
      const GroupElement uinv = g.invert(cur[u].value);
      for (std::size_t i = 0; i < b.size(); ++i) {
        GroupElement v = g.multiply(g.multiply(uinv, binv[i]), g.multiply(cur[u].value, b[i]));
        if (g.is_identity(v) || !seen.insert(v).second) continue;
        if (k == c) {
          levels.push_back({});
          r.level_sizes.push_back(1);
          r.consistent = false;
          r.chain = chain_of(k - 1, u);
          r.chain.push_back(b[i]);
          r.value = std::move(v);
          return r;
        }
        next.push_back({std::move(v), u, i});
      }
    }
    r.level_sizes.push_back(next.size());
    if (next.empty()) break;
    levels.push_back(std::move(next));
  }
  return r;
}

// ---- center, torsion, Hirsch length

bool center_membership(const GroupDescriptor& g, const GroupElement& a) {
  g.require(a);
  for (const auto& s : g.standard_generators())
    if (!(g.multiply(a, s) == g.multiply(s, a))) return false;
  return true;
}

std::optional<std::uint64_t> torsion_count(const GroupDescriptor& g) {
  switch (g.kind()) {
    case GroupKind::FreeAbelian:
    case GroupKind::Unitriangular:
      return 1;
    case GroupKind::Finite:
      return g.table().order();
    case GroupKind::DihedralInfinite:
      return std::nullopt;
    case GroupKind::Product: {
      std::uint64_t n = 1;
      for (const auto& f : g.factors()) {
        const auto k = torsion_count(f);
        if (!k) return std::nullopt;
        n *= *k;
      }
      return n;
    }
  }
  return std::nullopt;
}

namespace {

std::string torsion_structure(const GroupDescriptor& g) {
  switch (g.kind()) {
    case GroupKind::FreeAbelian:
      return "{0}";
    case GroupKind::Unitriangular:
      return "{1}";
    case GroupKind::Finite:
      return "the whole finite group";
    case GroupKind::DihedralInfinite:
      return "all reflections (odd-length words) and the identity";
    case GroupKind::Product: {
      std::string s;
      for (const auto& f : g.factors()) s += (s.empty() ? "" : " x ") + torsion_structure(f);
      return s;
    }
  }
  return "";
}

}  // namespace

std::string TorsionReport::to_string(const GroupDescriptor& g) const {
  std::ostringstream os;
  os << "torsion " << structure << '\n';
  os << "listed " << elements.size() << (complete ? " complete" : " ball-limited") << '\n';
  for (const auto& e : elements) os << g.format(e) << '\n';
  return os.str();
}

TorsionReport torsion_elements(const GroupDescriptor& g, unsigned radius) {
  TorsionReport r;
  for (const auto& a : ball(GeneratingSequence::standard(g), radius))
    if (g.order(a)) r.elements.push_back(a);
  r.structure = torsion_structure(g);
  const auto count = torsion_count(g);
  r.complete = count && *count == r.elements.size();
  return r;
}

std::size_t hirsch_length(const GroupDescriptor& g) { return g.hirsch_length(); }

// ---- derived subgroup and isolator

namespace {

std::vector<std::uint32_t> finite_derived_subgroup(const FiniteTable& t) {
  std::vector<std::uint32_t> comms;
  for (std::uint32_t a = 1; a <= t.order(); ++a)
    for (std::uint32_t b = 1; b <= t.order(); ++b)
      comms.push_back(t.product(t.inverse(t.product(b, a)), t.product(a, b)));
  std::sort(comms.begin(), comms.end());
  comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
  return t.closure(comms);
}

bool superdiagonal_zero(const UnitriangularMatrix& m) {
  for (std::size_t i = 1; i < m.n; ++i)
    if (m.entry(i, i + 1) != 0) return false;
  return true;
}

bool derived_component(const GroupDescriptor& g, const GroupElement& a) {
  switch (g.kind()) {
    case GroupKind::FreeAbelian:
      return g.is_identity(a);
    case GroupKind::Finite: {
      const auto d = finite_derived_subgroup(g.table());
      return std::binary_search(d.begin(), d.end(), a.as<FinitePoint>().index);
    }
    case GroupKind::DihedralInfinite: {
      // G' = <[x,y]> = <(xy)^2>: translations by even offsets
      const auto& d = a.as<DihedralIsometry>();
      return !d.reflection && d.offset % 2 == 0;
    }
    case GroupKind::Unitriangular: {
      const auto& m = a.as<UnitriangularMatrix>();
      if (!superdiagonal_zero(m)) return false;
      if (m.n == 3) {
        // a = [g12, g23]^a13
        const GroupElement c = g.commutator(UnitriangularMatrix::elementary(3, 1, 2), UnitriangularMatrix::elementary(3, 2, 3));
        GroupElement p = g.identity();
        const Integer k = m.entry(1, 3);
        const GroupElement step = k >= 0 ? c : g.invert(c);
        const Integer magnitude = abs(k);
        if (magnitude.fits_slong_p()) {
          p = g.power(step, magnitude.get_si());
          if (!(p == a)) throw std::logic_error("commutator power check failed");
        }
      }
      return true;
    }
    case GroupKind::Product: {
      const auto& parts = a.as<ProductTuple>().parts;
      for (std::size_t i = 0; i < parts.size(); ++i)
        if (!derived_component(g.factors()[i], parts[i])) return false;
      return true;
    }
  }
  return false;
}

bool is_tr3(const GroupDescriptor& f) { return f.kind() == GroupKind::Unitriangular && f.dimension() == 3; }

}  // namespace

bool derived_subgroup_membership(const GroupDescriptor& g, const GroupElement& a) {
  g.require(a);
  return derived_component(g, a);
}

std::optional<std::uint64_t> isolator_s_witness(const GroupDescriptor& g, const GroupElement& x, std::uint64_t bound) {
  GroupElement p = g.identity();
  for (std::uint64_t s = 1; s <= bound; ++s) {
    p = g.multiply(p, x);
    if (derived_subgroup_membership(g, p)) return s;
  }
  return std::nullopt;
}

namespace {

bool isolator_shape(const GroupDescriptor& g) {
  if (is_tr3(g)) return true;
  if (g.kind() != GroupKind::Product) return false;
  bool any = false;
  for (const auto& f : g.factors()) {
    if (is_tr3(f))
      any = true;
    else if (f.kind() != GroupKind::FreeAbelian)
      return false;
  }
  return any;
}

bool in_isolator_component(const GroupDescriptor& f, const GroupElement& a) {
  if (is_tr3(f)) return superdiagonal_zero(a.as<UnitriangularMatrix>());
  return f.is_identity(a);
}

// why x^s stays outside G' for every s != 0
std::string outside_proof(const GroupDescriptor& g, const GroupElement& x) {
  auto component = [](const GroupDescriptor& f, const GroupElement& a, const std::string& where) -> std::string {
    if (is_tr3(f)) {
      const auto& m = a.as<UnitriangularMatrix>();
      for (std::size_t i = 1; i < 3; ++i) {
        const Integer e = m.entry(i, i + 1);
        if (e != 0)
          return where + "superdiagonal entry (" + std::to_string(i) + "," + std::to_string(i + 1) + ") of x^s is s*" +
                 e.get_str() + " != 0 (superdiagonal entries add under multiplication)";
      }
      return {};
    }
    const auto& v = a.as<IntVector>().coords;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != 0)
        return where + "coordinate " + std::to_string(i + 1) + " of x^s is s*" + std::to_string(v[i]) +
               " != 0 and G' has trivial free part";
    return {};
  };
  if (g.kind() != GroupKind::Product) return component(g, x, "");
  const auto& parts = x.as<ProductTuple>().parts;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto s = component(g.factors()[i], parts[i], "factor " + std::to_string(i + 1) + ": ");
    if (!s.empty()) return s;
  }
  return {};
}

}  // namespace

bool in_isolator(const GroupDescriptor& g, const GroupElement& a) {
  if (!isolator_shape(g)) throw DomainError("isolator membership is implemented for Tr(3) and Tr(3) x Z^k, not " + g.to_string());
  g.require(a);
  if (g.kind() != GroupKind::Product) return in_isolator_component(g, a);
  const auto& parts = a.as<ProductTuple>().parts;
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (!in_isolator_component(g.factors()[i], parts[i])) return false;
  return true;
}

std::string IsolatorReport::tag() const {
  if (!applicable) return "NotApplicable(" + reason + ")";
  return "I(" + std::to_string(n) + "," + std::to_string(m) + ")";
}

std::string IsolatorReport::to_string(const GroupDescriptor& g) const {
  std::ostringstream os;
  os << "class " << tag() << '\n';
  if (!applicable) return os.str();
  os << "tau " << generators << '\n';
  os << "predicate " << predicate << '\n';
  os << "G/tau Z^" << n << '\n';
  os << "tau Z^" << m << '\n';
  for (const auto& w : cross_check) {
    os << "check " << g.format(w.element) << ' ';
    if (w.s)
      os << "s=" << *w.s << '\n';
    else
      os << "no s<=" << kIsolatorSearchBound << ": " << w.proof << '\n';
  }
  return os.str();
}

IsolatorReport isolator_tau(const GroupDescriptor& g, std::uint64_t search_bound) {
  IsolatorReport r;
  if (!g.is_torsion_free()) {
    r.reason = "not torsion-free";
    return r;
  }
  const auto cls = g.nilpotency_class();
  if (!cls) {
    r.reason = "not nilpotent";
    return r;
  }
  if (*cls != 2) {
    r.reason = "class " + std::to_string(*cls) + " != 2";
    return r;
  }
  if (!isolator_shape(g)) {
    r.reason = "unsupported class-2 group " + g.to_string();
    return r;
  }
  r.applicable = true;

  std::vector<GroupDescriptor> factors;
  if (g.kind() == GroupKind::Product)
    factors.assign(g.factors().begin(), g.factors().end());
  else
    factors.push_back(g);
  std::vector<std::string> gens_text, pred_text;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const std::string where = factors.size() > 1 ? "factor " + std::to_string(i + 1) + " " : "";
    if (is_tr3(factors[i])) {
      r.n += 2;
      r.m += 1;
      gens_text.push_back("<g13>");
      pred_text.push_back(where + "entry(1,2)=0 and entry(2,3)=0");
    } else {
      r.n += factors[i].dimension();
      gens_text.push_back("{0}");
      pred_text.push_back(where + "all coordinates 0");
    }
  }
  for (std::size_t i = 0; i < gens_text.size(); ++i) {
    r.generators += (i ? " x " : "") + gens_text[i];
    r.predicate += (i ? "; " : "") + pred_text[i];
  }
  if (r.n + r.m != g.hirsch_length()) throw std::logic_error("isolator ranks do not add up to the Hirsch length");

  // cross-check on the standard generators plus the generators of tau
  std::vector<GroupElement> sample = g.standard_generators();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!is_tr3(factors[i])) continue;
    GroupElement e = UnitriangularMatrix::elementary(3, 1, 3);
    if (g.kind() == GroupKind::Product) {
      ProductTuple t;
      for (std::size_t j = 0; j < factors.size(); ++j) t.parts.push_back(j == i ? e : factors[j].identity());
      e = t;
    }
    if (std::find(sample.begin(), sample.end(), e) == sample.end()) sample.push_back(e);
  }
  for (const auto& x : sample) {
    SWitness w{x, isolator_s_witness(g, x, search_bound), {}};
    const bool inside = in_isolator(g, x);
    if (inside != w.s.has_value())
      throw std::logic_error("isolator predicate and s-search disagree at " + g.format(x));
    if (!inside) w.proof = outside_proof(g, x);
    r.cross_check.push_back(std::move(w));
  }
  return r;
}

// ---- abelianization and FC

namespace {

AbelianGroup finite_abelianization(const FiniteTable& t) {
  const auto d = finite_derived_subgroup(t);
  const std::uint32_t l = t.order();
  std::vector<bool> in_d(l + 1, false);
  for (auto x : d) in_d[x] = true;
  // coset representative: smallest index in x D
  std::vector<std::uint32_t> rep(l + 1, 0);
  std::vector<std::uint32_t> reps;
  for (std::uint32_t x = 1; x <= l; ++x) {
    if (rep[x]) continue;
    reps.push_back(x);
    for (auto h : d) rep[t.product(x, h)] = x;
  }
  auto coset_order = [&](std::uint32_t x) {
    std::uint64_t k = 1;
    std::uint32_t p = x;
    while (!in_d[p]) {
      p = t.product(p, x);
      ++k;
    }
    return k;
  };
  const std::uint64_t q = reps.size();
  std::vector<std::uint64_t> orders;
  for (auto [p, e] : factorize(q)) {
    // c_k = #{i : lambda_i >= k} from |{x : x^{p^k} = 1}| = p^{sum min(lambda_i, k)}
    std::vector<unsigned> logs{0};
    for (unsigned k = 1; k <= e; ++k) {
      std::uint64_t pk = 1;
      for (unsigned i = 0; i < k; ++i) pk *= p;
      std::uint64_t count = 0;
      for (auto x : reps)
        if (pk % coset_order(x) == 0) ++count;
      unsigned lg = 0;
      while (count > 1) {
        count /= p;
        ++lg;
      }
      logs.push_back(lg);
    }
    std::vector<unsigned> at_least(e + 2, 0);
    for (unsigned k = 1; k <= e; ++k) at_least[k] = logs[k] - logs[k - 1];
    for (unsigned k = 1; k <= e; ++k) {
      const unsigned exactly = at_least[k] - at_least[k + 1];
      std::uint64_t pk = 1;
      for (unsigned i = 0; i < k; ++i) pk *= p;
      orders.insert(orders.end(), exactly, pk);
    }
  }
  return AbelianGroup(0, orders);
}

}  // namespace

AbelianGroup abelianization(const GroupDescriptor& g) {
  switch (g.kind()) {
    case GroupKind::FreeAbelian:
      return AbelianGroup(g.dimension(), {});
    case GroupKind::Finite:
      return finite_abelianization(g.table());
    case GroupKind::DihedralInfinite:
      return AbelianGroup(0, {2, 2});
    case GroupKind::Unitriangular:
      return AbelianGroup(g.dimension() - 1, {});
    case GroupKind::Product: {
      std::size_t rank = 0;
      std::vector<std::uint64_t> orders;
      for (const auto& f : g.factors()) {
        const auto a = abelianization(f);
        rank += a.free_rank();
        orders.insert(orders.end(), a.invariant_factors().begin(), a.invariant_factors().end());
      }
      return AbelianGroup(rank, orders);
    }
  }
  return {};
}

bool is_fc_group(const GroupDescriptor& g) {
  switch (g.kind()) {
    case GroupKind::FreeAbelian:
    case GroupKind::Finite:
      return true;
    case GroupKind::DihedralInfinite:
      return false;
    case GroupKind::Unitriangular:
      return g.dimension() == 2;
    case GroupKind::Product:
      return std::all_of(g.factors().begin(), g.factors().end(), [](const auto& f) { return is_fc_group(f); });
  }
  return false;
}

}  // namespace confset
