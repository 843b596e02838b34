#include "confset/config.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <sstream>
#include <thread>

#include "text_cursor.hpp"

namespace confset {

std::string format_configuration(const Configuration& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(c[i]);
  }
  return s;
}

Configuration parse_configuration(std::string_view text) {
  detail::Cursor cur(text);
  Configuration c;
  const bool paren = cur.accept('(');
  do {
    const auto v = cur.integer();
    if (v < 1) cur.fail("cell indices are 1-based");
    if (v > 0xffffffffLL) cur.fail("cell index out of range");
    c.push_back(static_cast<CellIndex>(v));
  } while (cur.accept(','));
  if (paren) cur.expect(')');
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  return c;
}

bool ConfigurationSet::insert(Configuration c, Entry e) {
  auto it = entries_.find(c);
  if (it == entries_.end()) {
    entries_.emplace(std::move(c), std::move(e));
    return true;
  }
  if (e.ordinal < it->second.ordinal) it->second = std::move(e);
  return false;
}

std::vector<Configuration> ConfigurationSet::tuples() const {
  std::vector<Configuration> out;
  out.reserve(entries_.size());
  for (const auto& [c, e] : entries_) out.push_back(c);
  return out;
}

const std::optional<GroupElement>& ConfigurationSet::witness(const Configuration& c) const {
  auto it = entries_.find(c);
  if (it == entries_.end()) throw DomainError("configuration " + format_configuration(c) + " is not in the set");
  return it->second.witness;
}

std::string ConfigurationSet::to_string() const {
  std::ostringstream os;
  os << "# radius=" << radius_ << " streak=" << streak_ << " generators=" << generators_ << " cells=" << cells_
     << " complete=" << (complete_ ? "yes" : "no") << '\n';
  for (const auto& [c, e] : entries_) os << format_configuration(c) << '\n';
  return os.str();
}

std::string ConfigurationSet::to_string(const GroupDescriptor& witnesses_in) const {
  std::ostringstream os;
  os << "# radius=" << radius_ << " streak=" << streak_ << " generators=" << generators_ << " cells=" << cells_
     << " complete=" << (complete_ ? "yes" : "no") << '\n';
  for (const auto& [c, e] : entries_) {
    os << format_configuration(c);
    if (e.witness) os << "  # " << witnesses_in.format(*e.witness);
    os << '\n';
  }
  return os.str();
}

ConfigurationSet ConfigurationSet::parse(std::string_view text) {
  ConfigurationSet s;
  std::optional<std::size_t> cells;
  std::optional<std::size_t> arity;
  std::size_t start = 0;
  std::size_t count = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    const std::size_t base = start;
    start = end + 1;

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) {
      std::string_view comment = line.substr(hash + 1);
      if (line.find_first_not_of(" \t") == hash) {
        // header fields are key=value words
        std::istringstream words{std::string(comment)};
        std::string w;
        while (words >> w) {
          const auto eq = w.find('=');
          if (eq == std::string::npos) continue;
          const std::string key = w.substr(0, eq), value = w.substr(eq + 1);
          try {
            if (key == "radius") s.radius_ = static_cast<unsigned>(std::stoul(value));
            if (key == "streak") s.streak_ = static_cast<unsigned>(std::stoul(value));
            if (key == "generators") s.generators_ = std::stoul(value);
            if (key == "cells") cells = std::stoul(value);
            if (key == "complete") s.complete_ = value == "yes";
          } catch (const std::exception&) {
            throw ParseError("bad header field '" + w + "'", base + hash);
          }
        }
        continue;
      }
      line = line.substr(0, hash);
    }
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    Configuration c;
    try {
      c = parse_configuration(line);
    } catch (const ParseError& e) {
      throw ParseError(std::string("bad configuration line: ") + e.what(), base + e.position());
    }
    if (arity && *arity != c.size()) throw ParseError("configurations of different length", base);
    arity = c.size();
    s.insert(std::move(c), Entry{std::nullopt, count++});
  }
  if (arity) s.generators_ = *arity - 1;
  if (cells) {
    s.cells_ = *cells;
  } else {
    for (const auto& [c, e] : s.entries_)
      for (auto v : c) s.cells_ = std::max<std::size_t>(s.cells_, v);
  }
  for (const auto& [c, e] : s.entries_)
    for (auto v : c)
      if (v > s.cells_) throw ParseError("cell index " + std::to_string(v) + " exceeds cells=" + std::to_string(s.cells_));
  return s;
}

bool ConfigurationSet::same_tuples(const ConfigurationSet& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  return std::equal(entries_.begin(), entries_.end(), other.entries_.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; });
}

// ---- computation

std::optional<unsigned> structural_completeness_radius(const GeneratingSequence& gens, const Partition& p) {
  if (!(gens.group() == p.group())) return std::nullopt;
  if (p.size() == 1) return 0;
  if (!gens.is_standard()) return std::nullopt;
  switch (p.family()) {
    case PartitionFamily::Orthant: {
      // tuple depends on sigma, j and which coordinates equal -1; witnesses in {-2,-1,0,1}^n x F
      const auto& layout = *p.orthant_layout();
      return static_cast<unsigned>(2 * layout.rank + (layout.finite_order > 1 ? 1 : 0));
    }
    case PartitionFamily::Sign:
      if (p.group().kind() == GroupKind::FreeAbelian) return 2;
      return std::nullopt;
    case PartitionFamily::DihedralFive:
      return 3;
    default:
      return std::nullopt;
  }
}

namespace {

using LayerCallback = std::function<void(unsigned radius, std::size_t size, bool grew)>;

Configuration tuple_of(const GeneratingSequence& gens, const Partition& p, const GroupElement& x) {
  const GroupDescriptor& g = gens.group();
  Configuration c;
  c.reserve(gens.size() + 1);
  c.push_back(p.classify(x));
  for (const auto& gi : gens.elements()) c.push_back(p.classify(g.multiply(gi, x)));
  return c;
}

std::vector<Configuration> classify_layer(const GeneratingSequence& gens, const Partition& p,
                                          const std::vector<GroupElement>& layer, unsigned workers) {
  std::vector<Configuration> out(layer.size());
  const std::size_t n = layer.size();
  const std::size_t threads = std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(1, n / 64));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = tuple_of(gens, p, layer[i]);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) out[i] = tuple_of(gens, p, layer[i]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  // the earliest failing chunk holds the earliest failing element
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

ConfigurationSet run(const GeneratingSequence& gens, const Partition& p, unsigned radius, const ComputeOptions& options,
                     const LayerCallback& on_layer) {
  if (!(gens.group() == p.group()))
    throw DomainError("generators live in " + gens.group().to_string() + " but the partition is over " +
                      p.group().to_string());
  if (gens.size() == 0) throw DomainError("the generating sequence is empty");

  ConfigurationSet s(gens.size(), p.size());
  const auto layers = ball_layers(gens.group(), gens.elements(), radius);
  std::size_t ordinal = 0;
  unsigned last_growth = 0;
  for (unsigned r = 0; r < layers.size(); ++r) {
    const auto tuples = classify_layer(gens, p, layers[r], options.workers);
    bool grew = false;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      if (s.insert(tuples[i], {layers[r][i], ordinal++})) grew = true;
    }
    if (grew) last_growth = r;
    if (on_layer) on_layer(r, s.size(), grew);
  }
  const auto bound = structural_completeness_radius(gens, p);
  s.set_metadata(radius, radius - last_growth, bound && radius >= *bound);
  return s;
}

}  // namespace

ConfigurationSet compute_config_set(const GeneratingSequence& gens, const Partition& p, unsigned radius,
                                    const ComputeOptions& options) {
  return run(gens, p, radius, options, {});
}

StabilityScan stability_scan(const GeneratingSequence& gens, const Partition& p, unsigned r_min, unsigned r_max,
                             const ComputeOptions& options) {
  if (r_min > r_max) throw DomainError("scan needs r_min <= r_max");
  StabilityScan scan;
  scan.final_set = run(gens, p, r_max, options, [&](unsigned r, std::size_t size, bool grew) {
    if (grew) scan.stable_from = r;
    if (r >= r_min) scan.rows.push_back({r, size, grew});
  });
  return scan;
}

ConfigurationSet project_config_set(const ConfigurationSet& s, const std::vector<CellIndex>& projection) {
  std::size_t coarse = 0;
  for (auto v : projection) {
    if (v == 0) throw DomainError("projection maps to cell 0");
    coarse = std::max<std::size_t>(coarse, v);
  }
  ConfigurationSet out(s.generator_count(), coarse);
  for (const auto& [c, e] : s.entries()) {
    Configuration mapped;
    mapped.reserve(c.size());
    for (auto v : c) {
      if (v < 1 || v > projection.size())
        throw DomainError("cell " + std::to_string(v) + " is not covered by the projection");
      mapped.push_back(projection[v - 1]);
    }
    out.insert(std::move(mapped), e);
  }
  out.set_metadata(s.radius(), s.stability_streak(), false);
  return out;
}

TransportedPair transport(const Isomorphism& iso, const GeneratingSequence& gens, const Partition& p) {
  const GroupDescriptor& g = gens.group();
  if (!(g == p.group())) throw DomainError("generators and partition belong to different groups");
  iso.validate(g);
  std::vector<GroupElement> images;
  images.reserve(gens.size());
  for (const auto& a : gens.elements()) images.push_back(iso.apply(g, a));
  return {GeneratingSequence(g, std::move(images)), p.pullback(iso)};
}

std::string SetComparison::to_string() const {
  if (equal) return "Equal\n";
  std::ostringstream os;
  os << "Diff\n";
  os << "only-in-a " << only_in_a.size() << '\n';
  for (const auto& c : only_in_a) os << format_configuration(c) << '\n';
  os << "only-in-b " << only_in_b.size() << '\n';
  for (const auto& c : only_in_b) os << format_configuration(c) << '\n';
  return os.str();
}

SetComparison compare_sets(const ConfigurationSet& a, const ConfigurationSet& b) {
  if (!a.empty() && !b.empty() && a.generator_count() != b.generator_count())
    throw DomainError("configuration arity differs: " + std::to_string(a.generator_count() + 1) + " vs " +
                      std::to_string(b.generator_count() + 1));
  if (a.cell_count() != 0 && b.cell_count() != 0 && a.cell_count() != b.cell_count())
    throw DomainError("partition sizes differ: " + std::to_string(a.cell_count()) + " vs " +
                      std::to_string(b.cell_count()));
  SetComparison r;
  const auto ta = a.tuples(), tb = b.tuples();
  std::set_difference(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(r.only_in_a));
  std::set_difference(tb.begin(), tb.end(), ta.begin(), ta.end(), std::back_inserter(r.only_in_b));
  r.equal = r.only_in_a.empty() && r.only_in_b.empty();
  return r;
}

OrthantPropertyReport check_orthant_properties(const ConfigurationSet& s, const Partition& p) {
  if (p.family() != PartitionFamily::Orthant || !p.orthant_layout())
    throw DomainError("orthant properties need the orthant partition");
  const auto& layout = *p.orthant_layout();
  const GroupDescriptor& g = p.group();
  const bool has_finite = g.kind() != GroupKind::FreeAbelian;
  const FiniteTable* table = nullptr;
  if (g.kind() == GroupKind::Finite) table = &g.table();
  if (g.kind() == GroupKind::Product) table = &g.factors()[1].table();
  const std::size_t n = layout.rank;
  const std::size_t l = has_finite ? layout.finite_order : 0;
  if (s.generator_count() != n + l)
    throw DomainError("orthant properties need the standard generators (" + std::to_string(n + l) + " of them)");

  OrthantPropertyReport r;
  for (const auto& [c, e] : s.entries()) {
    ++r.tuples_checked;
    const auto [sigma, j] = layout.cell(c[0]);
    auto fail = [&](const char* prop, std::size_t entry) {
      r.violations.push_back("(" + std::string(prop) + ") tuple " + format_configuration(c) + " entry " +
                             std::to_string(entry));
    };
    for (std::size_t i = 0; i < n; ++i) {
      auto moved = sigma;
      switch (sigma[i]) {
        case 0:
          moved[i] = 1;
          if (c[i + 1] != layout.index(moved, j)) fail("I", i + 1);
          break;
        case 1:
          if (c[i + 1] != layout.index(sigma, j)) fail("II", i + 1);
          break;
        default:
          moved[i] = 0;
          if (c[i + 1] != layout.index(sigma, j) && c[i + 1] != layout.index(moved, j)) fail("III", i + 1);
          break;
      }
    }
    for (std::size_t i = 1; i <= l; ++i)
      if (c[n + i] != layout.index(sigma, table->product(static_cast<std::uint32_t>(i), j))) fail("IV", n + i);
  }
  return r;
}

namespace {

void tree_body(std::ostringstream& os, const Configuration& c, const std::string& prefix, const char* indent) {
  for (std::size_t i = 0; i < c.size(); ++i)
    os << indent << prefix << i << " [label=\"" << c[i] << "\"];\n";
  for (std::size_t i = 1; i < c.size(); ++i)
    os << indent << prefix << 0 << " -> " << prefix << i << " [label=\"" << i << "\"];\n";
}

}  // namespace

std::string export_tree(const Configuration& c, std::size_t k) {
  if (c.size() != k + 1)
    throw DomainError("configuration " + format_configuration(c) + " does not have " + std::to_string(k + 1) + " entries");
  std::ostringstream os;
  os << "digraph configuration {\n";
  tree_body(os, c, "c", "  ");
  os << "}\n";
  return os.str();
}

std::string export_forest(const ConfigurationSet& s) {
  std::ostringstream os;
  os << "digraph configurations {\n";
  std::size_t t = 1;
  for (const auto& [c, e] : s.entries()) {
    os << "  subgraph cluster_" << t << " {\n";
    os << "    label=\"" << format_configuration(c) << "\";\n";
    tree_body(os, c, "t" + std::to_string(t) + "_", "    ");
    os << "  }\n";
    ++t;
  }
  os << "}\n";
  return os.str();
}

}  // namespace confset
