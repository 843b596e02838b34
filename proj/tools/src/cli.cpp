#include "confset/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "confset/abelian.hpp"
#include "confset/config.hpp"
#include "confset/invariants.hpp"
#include "confset/partition.hpp"

namespace confset::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write file '" + path + "'");
  f << text;
}

unsigned workers_from_env() {
  const char* v = std::getenv("CONFSET_WORKERS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const unsigned long n = std::strtoul(v, &end, 10);
  if (*end != '\0' || n == 0 || n > 256) throw ParseError(std::string("CONFSET_WORKERS must be 1..256, got '") + v + "'");
  return static_cast<unsigned>(n);
}

bool is_builtin_partition(const std::string& s) {
  return s == "orthant" || s == "dinf5" || s == "trivial" || s == "sign";
}

Partition load_partition(const std::string& spec, const GroupDescriptor& g) {
  if (spec.empty()) throw ParseError("--partition is required");
  if (is_builtin_partition(spec)) return Partition::builtin(spec, g);
  return Partition::parse(g, read_file(spec));
}

std::string format_list(const GroupDescriptor& g, const std::vector<GroupElement>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + g.format(xs[i]);
  return s;
}

struct Pair {
  GroupDescriptor group;
  std::optional<GeneratingSequence> gens;
  std::optional<Partition> partition;
};

struct Options {
  std::string group;
  std::string gens = "std";
  std::string partition;
  unsigned radius = 3;
  unsigned max_radius = kDefaultMaxRadius;
  std::string out;
  std::string dot;
  std::string law;
  bool witnesses = false;

  void check_radius(unsigned r) const {
    if (r > max_radius)
      throw DomainError("radius " + std::to_string(r) + " exceeds the maximum " + std::to_string(max_radius) +
                        " (raise it with --max-radius)");
  }

  GroupDescriptor load_group() const {
    if (group.empty()) throw ParseError("--group is required");
    return parse_group(group);
  }

  GeneratingSequence load_gens(const GroupDescriptor& g) const { return GeneratingSequence(g, parse_element_list(g, gens)); }

  Pair load_pair() const {
    Pair p{load_group(), std::nullopt, std::nullopt};
    p.gens = load_gens(p.group);
    p.partition = load_partition(partition, p.group);
    return p;
  }
};

void add_pair_options(CLI::App* sub, Options& o) {
  sub->add_option("--group", o.group, "group spec, e.g. 'Z^2 x C(2)', 'Dinf', 'UT(3)'");
  sub->add_option("--gens", o.gens, "generator list, or 'std' for the standard generators");
  sub->add_option("--partition", o.partition, "partition file, or one of orthant|dinf5|trivial|sign");
  sub->add_option("--radius", o.radius, "ball radius");
  sub->add_option("--max-radius", o.max_radius, "largest radius accepted");
}

std::string partition_note(const GeneratingSequence& g, const Partition& p, const ValidationReport& v) {
  return std::string("# validation=") + (v.method == ValidationMethod::Structural ? "structural" : "ball-only") +
         " cells=" + std::to_string(p.size()) +
         " generation=" + (g.status() == GenerationStatus::VerifiedStructural ? "verified" : "unverified") + "\n";
}

ValidationReport require_valid(const GeneratingSequence& gens, const Partition& p, unsigned radius) {
  auto v = validate(p, gens, radius);
  if (!v.ok) throw DomainError("invalid partition: " + v.to_string(p.group()));
  return v;
}

// ---- commands

void run_con(const Options& o, std::ostream& os, unsigned workers) {
  o.check_radius(o.radius);
  const auto pair = o.load_pair();
  const auto v = require_valid(*pair.gens, *pair.partition, o.radius);
  const auto s = compute_config_set(*pair.gens, *pair.partition, o.radius, {workers});
  os << (o.witnesses ? s.to_string(pair.group) : s.to_string());
  os << partition_note(*pair.gens, *pair.partition, v);
  if (!o.dot.empty()) write_file(o.dot, export_forest(s));
}

void run_scan(const Options& o, unsigned from, std::ostream& os, unsigned workers) {
  o.check_radius(o.radius);
  const auto pair = o.load_pair();
  require_valid(*pair.gens, *pair.partition, o.radius);
  const auto scan = stability_scan(*pair.gens, *pair.partition, from, o.radius, {workers});
  os << "radius size grew\n";
  for (const auto& row : scan.rows) os << row.radius << ' ' << row.size << ' ' << (row.grew ? "yes" : "no") << '\n';
  os << "stable-from " << scan.stable_from << '\n';
}

void run_compare(const Options& o, const std::vector<std::string>& files, unsigned radius_b, std::ostream& os,
                 unsigned workers) {
  ConfigurationSet a, b;
  if (files.size() == 2) {
    a = ConfigurationSet::parse(read_file(files[0]));
    b = ConfigurationSet::parse(read_file(files[1]));
  } else if (files.empty()) {
    o.check_radius(o.radius);
    o.check_radius(radius_b);
    const auto pair = o.load_pair();
    require_valid(*pair.gens, *pair.partition, std::max(o.radius, radius_b));
    a = compute_config_set(*pair.gens, *pair.partition, o.radius, {workers});
    b = compute_config_set(*pair.gens, *pair.partition, radius_b, {workers});
  } else {
    throw ParseError("compare takes two set files, or --group/--partition with --radius and --radius-b");
  }
  os << compare_sets(a, b).to_string();
}

void run_transport(const Options& o, const std::string& iso_text, std::ostream& os, unsigned workers) {
  o.check_radius(o.radius);
  const auto pair = o.load_pair();
  const auto iso = Isomorphism::parse(iso_text);
  const auto moved = transport(iso, *pair.gens, *pair.partition);
  require_valid(*pair.gens, *pair.partition, o.radius);
  const auto a = compute_config_set(*pair.gens, *pair.partition, o.radius, {workers});
  const auto b = compute_config_set(moved.gens, moved.partition, o.radius, {workers});
  os << "iso " << iso.to_string() << '\n';
  os << "gens " << format_list(pair.group, pair.gens->elements()) << '\n';
  os << "gens' " << format_list(pair.group, moved.gens.elements()) << '\n';
  os << "original " << a.size() << " tuples\n";
  os << "transported " << b.size() << " tuples\n";
  os << compare_sets(a, b).to_string();
}

void run_invariants(const GroupDescriptor& g, unsigned radius, std::ostream& os) {
  os << "group " << g.to_string() << '\n';
  os << "abelian " << (g.is_abelian() ? "yes" : "no") << '\n';
  os << "torsion-free " << (g.is_torsion_free() ? "yes" : "no") << '\n';
  const auto cls = g.nilpotency_class();
  os << "class " << (cls ? std::to_string(*cls) : "not-nilpotent") << '\n';
  os << "hirsch " << hirsch_length(g) << '\n';
  os << "fc " << (is_fc_group(g) ? "yes" : "no") << '\n';
  os << "abelianization " << abelianization(g).to_string() << '\n';
  const auto t = torsion_elements(g, radius);
  os << "torsion " << t.structure << '\n';
  os << "torsion-listed radius=" << radius << ' ' << t.elements.size() << (t.complete ? " complete" : " ball-limited")
     << '\n';
  std::string central;
  for (const auto& s : g.standard_generators())
    if (center_membership(g, s)) central += (central.empty() ? "" : " ") + g.format(s);
  os << "central-generators " << (central.empty() ? "none" : central) << '\n';
}

void run_tau(const GroupDescriptor& g, std::ostream& os) { os << isolator_tau(g).to_string(g); }

std::vector<std::uint64_t> parse_primes(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError("bad prime '" + item + "' in --primes");
    }
  }
  return out;
}

struct QuotientOptions {
  std::string abelian;
  std::optional<std::size_t> rank_bound;
  std::uint64_t torsion_bound = 8;
  std::optional<std::size_t> n;
  std::string l;
  std::string primes;
};

void run_quotients(const Options& o, const QuotientOptions& q, std::ostream& os) {
  AbelianGroup g;
  if (!q.abelian.empty())
    g = AbelianGroup::parse(q.abelian);
  else if (!o.group.empty())
    g = abelianization(o.load_group());
  else
    throw ParseError("quotients needs --abelian or --group");
  os << "G " << g.to_string() << '\n';
  if (q.n || !q.l.empty()) {
    const std::size_t n = q.n.value_or(0);
    const auto lt = q.l.empty() ? FiniteAbelianType{} : AbelianGroup::parse(q.l).torsion();
    if (!q.l.empty() && !AbelianGroup::parse(q.l).finite()) throw DomainError("--L must be finite");
    const auto d = decide_Zn_L_quotient(g, n, lt);
    os << "target " << QuotientType{n, lt}.to_string() << '\n';
    os << "decision " << (d.quotient ? "yes" : "no") << '\n';
    if (d.prime_witness)
      os << "prime " << d.prime << " witness " << d.prime_witness->to_string() << '\n';
    if (d.witness) os << "witness " << d.witness->to_string() << '\n';
    if (!q.primes.empty()) os << fa_consistency(g, n, lt, parse_primes(q.primes)).to_string();
    return;
  }
  const std::size_t rank_bound = q.rank_bound.value_or(g.free_rank());
  os << "rank torsion witness\n";
  for (const auto& e : quotient_types(g, rank_bound, q.torsion_bound))
    os << e.type.rank << ' ' << e.type.torsion.to_string() << ' ' << e.witness.to_string() << '\n';
}

void run_law(const Options& o, std::ostream& os, unsigned workers) {
  o.check_radius(o.radius);
  if (o.law.empty()) throw ParseError("--law is required");
  const auto g = o.load_group();
  const auto gens = o.load_gens(g);
  const auto law = LawSpec::parse(o.law);
  os << "law " << law.to_string() << '\n';
  os << check_law(gens, law, o.radius, {workers}).to_string(g);
}

void run_nilpotency(const Options& o, unsigned c, std::ostream& os) {
  o.check_radius(o.radius);
  const auto g = o.load_group();
  os << nilpotency_witness(o.load_gens(g), c, o.radius).to_string(g);
}

// ---- presets

const std::vector<Configuration>& dinf_reference() {
  static const std::vector<Configuration> ref = {{1, 2, 3}, {2, 1, 5}, {3, 4, 1}, {4, 5, 5},
                                                 {4, 3, 5}, {5, 4, 2}, {5, 4, 4}};
  return ref;
}

void preset_dinf(std::ostream& os, unsigned workers) {
  const auto g = GroupDescriptor::dihedral();
  const auto gens = GeneratingSequence::standard(g);
  const auto p = Partition::dihedral_five(g);
  const auto s = compute_config_set(gens, p, 3, {workers});
  os << "group Dinf gens " << format_list(g, gens.elements()) << " partition dinf5\n";
  os << s.to_string(g);
  ConfigurationSet ref(2, 5);
  std::size_t k = 0;
  for (const auto& c : dinf_reference()) ref.insert(c, {std::nullopt, k++});
  os << "reference " << compare_sets(s, ref).to_string();
  const auto scan = stability_scan(gens, p, 1, 6, {workers});
  os << "radius size grew\n";
  for (const auto& row : scan.rows) os << row.radius << ' ' << row.size << ' ' << (row.grew ? "yes" : "no") << '\n';
  os << "stable-from " << scan.stable_from << '\n';
}

void preset_orthant(std::ostream& os, unsigned workers) {
  const auto g = parse_group("Z^2 x C(2)");
  const auto gens = GeneratingSequence::standard(g);
  const auto p = Partition::orthant(g);
  const auto s = compute_config_set(gens, p, 6, {workers});
  os << "group " << g.to_string() << " gens " << format_list(g, gens.elements()) << " partition orthant\n";
  os << s.to_string();
  const auto props = check_orthant_properties(s, p);
  os << "properties (I)-(IV) tuples=" << props.tuples_checked << " violations=" << props.violations.size() << '\n';
  for (const auto& v : props.violations) os << v << '\n';
}

void preset_tr3(std::ostream& os) {
  const auto g = GroupDescriptor::unitriangular(3);
  run_invariants(g, 3, os);
  run_tau(g, os);
  const auto gens = GeneratingSequence::standard(g);
  os << "nilpotency c=2 " << nilpotency_witness(gens, 2, 2).to_string(g);
  os << "nilpotency c=1 " << nilpotency_witness(gens, 1, 2).to_string(g);
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Configuration sets and isomorphism invariants of finitely generated groups", "confset"};
  app.require_subcommand(1);

  Options o;
  std::function<void(std::ostream&, unsigned)> action;

  auto* con = app.add_subcommand("con", "compute Con(g, E) on a ball");
  add_pair_options(con, o);
  con->add_option("--out", o.out, "write the set to a file");
  con->add_option("--dot", o.dot, "also write every tuple as a DOT tree to this file");
  con->add_flag("--witnesses", o.witnesses, "annotate each tuple with its witness");
  con->callback([&] { action = [&](std::ostream& os, unsigned w) { run_con(o, os, w); }; });

  unsigned scan_from = 0;
  auto* scan = app.add_subcommand("scan", "set sizes for radii --from..--radius");
  add_pair_options(scan, o);
  scan->add_option("--from", scan_from, "first radius");
  scan->add_option("--out", o.out, "write the report to a file");
  scan->callback([&] { action = [&](std::ostream& os, unsigned w) { run_scan(o, scan_from, os, w); }; });

  std::vector<std::string> compare_files;
  unsigned radius_b = 0;
  auto* compare = app.add_subcommand("compare", "compare two configuration sets");
  add_pair_options(compare, o);
  compare->add_option("files", compare_files, "two set files");
  compare->add_option("--radius-b", radius_b, "radius of the second computed set");
  compare->add_option("--out", o.out, "write the report to a file");
  compare->callback([&] { action = [&](std::ostream& os, unsigned w) { run_compare(o, compare_files, radius_b, os, w); }; });

  std::string iso_text;
  auto* trans = app.add_subcommand("transport", "transport a pair along an isomorphism and compare");
  add_pair_options(trans, o);
  trans->add_option("--iso", iso_text, "e.g. 'coord[[1,1],[0,1]]', 'relabel(1,3,2)', 'swap'")->required();
  trans->add_option("--out", o.out, "write the report to a file");
  trans->callback([&] { action = [&](std::ostream& os, unsigned w) { run_transport(o, iso_text, os, w); }; });

  auto* inv = app.add_subcommand("invariants", "structural invariants of a builtin group");
  inv->add_option("--group", o.group, "group spec")->required();
  inv->add_option("--radius", o.radius, "radius for the torsion listing");
  inv->add_option("--max-radius", o.max_radius, "largest radius accepted");
  inv->add_option("--out", o.out, "write the report to a file");
  inv->callback([&] {
    action = [&](std::ostream& os, unsigned) {
      o.check_radius(o.radius);
      run_invariants(o.load_group(), o.radius, os);
    };
  });

  QuotientOptions q;
  auto* quot = app.add_subcommand("quotients", "abelian quotient types, Z^n x L decisions and prime consistency");
  quot->add_option("--abelian", q.abelian, "abelian group, e.g. 'Z^2 + Z4'");
  quot->add_option("--group", o.group, "builtin group (its abelianization is used)");
  quot->add_option("--rank-bound", q.rank_bound, "largest free rank listed");
  quot->add_option("--torsion-bound", q.torsion_bound, "largest torsion order listed");
  quot->add_option("--n", q.n, "free rank n of the target Z^n x L");
  quot->add_option("--L", q.l, "finite part L of the target, e.g. 'Z2 + Z2'");
  quot->add_option("--primes", q.primes, "comma-separated primes for the consistency check");
  quot->add_option("--out", o.out, "write the report to a file");
  quot->callback([&] { action = [&](std::ostream& os, unsigned) { run_quotients(o, q, os); }; });

  auto* law = app.add_subcommand("law", "check a law on every tuple of a ball");
  law->add_option("--group", o.group, "group spec")->required();
  law->add_option("--gens", o.gens, "generator list, or 'std'");
  law->add_option("--law", o.law, "e.g. 'v1 v2^2 = v2^2 v1'")->required();
  law->add_option("--radius", o.radius, "ball radius");
  law->add_option("--max-radius", o.max_radius, "largest radius accepted");
  law->add_option("--out", o.out, "write the report to a file");
  law->callback([&] { action = [&](std::ostream& os, unsigned w) { run_law(o, os, w); }; });

  unsigned nil_c = 1;
  auto* nil = app.add_subcommand("nilpotency", "left-normed commutator check for class <= c");
  nil->add_option("--group", o.group, "group spec")->required();
  nil->add_option("--gens", o.gens, "generator list, or 'std'");
  nil->add_option("--class", nil_c, "class bound c")->required();
  nil->add_option("--radius", o.radius, "ball radius");
  nil->add_option("--max-radius", o.max_radius, "largest radius accepted");
  nil->add_option("--out", o.out, "write the report to a file");
  nil->callback([&] { action = [&](std::ostream& os, unsigned) { run_nilpotency(o, nil_c, os); }; });

  auto* tau = app.add_subcommand("tau", "isolator of the derived subgroup");
  tau->add_option("--group", o.group, "group spec")->required();
  tau->add_option("--out", o.out, "write the report to a file");
  tau->callback([&] { action = [&](std::ostream& os, unsigned) { run_tau(o.load_group(), os); }; });

  std::string tuple_text;
  auto* dot = app.add_subcommand("export-dot", "DOT tree of one configuration");
  dot->add_option("--tuple", tuple_text, "configuration, e.g. 1,2,3")->required();
  dot->add_option("--out", o.out, "write the DOT text to a file");
  dot->callback([&] {
    action = [&](std::ostream& os, unsigned) {
      const auto c = parse_configuration(tuple_text);
      os << export_tree(c, c.size() - 1);
    };
  });

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "reproduce a named example");
  preset->add_option("name", preset_name, "dinf-example | orthant-z2xz2 | tr3-invariants")->required();
  preset->add_option("--out", o.out, "write the report to a file");
  preset->callback([&] {
    action = [&](std::ostream& os, unsigned w) {
      if (preset_name == "dinf-example")
        preset_dinf(os, w);
      else if (preset_name == "orthant-z2xz2")
        preset_orthant(os, w);
      else if (preset_name == "tr3-invariants")
        preset_tr3(os);
      else
        throw ParseError("unknown preset '" + preset_name + "' (dinf-example, orthant-z2xz2, tr3-invariants)");
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Success : ParseFailure;
  }

  try {
    const unsigned workers = workers_from_env();
    std::ostringstream buffer;
    action(buffer, workers);
    if (o.out.empty())
      out << buffer.str();
    else
      write_file(o.out, buffer.str());
    return Success;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return ParseFailure;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return DomainFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return DomainFailure;
  }
}

}  // namespace confset::cli
