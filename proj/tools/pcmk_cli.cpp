#include "pcmk/io.hpp"
#include "pcmk/selftest.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <sstream>

using namespace pcmk;
namespace fs = std::filesystem;

namespace {

constexpr int schema_version = 1;

enum Exit : int {
  ok = 0,
  check_failed = 1,
  parse_failure = 2,
  invalid_input = 3,
  not_serre = 4,
  not_normal = 5,
  closure_bound = 6,
  undecidable = 7,
};

struct Flags {
  bool json = false;
  int max_size = 0;
  std::int64_t pi1s = 2;
  std::uint64_t seed = 1;

  StableConstants constants() const {
    StableConstants c;
    c.pi1s = pi1s == 0 ? AbelianGroup::integers(1) : AbelianGroup::cyclic(pi1s);
    return c;
  }
  int size_or(int fallback) const { return max_size > 0 ? max_size : fallback; }
};

struct Output {
  json data = json::object();
  std::ostringstream text;
};

std::size_t U(int i) { return static_cast<std::size_t>(i); }

Monoid monoid_arg(const std::string& arg) { return resolve_monoid(json(arg), fs::current_path()); }

std::string yes(bool b) { return b ? "true" : "false"; }

std::string map_str(const FiniteASet& x, const FiniteASet& y, const std::vector<int>& map) {
  std::string s;
  for (int e = 1; e < x.size(); ++e) {
    if (map[U(e)] < 0) continue;
    s += (s.empty() ? "" : ", ") + x.names[U(e)] + " -> " + y.names[U(map[U(e)])];
  }
  return s.empty() ? "(zero)" : s;
}

// Two-out-of-three and pullback closure over the sets up to the corpus bound, plus the given objects.
void require_serre(const SerrePredicate& c, const std::vector<FiniteASet>& objects, const Flags& f) {
  int n = 3;
  for (const auto& x : objects) n = std::max(n, x.size());
  auto universe = enumerate_asets(c.domain, std::min(n, f.size_or(4)));
  universe.insert(universe.end(), objects.begin(), objects.end());
  auto r = validate_serre(c, universe);
  if (!r.ok()) throw not_serre_error("predicate is not a Serre subcategory: " + r.violations.front());
}

// ---------------------------------------------------------------- commands

int monoid_info(const std::string& file, Output& out) {
  Monoid m = monoid_arg(file);
  auto& t = out.text;
  bool affine = std::holds_alternative<AffineMonoid>(m);
  auto ps = primes(m);
  UnitGroup u = units(m);
  std::string pc;
  try {
    pc = yes(is_pc_monoid(m));
  } catch (const undecidable_error&) {
    pc = "undecidable";
  }
  out.data["kind"] = affine ? "affine" : "finite";
  out.data["valid"] = true;
  out.data["units"] = units_to_json(u);
  out.data["pc"] = pc;
  json jp = json::array();
  for (const auto& p : ps) jp.push_back({{"label", p.label}, {"height", p.height}});
  out.data["primes"] = jp;
  t << "kind: " << (affine ? "affine" : "finite") << "\nvalid: true\nprimes: " << ps.size() << "\n";
  for (const auto& p : ps) t << "  " << p.label << "  height " << p.height << "\n";
  t << "units: " << describe(u) << "\npc: " << pc << "\n";
  if (const auto* a = std::get_if<AffineMonoid>(&m)) {
    bool normal = is_normal(*a);
    std::size_t facets = 0;
    for (const auto& p : ps) facets += p.height == 1;
    out.data["normal"] = normal;
    out.data["zero_smooth"] = is_zero_smooth(*a);
    out.data["dvm"] = is_dvm(*a);
    out.data["height_one_primes"] = facets;
    t << "normal: " << yes(normal) << ", Cl candidates: " << facets << " facets\n";
    t << "0-smooth: " << yes(is_zero_smooth(*a)) << "\ndvm: " << yes(is_dvm(*a)) << "\n";
  } else {
    const auto& fm = std::get<FiniteMonoid>(m);
    out.data["elements"] = fm.size();
    out.data["terminal"] = fm.terminal();
    t << "elements: " << fm.size() << (fm.terminal() ? " (terminal monoid)" : "") << "\n";
  }
  return ok;
}

int aset_check(const std::string& monoid_file, const std::string& aset_file, Output& out) {
  Domain d = make_domain(monoid_arg(monoid_file));
  FiniteASet x = load_aset(aset_file, d);
  auto& t = out.text;
  bool pc = is_pc_aset(x);
  out.data["elements"] = x.size();
  out.data["pc"] = pc;
  t << "elements: " << x.size() << "\npc: " << yes(pc) << "\n";
  if (d->is_natural_numbers()) {
    out.data["rooted_tree"] = is_rooted_tree(x);
    t << "rooted tree: " << yes(is_rooted_tree(x)) << "\n";
  }
  if (d->is_finite_group()) {
    out.data["free"] = is_free_gamma_set(x);
    t << "free: " << yes(is_free_gamma_set(x)) << "\n";
  }
  try {
    LengthFiltration f = length_filtration(x);
    json chain = json::array();
    for (Mask m : f.chain) chain.push_back(element_list(x, m));
    out.data["length"] = f.length();
    out.data["filtration"] = chain;
    t << "length: " << f.length() << "\nfiltration:";
    for (Mask m : f.chain) t << " " << element_list(x, m);
    t << "\n";
  } catch (const not_finite_length_error& e) {
    out.data["length"] = nullptr;
    out.data["not_finite_length"] = e.what();
    t << "length: not finite (" << e.what() << ")\n";
  }
  json sup = json::array();
  t << "support:";
  for (const auto& p : support(x)) {
    sup.push_back(p.label);
    t << " " << p.label;
  }
  out.data["support"] = sup;
  t << "\n";
  return ok;
}

struct QuotientInputs {
  Domain domain;
  SerrePredicate pred;
  std::vector<FiniteASet> objects;
};

QuotientInputs quotient_inputs(const std::string& monoid_file, const std::string& serre_file,
                               const std::vector<std::string>& object_files, const Flags& f) {
  QuotientInputs in;
  in.domain = make_domain(monoid_arg(monoid_file));
  in.pred = predicate_from_json(read_json_file(serre_file), in.domain);
  for (const auto& file : object_files) in.objects.push_back(load_aset(file, in.domain));
  require_serre(in.pred, in.objects, f);
  return in;
}

json hom_json(const QuotientHom& h) {
  return {{"window", {{"sub", element_list(h.x, h.window.sub)}, {"kernel", element_list(h.y, h.window.kernel)}}},
          {"map", map_str(h.x, h.y, h.map)}};
}

int quotient_hom(const std::vector<std::string>& files, const Flags& f, Output& out) {
  auto in = quotient_inputs(files[0], files[1], {files[2], files[3]}, f);
  const auto& x = in.objects[0];
  const auto& y = in.objects[1];
  auto hs = hom_quotient(x, y, in.pred);
  json list = json::array();
  for (const auto& h : hs) list.push_back(hom_json(h));
  out.data["count"] = hs.size();
  out.data["plain_homs"] = count_homs(x, y);
  out.data["morphisms"] = list;
  out.text << hs.size() << (hs.size() == 1 ? " morphism" : " morphisms") << " (" << count_homs(x, y) << " in M)\n";
  for (const auto& h : hs)
    out.text << "  window X' = " << element_list(x, h.window.sub) << ", Y' = " << element_list(y, h.window.kernel) << ": "
             << map_str(x, y, h.map) << "\n";
  return ok;
}

int quotient_compose(const std::vector<std::string>& files, const Flags& f, Output& out) {
  auto in = quotient_inputs(files[0], files[1], {files[2], files[3], files[4]}, f);
  const auto& x = in.objects[0];
  const auto& y = in.objects[1];
  const auto& z = in.objects[2];
  auto fs_ = hom_quotient(x, y, in.pred);
  auto gs = hom_quotient(y, z, in.pred);
  auto hs = hom_quotient(x, z, in.pred);
  json table = json::array();
  out.text << "Hom(X,Y): " << fs_.size() << ", Hom(Y,Z): " << gs.size() << ", Hom(X,Z): " << hs.size() << "\n";
  out.text << "g o f as an index into Hom(X,Z), rows g, columns f:\n";
  for (const auto& g : gs) {
    json row = json::array();
    out.text << " ";
    for (const auto& h : fs_) {
      auto c = compose_quotient(g, h, in.pred);
      int idx = -1;
      for (std::size_t k = 0; k < hs.size(); ++k)
        if (same_quotient_hom(c, hs[k], in.pred)) idx = static_cast<int>(k);
      row.push_back(idx);
      out.text << " " << idx;
    }
    out.text << "\n";
    table.push_back(row);
  }
  out.data["hom_xy"] = fs_.size();
  out.data["hom_yz"] = gs.size();
  out.data["hom_xz"] = hs.size();
  out.data["composition"] = table;
  return ok;
}

int quotient_check_w(const std::vector<std::string>& files, const Flags& f, Output& out) {
  auto in = quotient_inputs(files[0], files[1], {files[2]}, f);
  ConditionWOptions o;
  o.seed = f.seed;
  auto r = check_condition_w(in.objects[0], in.pred, o);
  out.data["ok"] = r.ok;
  out.data["objects"] = r.objects;
  out.data["upper_bound_checks"] = r.upper_bound_checks;
  out.data["coequalizer_checks"] = r.coequalizer_checks;
  out.data["failures"] = r.failures;
  out.text << "condition W: " << (r.ok ? "holds" : "fails") << " (" << r.objects << " objects, " << r.upper_bound_checks
           << " upper bounds, " << r.coequalizer_checks << " coequalizers)\n";
  for (const auto& s : r.failures) out.text << "  " << s << "\n";
  return r.ok ? ok : check_failed;
}

int quotient_equivalence(const std::vector<std::string>& files, const Flags& f, Output& out) {
  auto in = quotient_inputs(files[0], files[1], {}, f);
  if (in.pred.kind != SerrePredicate::Kind::support_in)
    throw parse_error("equivalence needs a support_in predicate naming the closed set Z");
  auto r = quotient_equivalence_report(in.domain, in.pred.primes, f.size_or(4));
  json mism = json::array();
  for (const auto& m : r.mismatches)
    mism.push_back({{"x", aset_to_json(m.x)}, {"y", aset_to_json(m.y)}, {"quotient_homs", m.quotient_homs}, {"local_homs", m.local_homs}});
  out.data["localized_at"] = r.localized_at;
  out.data["pairs"] = r.pairs;
  out.data["mismatches"] = mism;
  out.text << "localized at " << r.localized_at << ": " << r.pairs << " pairs, " << r.mismatches.size() << " hom-count mismatches\n";
  return r.mismatches.empty() ? ok : check_failed;
}

const AffineMonoid& require_affine(const Monoid& m) {
  const auto* a = std::get_if<AffineMonoid>(&m);
  if (!a) throw invalid_monoid_error("this command needs an affine monoid");
  return *a;
}

int cl(const std::string& file, Output& out) {
  Monoid m = monoid_arg(file);
  const auto& a = require_affine(m);
  auto g = class_group(a);
  out.data["class_group"] = group_to_json(g);
  out.data["div"] = matrix_to_json(div_matrix(a));
  out.text << "Cl = " << g.str(" + ") << "\n";
  return ok;
}

int gersten(const std::string& file, const Flags& f, Output& out) {
  Monoid m = monoid_arg(file);
  const auto& a = require_affine(m);
  LatticeComplex c = gersten_complex(a, f.constants());
  auto rep = coniveau_k0_report(a);
  auto hom = gersten_homology(a);
  bool smooth = is_zero_smooth(a);
  bool complex_ok = d_squared_zero(c);
  out.data = to_json(rep);
  out.data["homology"] = to_json(hom);
  out.data["zero_smooth"] = smooth;
  out.data["d_squared_zero"] = complex_ok;
  auto& t = out.text;
  for (std::size_t p = 0; p < rep.graded.size(); ++p) t << "W" << p << " = " << rep.graded[p].str(" + ") << "\n";
  t << "K'0 = " << (rep.determined ? rep.k0_prime.str(" + ") : rep.conclusion) << "\n";
  t << "H(units) = " << hom.h_units.str(" + ") << ", H0 = " << hom.h0.str(" + ") << ", H1 = " << hom.h1.str(" + ") << "\n";
  t << "0-smooth: " << yes(smooth) << ", Gersten row exact: " << yes(hom.exact) << "\n";
  for (const auto& n : rep.notes) t << "note: " << n << "\n";
  if (!complex_ok) return check_failed;
  return smooth && !hom.exact ? check_failed : ok;
}

int k0(const std::string& file, const Flags& f, Output& out) {
  CatSpec s = catspec_from_json(read_json_file(file), fs::path(file).parent_path(),
                                f.max_size > 0 ? std::optional<int>(f.max_size) : std::nullopt);
  auto& t = out.text;
  if (s.devissage) {
    auto r = devissage_check_k0(s.domain->table(), s.filter != "all" || is_pc_monoid(Monoid(s.domain->table())), s.max_size);
    out.data["devissage"] = to_json(r);
    t << "K0 = " << r.k0.str(" + ") << " (" << r.objects << " objects); expected " << r.expected.str(" + ") << " from "
      << r.expected_source << "\n";
    t << "classes by length: " << yes(r.classes_match_length) << "\n";
    return r.match ? ok : check_failed;
  }
  K0Presentation p = k0_of_objects(s.objects);
  out.data["k0"] = group_to_json(p.k0());
  out.data["objects"] = s.objects.size();
  out.data["classes"] = p.classes.size();
  t << "K0 = " << p.k0().str(" + ") << " (" << s.objects.size() << " objects, " << p.classes.size() << " classes)\n";
  if (!s.serre) return ok;
  require_serre(*s.serre, s.objects, f);
  auto r = localization_exactness_k0(s.objects, *s.serre);
  out.data["localization"] = to_json(r);
  t << "K0(C) = " << r.k0_c.str(" + ") << " -> K0(M) = " << r.k0_m.str(" + ") << " -> K0(M/C) = " << r.k0_mc.str(" + ")
    << " -> 0\n";
  t << "complex: " << yes(r.composite_zero) << ", exact at K0(M): " << yes(r.exact_middle) << ", surjective: " << yes(r.surjective)
    << "\n";
  return r.ok() ? ok : check_failed;
}

int dvm(const std::string& file, const Flags& f, Output& out) {
  UnitGroup g = units_from_json(read_json_file(file));
  if (!g.finite()) throw invalid_monoid_error("the unit group of a DVM here must be finite");
  auto r = dvm_report(g, f.constants());
  out.data = to_json(r);
  auto& t = out.text;
  t << "E1(0,0) = " << r.e1_00.str(" + ") << ", E1(0,-1) = " << r.e1_0m1.str(" + ") << ", E1(1,-1) = " << r.e1_1m1.str(" + ")
    << "\n";
  t << "d1: [t] -> " << r.t_image << ", surjective: " << yes(r.d1_surjective) << "\n";
  t << "K'0 = " << r.k0_prime.str(" + ") << ", K'1 = " << r.k1_prime.str(" + ") << "\n";
  for (const auto& n : r.notes) t << "note: " << n << "\n";
  return r.d1_surjective && r.matches_k_gamma ? ok : check_failed;
}

int selftest(const Flags& f, const std::string& fixtures, const std::vector<int>& only, Output& out) {
  SelftestOptions o;
  o.max_size = f.max_size;
  o.seed = f.seed;
  o.constants = f.constants();
  o.only = only;
  auto results = run_selftest(o);
  bool all = true;
  json list = json::array();
  for (const auto& r : results) {
    all &= r.pass;
    list.push_back({{"id", r.id},
                    {"name", r.name},
                    {"pass", r.pass},
                    {"expected", r.expected},
                    {"computed", r.computed},
                    {"seconds", r.seconds},
                    {"limit_seconds", r.limit},
                    {"failures", r.failures}});
    out.text << format_result(r) << "\n";
  }
  FixtureReport fx = check_fixtures(fixtures);
  bool fixtures_ok = fx.ok() && fx.files > 0;
  all &= fixtures_ok;
  out.text << (fixtures_ok ? "PASS " : "FAIL ") << " F  fixtures in " << fixtures << ": " << fx.files << " files, "
           << fx.problems.size() << " problems\n";
  for (const auto& p : fx.problems) out.text << "      " << p << "\n";
  out.data["criteria"] = list;
  out.data["fixtures"] = {{"dir", fixtures}, {"files", fx.files}, {"problems", fx.problems}, {"pass", fixtures_ok}};
  out.data["pass"] = all;
  return all ? ok : check_failed;
}

int guarded(const std::function<int()>& f, std::string& error, const char*& type) {
  auto fail = [&](const std::exception& e, const char* t, int code) {
    error = e.what();
    type = t;
    return code;
  };
  try {
    return f();
  } catch (const parse_error& e) {
    return fail(e, "parse_error", parse_failure);
  } catch (const json::exception& e) {
    return fail(e, "parse_error", parse_failure);
  } catch (const invalid_monoid_error& e) {
    return fail(e, "invalid_monoid", invalid_input);
  } catch (const invalid_action_error& e) {
    return fail(e, "invalid_action", invalid_input);
  } catch (const not_serre_error& e) {
    return fail(e, "not_serre", not_serre);
  } catch (const not_normal_error& e) {
    return fail(e, "not_normal", not_normal);
  } catch (const not_zero_smooth_error& e) {
    return fail(e, "not_zero_smooth", not_normal);
  } catch (const closure_bound_error& e) {
    return fail(e, "closure_bound", closure_bound);
  } catch (const undecidable_error& e) {
    return fail(e, "undecidable", undecidable);
  } catch (const std::exception& e) {
    return fail(e, "error", check_failed);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partially cancellative monoid schemes: monoids, A-sets, Serre quotients and K-theory at pi_0"};
  app.require_subcommand(1);
  Flags flags;
  app.add_flag("--json", flags.json, "Machine-readable output");
  app.add_option("--max-size", flags.max_size, "Corpus bound (elements per A-set)")->check(CLI::PositiveNumber);
  app.add_option("--pi1s", flags.pi1s, "Order of pi_1 of the sphere spectrum (0 for Z)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", flags.seed, "Seed for randomized checks");

  std::string command;
  std::function<int(Output&)> action;
  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  std::string a1, a2;
  auto* mi = sub("monoid-info", "Validity, primes, units and regularity flags of a monoid");
  mi->add_option("monoid", a1, "Monoid file or built-in id")->required();
  mi->callback([&] { action = [&](Output& o) { return monoid_info(a1, o); }; command = "monoid-info"; });

  auto* ac = sub("aset-check", "pc, length, support and filtration of an A-set");
  ac->add_option("monoid", a1, "Monoid file or built-in id")->required();
  ac->add_option("aset", a2, "A-set file")->required();
  ac->callback([&] { action = [&](Output& o) { return aset_check(a1, a2, o); }; command = "aset-check"; });

  auto* q = sub("quotient", "Morphisms of the quotient category M/C");
  q->require_subcommand(1);
  std::vector<std::string> qfiles;
  auto qsub = [&](const char* name, const char* help, const char* args, std::size_t n,
                  int (*fn)(const std::vector<std::string>&, const Flags&, Output&)) {
    auto* s = q->add_subcommand(name, help);
    s->fallthrough();
    s->add_option("files", qfiles, args)->required()->expected(static_cast<int>(n));
    s->callback([&, fn, name] {
      action = [&, fn](Output& o) { return fn(qfiles, flags, o); };
      command = std::string("quotient ") + name;
    });
  };
  qsub("hom", "Hom(X, Y) in M/C", "MONOID SERRE X Y", 4, quotient_hom);
  qsub("compose", "Composition Hom(Y, Z) x Hom(X, Y) -> Hom(X, Z)", "MONOID SERRE X Y Z", 5, quotient_compose);
  qsub("check-w", "Filteredness of the index categories over V", "MONOID SERRE V", 3, quotient_check_w);
  qsub("equivalence", "Quotient by support in Z against localization", "MONOID SERRE", 2, quotient_equivalence);

  auto* c = sub("cl", "Class group of a normal affine monoid");
  c->add_option("monoid", a1, "Monoid file or built-in id")->required();
  c->callback([&] { action = [&](Output& o) { return cl(a1, o); }; command = "cl"; });

  auto* g = sub("gersten", "Coniveau graded pieces, K'0 and the Gersten row");
  g->add_option("monoid", a1, "Monoid file or built-in id")->required();
  g->callback([&] { action = [&](Output& o) { return gersten(a1, flags, o); }; command = "gersten"; });

  auto* k = sub("k0", "K0 of a finite category of A-sets and the localization sequence");
  k->add_option("catspec", a1, "Category spec file")->required();
  k->callback([&] { action = [&](Output& o) { return k0(a1, flags, o); }; command = "k0"; });

  auto* d = sub("dvm", "K'0 and K'1 of a discrete valuation monoid");
  d->add_option("units", a1, "Unit group spec file")->required();
  d->callback([&] { action = [&](Output& o) { return dvm(a1, flags, o); }; command = "dvm"; });

  std::string fixtures = PCMK_FIXTURES_DIR;
  std::vector<int> only;
  auto* st = sub("selftest", "Acceptance suite and bundled fixtures");
  st->add_option("--fixtures", fixtures, "Fixture directory");
  st->add_option("--criteria", only, "Run only these criteria");
  st->callback([&] { action = [&](Output& o) { return selftest(flags, fixtures, only, o); }; command = "selftest"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return parse_failure;
  }

  Output out;
  std::string error;
  const char* type = "";
  int code = guarded([&] { return action(out); }, error, type);
  if (flags.json) {
    json j = {{"schema_version", schema_version}, {"command", command}, {"exit_code", code}};
    if (!error.empty())
      j["error"] = {{"type", type}, {"message", error}};
    else
      j["result"] = out.data;
    std::cout << j.dump(2) << std::endl;
  } else {
    std::cout << out.text.str();
  }
  if (!error.empty()) std::cerr << "error: " << error << std::endl;
  return code;
}
