#include "pcmk/io.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <set>

namespace pcmk {

namespace {

std::size_t U(int i) { return static_cast<std::size_t>(i); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw parse_error("expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw parse_error(std::string("missing field \"") + key + "\"");
  return *it;
}

template <typename T>
T get(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw parse_error(std::string("bad ") + what + ": " + e.what());
  }
}

std::vector<std::string> split_pair(const std::string& key) {
  auto comma = key.find(',');
  if (comma == std::string::npos || key.find(',', comma + 1) != std::string::npos)
    throw parse_error("table key is not a pair: " + key);
  return {key.substr(0, comma), key.substr(comma + 1)};
}

FiniteMonoid finite_from_json(const json& j) {
  FiniteMonoid m;
  m.elements = get<std::vector<std::string>>(field(j, "elements"), "elements");
  auto index = [&](const std::string& name) {
    int i = m.index_of(name);
    if (i < 0) throw parse_error("unknown element " + name);
    return i;
  };
  m.one = index(get<std::string>(field(j, "one"), "one"));
  m.zero = index(get<std::string>(field(j, "zero"), "zero"));
  const int n = m.size();
  m.table.assign(U(n), std::vector<int>(U(n), -1));
  const json& t = field(j, "table");
  if (!t.is_object()) throw parse_error("table must be an object");
  for (const auto& [key, value] : t.items()) {
    auto ab = split_pair(key);
    int a = index(ab[0]), b = index(ab[1]);
    int c = index(get<std::string>(value, "table entry"));
    for (auto [p, q] : {std::pair{a, b}, std::pair{b, a}}) {
      int& cell = m.table[U(p)][U(q)];
      if (cell >= 0 && cell != c) throw invalid_monoid_error("conflicting products for " + key);
      cell = c;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int& cell = m.table[U(a)][U(b)];
      int implied = a == m.zero || b == m.zero ? m.zero : a == m.one ? b : b == m.one ? a : -1;
      if (implied >= 0 && cell >= 0 && cell != implied)
        throw invalid_monoid_error("product " + m.elements[U(a)] + "," + m.elements[U(b)] + " contradicts the unit or zero");
      if (cell < 0) cell = implied;
      if (cell < 0) throw parse_error("missing product " + m.elements[U(a)] + "," + m.elements[U(b)]);
    }
  return m;
}

AffineMonoid affine_from_json(const json& j) {
  AffineMonoid m;
  m.dim = get<int>(field(j, "dim"), "dim");
  if (m.dim < 0) throw parse_error("negative dim");
  auto gens = get<std::vector<std::vector<std::int64_t>>>(field(j, "generators"), "generators");
  m.generators = LatticeMatrix::Zero(m.dim, static_cast<Eigen::Index>(gens.size()));
  for (std::size_t c = 0; c < gens.size(); ++c) {
    if (gens[c].size() != U(m.dim)) throw parse_error("generator of the wrong length");
    for (int r = 0; r < m.dim; ++r) m.generators(r, static_cast<Eigen::Index>(c)) = gens[c][U(r)];
  }
  if (j.contains("units")) m.units = units_from_json(j["units"]);
  if (j.contains("ideal"))
    for (const auto& v : get<std::vector<std::vector<std::int64_t>>>(j["ideal"], "ideal")) {
      if (v.size() != U(m.dim)) throw parse_error("ideal point of the wrong length");
      m.ideal.push_back(Eigen::Map<const LatticeVector>(v.data(), m.dim));
    }
  return m;
}

std::vector<std::int64_t> to_int64s(const std::vector<Integer>& v) {
  std::vector<std::int64_t> out;
  for (const auto& x : v) out.push_back(to_int64(x));
  return out;
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error(path.string() + ": " + e.what());
  }
}

Monoid monoid_from_json(const json& j) {
  auto kind = get<std::string>(field(j, "kind"), "kind");
  Monoid m;
  if (kind == "finite")
    m = finite_from_json(j);
  else if (kind == "affine")
    m = affine_from_json(j);
  else
    throw parse_error("unknown monoid kind " + kind);
  auto r = validate_monoid(m);
  if (!r.ok()) throw invalid_monoid_error(r.violations.front());
  return m;
}

json monoid_to_json(const Monoid& m) {
  if (const auto* f = std::get_if<FiniteMonoid>(&m)) {
    json t = json::object();
    for (int a = 0; a < f->size(); ++a)
      for (int b = a; b < f->size(); ++b)
        t[f->elements[U(a)] + "," + f->elements[U(b)]] = f->elements[U(f->mul(a, b))];
    return {{"kind", "finite"},
            {"elements", f->elements},
            {"one", f->elements[U(f->one)]},
            {"zero", f->elements[U(f->zero)]},
            {"table", t}};
  }
  const auto& a = std::get<AffineMonoid>(m);
  json gens = json::array();
  for (Eigen::Index c = 0; c < a.generators.cols(); ++c) {
    std::vector<std::int64_t> v(a.generators.col(c).data(), a.generators.col(c).data() + a.dim);
    gens.push_back(v);
  }
  json ideal = json::array();
  for (const auto& v : a.ideal) ideal.push_back(std::vector<std::int64_t>(v.data(), v.data() + v.size()));
  return {{"kind", "affine"}, {"dim", a.dim}, {"generators", gens}, {"units", units_to_json(a.units)}, {"ideal", ideal}};
}

std::optional<Monoid> builtin_monoid(const std::string& id) {
  static const std::regex power(R"(N(?:\^(\d+))?)");
  static const std::regex truncated(R"(N/\(t\^(\d+)\))");
  static const std::regex group(R"(\((Z/\d+(?:xZ/\d+)*)\)\+(?:\^N(?:\^(\d+))?)?)");
  std::smatch mt;
  if (id == "F1") return field_with_one();
  if (id == "*") return terminal_monoid();
  if (std::regex_match(id, mt, power)) return free_monoid(mt[1].matched ? std::stoi(mt[1]) : 1);
  if (std::regex_match(id, mt, truncated)) return truncated_polynomial(std::stoi(mt[1]));
  if (std::regex_match(id, mt, group)) {
    std::vector<std::int64_t> orders;
    static const std::regex cyc(R"(Z/(\d+))");
    std::string g = mt[1];
    for (auto it = std::sregex_iterator(g.begin(), g.end(), cyc); it != std::sregex_iterator(); ++it)
      orders.push_back(std::stoll((*it)[1]));
    if (mt[0].str().find("^N") == std::string::npos) return finite_group_monoid(orders);
    return free_monoid(mt[2].matched ? std::stoi(mt[2]) : 1, UnitGroup::from_orders(0, orders));
  }
  return std::nullopt;
}

Monoid resolve_monoid(const json& ref, const std::filesystem::path& base) {
  if (ref.is_object()) return monoid_from_json(ref);
  auto s = get<std::string>(ref, "monoid reference");
  if (auto m = builtin_monoid(s)) return *m;
  return load_monoid(base / s);
}

Monoid load_monoid(const std::filesystem::path& path) { return monoid_from_json(read_json_file(path)); }

FiniteASet aset_from_json(const json& j, const Domain& d) {
  auto elements = get<std::vector<std::string>>(field(j, "elements"), "elements");
  auto base = j.contains("base") ? get<std::string>(j["base"], "base") : std::string("*");
  auto pos = std::find(elements.begin(), elements.end(), base);
  if (pos == elements.end()) throw parse_error("base " + base + " is not an element");
  std::rotate(elements.begin(), pos, pos + 1);
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (!index.emplace(elements[i], static_cast<int>(i)).second) throw parse_error("duplicate element " + elements[i]);
  std::vector<Transformation> action(U(d->generator_count()));
  for (auto& t : action) {
    t.resize(elements.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<int>(i);
  }
  if (j.contains("action")) {
    const json& a = j["action"];
    if (!a.is_object()) throw parse_error("action must be an object");
    for (const auto& [g, images] : a.items()) {
      int gi = d->generator_index(g);
      if (gi < 0) throw invalid_action_error("unknown generator " + g);
      if (!images.is_object()) throw parse_error("action of " + g + " must be an object");
      for (const auto& [from, to] : images.items()) {
        auto target = get<std::string>(to, "action entry");
        if (!index.count(from) || !index.count(target)) throw parse_error("unknown element in the action of " + g);
        action[U(gi)][U(index[from])] = index[target];
      }
    }
  }
  return make_aset(d, elements, action);
}

json aset_to_json(const FiniteASet& x, const std::string& monoid_ref) {
  json action = json::object();
  for (int g = 0; g < x.domain->generator_count(); ++g) {
    json images = json::object();
    for (int e = 1; e < x.size(); ++e) images[x.names[U(e)]] = x.names[U(x.act(g, e))];
    action[x.domain->generator_names()[U(g)]] = images;
  }
  json j = {{"elements", x.names}, {"base", x.names[0]}, {"action", action}};
  if (!monoid_ref.empty()) j["monoid"] = monoid_ref;
  return j;
}

FiniteASet load_aset(const std::filesystem::path& path, const Domain& d) { return aset_from_json(read_json_file(path), d); }

Domain aset_domain(const std::filesystem::path& path) {
  json j = read_json_file(path);
  return make_domain(resolve_monoid(field(j, "monoid"), path.parent_path()));
}

SerrePredicate predicate_from_json(const json& j, const Domain& d) {
  auto kind = get<std::string>(field(j, "kind"), "kind");
  if (kind == "support_in") return SerrePredicate::support_in(d, get<std::vector<std::string>>(field(j, "primes"), "primes"));
  if (kind == "torsion") return SerrePredicate::torsion(d, get<std::vector<std::string>>(field(j, "mult_set"), "mult_set"));
  if (kind == "finite_length") return SerrePredicate::finite_length(d);
  if (kind == "zero") return SerrePredicate::zero(d);
  if (kind == "explicit") {
    std::vector<FiniteASet> objects;
    const json& os = field(j, "objects");
    if (!os.is_array()) throw parse_error("objects must be an array");
    for (const auto& o : os) objects.push_back(aset_from_json(o, d));
    return SerrePredicate::explicit_list(d, std::move(objects));
  }
  throw parse_error("unknown predicate kind " + kind);
}

json predicate_to_json(const SerrePredicate& c) {
  switch (c.kind) {
    case SerrePredicate::Kind::support_in:
      return {{"kind", "support_in"}, {"primes", c.primes}};
    case SerrePredicate::Kind::torsion:
      return {{"kind", "torsion"}, {"mult_set", c.mult_set}};
    case SerrePredicate::Kind::finite_length:
      return {{"kind", "finite_length"}};
    case SerrePredicate::Kind::explicit_list: {
      json os = json::array();
      for (const auto& x : c.objects) os.push_back(aset_to_json(x));
      return {{"kind", "explicit"}, {"objects", os}};
    }
  }
  return {};
}

CatSpec catspec_from_json(const json& j, const std::filesystem::path& base, std::optional<int> max_size) {
  CatSpec s;
  s.domain = make_domain(resolve_monoid(field(j, "monoid"), base));
  if (j.contains("filter")) s.filter = get<std::string>(j["filter"], "filter");
  static const std::set<std::string> filters{"all", "pc", "finite_length", "pc_finite_length"};
  if (!filters.count(s.filter)) throw parse_error("unknown filter " + s.filter);
  if (j.contains("devissage")) s.devissage = get<bool>(j["devissage"], "devissage");
  if (j.contains("max_size")) s.max_size = get<int>(j["max_size"], "max_size");
  if (max_size) s.max_size = *max_size;
  if (j.contains("objects")) {
    for (const auto& o : field(j, "objects")) s.objects.push_back(aset_from_json(o, s.domain));
  } else if (!s.devissage) {
    if (s.max_size <= 0) throw parse_error("catspec needs objects or max_size");
    for (auto& x : enumerate_asets(s.domain, s.max_size)) {
      bool keep = true;
      if (s.filter == "pc" || s.filter == "pc_finite_length") keep = is_pc_aset(x);
      if (keep && (s.filter == "finite_length" || s.filter == "pc_finite_length")) keep = has_finite_length(x);
      if (keep) s.objects.push_back(std::move(x));
    }
  }
  if (s.devissage && !s.domain->finite()) throw parse_error("devissage needs a finite monoid");
  if (s.devissage && s.max_size <= 0) throw parse_error("devissage needs max_size");
  if (j.contains("serre")) s.serre = predicate_from_json(j["serre"], s.domain);
  return s;
}

UnitGroup units_from_json(const json& j) {
  auto rank = j.contains("free_rank") ? get<std::int64_t>(j["free_rank"], "free_rank") : 0;
  auto torsion = j.contains("torsion") ? get<std::vector<std::int64_t>>(j["torsion"], "torsion") : std::vector<std::int64_t>{};
  if (rank < 0) throw parse_error("negative free_rank");
  for (auto o : torsion)
    if (o < 1) throw parse_error("torsion orders must be positive");
  return UnitGroup::from_orders(rank, torsion);
}

json units_to_json(const UnitGroup& g) { return {{"free_rank", g.free_rank}, {"torsion", g.torsion}}; }

json group_to_json(const AbelianGroup& g) {
  json j = json::object();
  if (g.free_rank > 0 || g.trivial()) j["free_rank"] = g.free_rank;
  if (!g.invariant_factors.empty()) j["torsion"] = to_int64s(g.invariant_factors);
  return j;
}

json matrix_to_json(const IntegerMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<std::int64_t> row;
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_int64(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const ConiveauReport& r) {
  json graded = json::array();
  for (const auto& g : r.graded) graded.push_back(group_to_json(g));
  json j = {{"graded", graded},
            {"class_group", group_to_json(r.class_group)},
            {"determined", r.determined},
            {"conclusion", r.conclusion},
            {"notes", r.notes}};
  if (r.determined) j["k0_prime"] = group_to_json(r.k0_prime);
  return j;
}

json to_json(const DvmReport& r) {
  return {{"gamma", units_to_json(r.gamma)},
          {"pi1s", group_to_json(r.constants.pi1s)},
          {"E1_00", group_to_json(r.e1_00)},
          {"E1_0m1", group_to_json(r.e1_0m1)},
          {"E1_1m1", group_to_json(r.e1_1m1)},
          {"d1", matrix_to_json(r.d1)},
          {"t_image", to_int64(r.t_image)},
          {"d1_surjective", r.d1_surjective},
          {"k0_prime", group_to_json(r.k0_prime)},
          {"k1_prime", group_to_json(r.k1_prime)},
          {"matches_k_gamma", r.matches_k_gamma},
          {"notes", r.notes}};
}

json to_json(const GerstenReport& r) {
  json tails = json::array();
  for (const auto& t : r.tails) tails.push_back(group_to_json(t));
  return {{"h_units", group_to_json(r.h_units)},
          {"h0", group_to_json(r.h0)},
          {"h1", group_to_json(r.h1)},
          {"tails", tails},
          {"exact", r.exact}};
}

json to_json(const LocalizationK0Report& r) {
  return {{"k0_c", group_to_json(r.k0_c)},
          {"k0_m", group_to_json(r.k0_m)},
          {"k0_mc", group_to_json(r.k0_mc)},
          {"c_classes", r.c_classes},
          {"m_classes", r.m_classes},
          {"mc_classes", r.mc_classes},
          {"composite_zero", r.composite_zero},
          {"exact_middle", r.exact_middle},
          {"surjective", r.surjective}};
}

json to_json(const DevissageReport& r) {
  return {{"k0", group_to_json(r.k0)},
          {"expected", group_to_json(r.expected)},
          {"expected_source", r.expected_source},
          {"objects", r.objects},
          {"classes_match_length", r.classes_match_length},
          {"match", r.match}};
}

bool equivalent(const Monoid& a, const Monoid& b) {
  if (a.index() != b.index()) return false;
  if (const auto* fa = std::get_if<FiniteMonoid>(&a)) return isomorphic(*fa, std::get<FiniteMonoid>(b));
  const auto& x = std::get<AffineMonoid>(a);
  const auto& y = std::get<AffineMonoid>(b);
  if (x.dim != y.dim || x.generators != y.generators || !(x.units == y.units) || x.ideal.size() != y.ideal.size()) return false;
  for (std::size_t i = 0; i < x.ideal.size(); ++i)
    if (x.ideal[i] != y.ideal[i]) return false;
  return true;
}

FixtureReport check_fixtures(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  FixtureReport r;
  auto files = [&](const char* sub) {
    std::vector<fs::path> out;
    if (fs::is_directory(dir / sub))
      for (const auto& e : fs::directory_iterator(dir / sub))
        if (e.path().extension() == ".json") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
  };
  auto attempt = [&](const fs::path& path, const std::function<void()>& f) {
    ++r.files;
    try {
      f();
    } catch (const std::exception& e) {
      r.problems.push_back(path.string() + ": " + e.what());
    }
  };
  auto fail = [](const std::string& what) { throw std::runtime_error(what); };
  for (const auto& path : files("monoids"))
    attempt(path, [&] {
      Monoid m = load_monoid(path);
      if (!equivalent(m, monoid_from_json(json::parse(monoid_to_json(m).dump())))) fail("round trip changed the monoid");
    });
  for (const auto& path : files("asets"))
    attempt(path, [&] {
      Domain d = aset_domain(path);
      FiniteASet x = load_aset(path, d);
      if (!isomorphic(x, aset_from_json(json::parse(aset_to_json(x).dump()), d))) fail("round trip changed the A-set");
    });
  for (const auto& path : files("predicates"))
    attempt(path, [&] {
      json j = read_json_file(path);
      Domain d = make_domain(resolve_monoid(j.contains("monoid") ? j["monoid"] : json("N"), path.parent_path()));
      SerrePredicate c = predicate_from_json(j, d);
      SerrePredicate back = predicate_from_json(json::parse(predicate_to_json(c).dump()), d);
      for (const auto& x : enumerate_asets(d, 3))
        if (contains(c, x) != contains(back, x)) fail("round trip changed the predicate");
    });
  for (const auto& path : files("catspecs"))
    attempt(path, [&] { catspec_from_json(read_json_file(path), path.parent_path()); });
  for (const auto& path : files("units"))
    attempt(path, [&] {
      UnitGroup g = units_from_json(read_json_file(path));
      if (!(units_from_json(json::parse(units_to_json(g).dump())) == g)) fail("round trip changed the units");
    });
  return r;
}

}  // namespace pcmk
