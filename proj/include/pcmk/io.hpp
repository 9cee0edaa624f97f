#ifndef PCMK_IO_HPP
#define PCMK_IO_HPP

#include "pcmk/ktheory.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pcmk {

using json = nlohmann::json;

/// Malformed input: bad JSON, missing fields, wrong types, unknown names.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::filesystem::path& path);

// ---------------------------------------------------------------- monoids

/// {"kind":"finite",...} or {"kind":"affine",...}. Table keys are "a,b"; one of "a,b" and "b,a"
/// suffices, and products with one and zero may be omitted.
Monoid monoid_from_json(const json& j);
json monoid_to_json(const Monoid& m);

/// Built-in ids: F1, *, N, N^n, N/(t^n), Z/a x Z/b ...+ (group monoids), Z/a x ...+ ^ N^n.
std::optional<Monoid> builtin_monoid(const std::string& id);
/// A built-in id, an inline object, or a path relative to `base`.
Monoid resolve_monoid(const json& ref, const std::filesystem::path& base = {});
Monoid load_monoid(const std::filesystem::path& path);

// ---------------------------------------------------------------- A-sets

/// {"elements":[...],"base":"*","action":{"g":{"x":"y",...}}}; unlisted elements are fixed.
FiniteASet aset_from_json(const json& j, const Domain& d);
json aset_to_json(const FiniteASet& x, const std::string& monoid_ref = {});
FiniteASet load_aset(const std::filesystem::path& path, const Domain& d);
/// Domain named by the file's "monoid" field.
Domain aset_domain(const std::filesystem::path& path);

// ---------------------------------------------------------------- Serre predicates

SerrePredicate predicate_from_json(const json& j, const Domain& d);
json predicate_to_json(const SerrePredicate& c);

// ---------------------------------------------------------------- K-theory inputs and outputs

/// {"monoid":ref, "objects":[A-set,...] | "max_size":n, "filter":"all"|"pc"|"finite_length"|"pc_finite_length",
///  "serre":predicate?, "devissage":bool?}
struct CatSpec {
  Domain domain;
  std::vector<FiniteASet> objects;
  std::optional<SerrePredicate> serre;
  bool devissage = false;
  int max_size = 0;
  std::string filter = "all";
};
CatSpec catspec_from_json(const json& j, const std::filesystem::path& base = {}, std::optional<int> max_size = {});

/// {"free_rank":r,"torsion":[...]}
UnitGroup units_from_json(const json& j);
json units_to_json(const UnitGroup& g);

/// {"free_rank":r} and/or {"torsion":[...]}; the trivial group is {"free_rank":0}.
json group_to_json(const AbelianGroup& g);
json matrix_to_json(const IntegerMatrix& m);

json to_json(const ConiveauReport& r);
json to_json(const DvmReport& r);
json to_json(const GerstenReport& r);
json to_json(const LocalizationK0Report& r);
json to_json(const DevissageReport& r);

/// Same monoid up to renaming (finite) or equal data (affine).
bool equivalent(const Monoid& a, const Monoid& b);

struct FixtureReport {
  std::size_t files = 0;
  std::vector<std::string> problems;  // "path: message"
  bool ok() const { return problems.empty(); }
};
/// Parses, validates and round-trips every file under monoids/, asets/, predicates/, catspecs/ and units/.
FixtureReport check_fixtures(const std::filesystem::path& dir);

}  // namespace pcmk

#endif  // PCMK_IO_HPP
