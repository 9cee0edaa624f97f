#include "pcmk/aset.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace pcmk {

namespace {

std::size_t U(int i) { return static_cast<std::size_t>(i); }

bool bijective(const std::vector<int>& f, int target_size) {
  return static_cast<int>(f.size()) == target_size && injective(f);
}

std::vector<int> after(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  for (int v : b) out.push_back(a[U(v)]);
  return out;
}

// Whether every element of `coarse`'s relation contains the classes of `fine`.
bool refines(const std::vector<int>& fine, const std::vector<int>& coarse) {
  for (std::size_t i = 0; i < fine.size(); ++i)
    for (std::size_t j = i + 1; j < fine.size(); ++j)
      if (fine[i] == fine[j] && coarse[i] != coarse[j]) return false;
  return true;
}

std::vector<int> meet(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = static_cast<int>(i);
    for (std::size_t j = 0; j < i; ++j)
      if (a[i] == a[j] && b[i] == b[j]) {
        out[i] = out[j];
        break;
      }
  }
  return out;
}

}  // namespace

bool commutes(const MESquare& sq) {
  return after(sq.right.map, sq.bottom.map) == after(sq.top.map, sq.left.map);
}

bool is_distinguished_square(const MESquare& sq) {
  if (!commutes(sq) || !injective(sq.top.map) || !injective(sq.bottom.map)) return false;
  if (!surjective(sq.left.map, sq.left.target.size()) || !surjective(sq.right.map, sq.right.target.size())) return false;
  ASetMap lower = cokernel(sq.bottom);
  ASetMap upper = cokernel(sq.top);
  // Induced map Y'/X' -> Y/X.
  ASetMap through{sq.right.source, upper.target, after(upper.map, sq.right.map)};
  auto induced = descend(lower, through);
  return induced && bijective(*induced, upper.target.size());
}

bool is_pullback_square(const MESquare& sq) {
  if (!commutes(sq)) return false;
  Pullback p = pullback(sq.top, sq.right);
  std::vector<int> cmp;
  for (int e = 0; e < sq.left.source.size(); ++e) {
    int a = sq.left.map[U(e)], b = sq.bottom.map[U(e)];
    int hit = -1;
    for (int i = 0; i < p.object.size(); ++i)
      if (p.to_x[U(i)] == a && p.to_y[U(i)] == b) hit = i;
    cmp.push_back(hit);
  }
  return bijective(cmp, p.object.size());
}

bool is_pushout_square(const MESquare& sq) {
  if (!commutes(sq)) return false;
  Pushout q = pushout(sq.left, sq.bottom);
  std::vector<int> cmp(U(q.object.size()), -1);
  auto put = [&](int slot, int v) {
    if (cmp[U(slot)] >= 0 && cmp[U(slot)] != v) return false;
    cmp[U(slot)] = v;
    return true;
  };
  for (int a = 0; a < sq.top.source.size(); ++a)
    if (!put(q.from_x[U(a)], sq.top.map[U(a)])) return false;
  for (int b = 0; b < sq.right.source.size(); ++b)
    if (!put(q.from_y[U(b)], sq.right.map[U(b)])) return false;
  return bijective(cmp, sq.top.target.size());
}

KeyDiagram key_diagram(const FiniteASet& x, Mask sub1, Mask sub2) {
  if (!is_subobject(x, sub1) || !is_subobject(x, sub2)) throw invalid_action_error("key diagram needs two subobjects");
  KeyDiagram k;
  k.x = x;
  k.x1 = sub1;
  k.x2 = sub2;
  k.x12 = sub1 & sub2;
  k.xp = sub1 | sub2;
  k.q1 = rees_quotient(x, k.x1);
  k.q2 = rees_quotient(x, k.x2);
  k.q12 = rees_quotient(x, k.x12);
  k.q = rees_quotient(x, k.xp);
  k.seq12 = exact_sequence(x, k.x12);
  k.seqp = exact_sequence(x, k.xp);
  return k;
}

KeyDiagram key_diagram(const FiniteASet& x, const ExactSeq& s1, const ExactSeq& s2) {
  if (s1.i.target.names != x.names || s2.i.target.names != x.names || s1.i.target.action != x.action ||
      s2.i.target.action != x.action)
    throw invalid_action_error("exact sequences do not have the given middle object");
  return key_diagram(x, image_mask(s1.i), image_mask(s2.i));
}

namespace {

// Maps between quotients of X induced by the identity of X.
ASetMap between(const ASetMap& from, const ASetMap& to) {
  auto h = descend(from, to);
  if (!h) throw invalid_action_error("quotients are not comparable");
  return {from.target, to.target, *h};
}

// Hom-sets between probes and the objects of one diagram, keyed by the actions involved.
class HomCache {
 public:
  const std::vector<std::vector<int>>& get(const FiniteASet& from, const FiniteASet& to) {
    auto key = std::make_tuple(from.size(), from.action, to.size(), to.action);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(std::move(key), homs(from, to)).first;
    return it->second;
  }

 private:
  std::map<std::tuple<int, std::vector<Transformation>, int, std::vector<Transformation>>, std::vector<std::vector<int>>> cache_;
};

// Cones over a cospan a -> c <- b correspond bijectively to maps into the candidate p.
// Commuting pairs are counted by grouping on the composite into c.
bool pullback_universal(const ASetMap& pa, const ASetMap& pb, const ASetMap& a, const ASetMap& b,
                        const std::vector<FiniteASet>& probes, HomCache& cache) {
  for (const auto& t : probes) {
    const auto& to_a = cache.get(t, a.source);
    const auto& to_b = cache.get(t, b.source);
    const auto& to_p = cache.get(t, pa.source);
    std::map<std::vector<int>, std::size_t> left;
    for (const auto& u : to_a) ++left[after(a.map, u)];
    std::size_t cones = 0;
    for (const auto& v : to_b) {
      auto it = left.find(after(b.map, v));
      if (it != left.end()) cones += it->second;
    }
    if (to_p.size() != cones) return false;
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    for (const auto& w : to_p) {
      auto u = after(pa.map, w), v = after(pb.map, w);
      if (after(a.map, u) != after(b.map, v) || !seen.emplace(std::move(u), std::move(v)).second) return false;
    }
  }
  return true;
}

// Cocones under a span a <- s -> b correspond bijectively to maps out of the candidate q.
bool pushout_universal(const ASetMap& a, const ASetMap& b, const ASetMap& qa, const ASetMap& qb,
                       const std::vector<FiniteASet>& probes, HomCache& cache) {
  for (const auto& t : probes) {
    const auto& from_a = cache.get(a.target, t);
    const auto& from_b = cache.get(b.target, t);
    const auto& from_q = cache.get(qa.target, t);
    std::map<std::vector<int>, std::size_t> left;
    for (const auto& u : from_a) ++left[after(u, a.map)];
    std::size_t cocones = 0;
    for (const auto& v : from_b) {
      auto it = left.find(after(v, b.map));
      if (it != left.end()) cocones += it->second;
    }
    if (from_q.size() != cocones) return false;
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    for (const auto& w : from_q) {
      auto u = after(w, qa.map), v = after(w, qb.map);
      if (after(u, a.map) != after(v, b.map) || !seen.emplace(std::move(u), std::move(v)).second) return false;
    }
  }
  return true;
}

// Map between two subobjects of X (the first contained in the second).
ASetMap sub_to_sub(const ASetMap& small, const ASetMap& big) {
  std::vector<int> m;
  for (int v : small.map) {
    auto it = std::find(big.map.begin(), big.map.end(), v);
    if (it == big.map.end()) throw invalid_action_error("subobjects are not nested");
    m.push_back(static_cast<int>(it - big.map.begin()));
  }
  return {small.source, big.source, m};
}

}  // namespace

KeyDiagramReport check_key_diagram(const KeyDiagram& k, const std::vector<FiniteASet>& probes) {
  KeyDiagramReport r;
  HomCache cache;
  r.rows_exact = is_exact(k.seq12) && is_exact(k.seqp);

  ASetMap s1 = sub_inclusion(k.x, k.x1), s2 = sub_inclusion(k.x, k.x2);
  ASetMap s12 = sub_inclusion(k.x, k.x12), sp = sub_inclusion(k.x, k.xp);
  ASetMap s12_1 = sub_to_sub(s12, s1), s12_2 = sub_to_sub(s12, s2);
  ASetMap s1_p = sub_to_sub(s1, sp), s2_p = sub_to_sub(s2, sp);

  // Top-left: X'_12 -> X'_1, X'_2 -> X and X'_1, X'_2 -> X'.
  {
    Pullback p = pullback(s1, s2);
    std::vector<int> cmp;
    for (int e = 0; e < s12.source.size(); ++e) {
      int hit = -1;
      for (int i = 0; i < p.object.size(); ++i)
        if (p.to_x[U(i)] == s12_1.map[U(e)] && p.to_y[U(i)] == s12_2.map[U(e)]) hit = i;
      cmp.push_back(hit);
    }
    r.top_left_pullback = bijective(cmp, p.object.size()) && pullback_universal(s12_1, s12_2, s1, s2, probes, cache);
    // Pushout of X'_1 <- X'_12 -> X'_2 compared with X'.
    Pushout q = pushout(s12_1, s12_2);
    std::vector<int> cmp2(U(q.object.size()), -1);
    bool ok = true;
    for (int a = 0; a < s1.source.size(); ++a) {
      int& slot = cmp2[U(q.from_x[U(a)])];
      ok &= slot < 0 || slot == s1_p.map[U(a)];
      slot = s1_p.map[U(a)];
    }
    for (int b = 0; b < s2.source.size(); ++b) {
      int& slot = cmp2[U(q.from_y[U(b)])];
      ok &= slot < 0 || slot == s2_p.map[U(b)];
      slot = s2_p.map[U(b)];
    }
    r.top_left_pushout = ok && bijective(cmp2, sp.source.size()) && pushout_universal(s12_1, s12_2, s1_p, s2_p, probes, cache);
  }

  // Bottom-right: X''_12 -> X''_1, X''_2 -> X''.
  {
    ASetMap a = between(k.q12, k.q1), b = between(k.q12, k.q2);
    ASetMap c = between(k.q1, k.q), d = between(k.q2, k.q);
    Pushout q = pushout(a, b);
    std::vector<int> cmp(U(q.object.size()), -1);
    bool ok = true;
    for (int e = 0; e < a.target.size(); ++e) {
      int& slot = cmp[U(q.from_x[U(e)])];
      ok &= slot < 0 || slot == c.map[U(e)];
      slot = c.map[U(e)];
    }
    for (int e = 0; e < b.target.size(); ++e) {
      int& slot = cmp[U(q.from_y[U(e)])];
      ok &= slot < 0 || slot == d.map[U(e)];
      slot = d.map[U(e)];
    }
    r.bottom_right_pushout = ok && bijective(cmp, k.q.target.size()) && pushout_universal(a, b, c, d, probes, cache);

    Pullback p = pullback(c, d);
    std::vector<int> cmp2;
    for (int e = 0; e < a.source.size(); ++e) {
      int hit = -1;
      for (int i = 0; i < p.object.size(); ++i)
        if (p.to_x[U(i)] == a.map[U(e)] && p.to_y[U(i)] == b.map[U(e)]) hit = i;
      cmp2.push_back(hit);
    }
    r.bottom_right_set_pullback = bijective(cmp2, p.object.size()) && pullback_universal(a, b, c, d, probes, cache);

    // Among quotients of X, maps under X are inclusions of congruences.
    const auto& k1 = k.q1.map;
    const auto& k2 = k.q2.map;
    const auto& k12 = k.q12.map;
    bool quot = refines(k12, k1) && refines(k12, k2) && refines(meet(k1, k2), k12);
    for (const auto& cong : congruences(k.x)) {
      if (!quot) break;
      if (refines(cong, k1) && refines(cong, k2)) quot = refines(cong, k12);
    }
    r.bottom_right_quotient_pullback = quot;
  }
  return r;
}

}  // namespace pcmk
