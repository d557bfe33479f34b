#include "ctpair/group.hpp"

#include <algorithm>
#include <set>

namespace ctpair {

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> rows) {
  FiniteGroup g;
  g.n = static_cast<int>(rows.size());
  g.table.assign(static_cast<size_t>(g.n) * g.n, 0);
  for (int i = 0; i < g.n; ++i) {
    if (static_cast<int>(rows[i].size()) != g.n)
      fail(errc::parse_error, "multiplication table is not square");
    for (int j = 0; j < g.n; ++j) {
      int v = rows[i][j];
      if (v < 0 || v >= g.n) fail(errc::parse_error, "table entry out of range");
      g.table[static_cast<size_t>(i) * g.n + j] = v;
    }
  }
  // locate the identity
  g.identity = -1;
  for (int e = 0; e < g.n; ++e) {
    bool ok = true;
    for (int a = 0; a < g.n && ok; ++a)
      if (g.mul(e, a) != a || g.mul(a, e) != a) ok = false;
    if (ok) { g.identity = e; break; }
  }
  if (g.identity < 0) fail(errc::parse_error, "table has no identity element");
  g.inverse.assign(g.n, -1);
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      if (g.mul(a, b) == g.identity && g.mul(b, a) == g.identity) { g.inverse[a] = b; break; }
  for (int a = 0; a < g.n; ++a)
    if (g.inverse[a] < 0) fail(errc::parse_error, "element has no two-sided inverse");
  std::string why;
  if (!g.valid(&why)) fail(errc::parse_error, "invalid group table: " + why);
  return g;
}

FiniteGroup FiniteGroup::trivial() { return cyclic(1); }

FiniteGroup FiniteGroup::cyclic(int n) {
  std::vector<std::vector<int>> rows(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows[i][j] = (i + j) % n;
  return from_table(std::move(rows));
}

FiniteGroup FiniteGroup::klein_four() {
  return product(cyclic(2), cyclic(2));
}

FiniteGroup FiniteGroup::symmetric3() { return dihedral(3); }

FiniteGroup FiniteGroup::dihedral(int n) {
  // elements: r^i (indices 0..n-1), s r^i (indices n..2n-1); s r s = r^{-1}
  int m = 2 * n;
  std::vector<std::vector<int>> rows(m, std::vector<int>(m));
  auto enc = [n](int flip, int rot) { return flip * n + ((rot % n) + n) % n; };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      int fa = a / n, ra = a % n, fb = b / n, rb = b % n;
      // (s^fa r^ra)(s^fb r^rb) = s^{fa+fb} r^{rb + (fb ? -ra : ra)}
      int rot = fb ? rb - ra : rb + ra;
      rows[a][b] = enc((fa + fb) % 2, rot);
    }
  return from_table(std::move(rows));
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
  int m = a.n * b.n;
  std::vector<std::vector<int>> rows(m, std::vector<int>(m));
  auto enc = [&](int x, int y) { return x * b.n + y; };
  for (int x1 = 0; x1 < a.n; ++x1)
    for (int y1 = 0; y1 < b.n; ++y1)
      for (int x2 = 0; x2 < a.n; ++x2)
        for (int y2 = 0; y2 < b.n; ++y2)
          rows[enc(x1, y1)][enc(x2, y2)] = enc(a.mul(x1, x2), b.mul(y1, y2));
  return from_table(std::move(rows));
}

int FiniteGroup::order_of(int a) const {
  int x = a, o = 1;
  while (x != identity) {
    x = mul(x, a);
    ++o;
  }
  return o;
}

bool FiniteGroup::valid(std::string* why) const {
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
          if (why) *why = "associativity fails";
          return false;
        }
  for (int a = 0; a < n; ++a) {
    if (mul(identity, a) != a || mul(a, identity) != a) {
      if (why) *why = "identity law fails";
      return false;
    }
    if (mul(a, inverse[a]) != identity) {
      if (why) *why = "inverse law fails";
      return false;
    }
  }
  return true;
}

Subgroup Subgroup::full(const FiniteGroup& g) {
  Subgroup s{g, {}};
  s.members.resize(g.n);
  for (int i = 0; i < g.n; ++i) s.members[i] = i;
  return s;
}

Subgroup Subgroup::trivial(const FiniteGroup& g) { return Subgroup{g, {g.identity}}; }

Subgroup Subgroup::generated(const FiniteGroup& g, const std::vector<int>& gens) {
  std::set<int> got{g.identity};
  std::vector<int> frontier{g.identity};
  for (int x : gens)
    if (got.insert(x).second) frontier.push_back(x);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(got.begin(), got.end());
    for (int a : cur)
      for (int b : cur) {
        int c = g.mul(a, b);
        if (got.insert(c).second) grew = true;
      }
  }
  Subgroup s{g, std::vector<int>(got.begin(), got.end())};
  return s;
}

int Subgroup::local_of(int parent_idx) const {
  auto it = std::lower_bound(members.begin(), members.end(), parent_idx);
  if (it == members.end() || *it != parent_idx)
    fail(errc::not_a_subgroup, "element not in subgroup");
  return static_cast<int>(it - members.begin());
}

bool Subgroup::contains_parent(int parent_idx) const {
  return std::binary_search(members.begin(), members.end(), parent_idx);
}

bool Subgroup::is_subgroup_of(const Subgroup& other) const {
  if (!(parent == other.parent)) return false;
  return std::includes(other.members.begin(), other.members.end(), members.begin(),
                       members.end());
}

std::vector<Subgroup> all_subgroups(const FiniteGroup& g) {
  std::set<std::vector<int>> seen;
  std::vector<Subgroup> out;
  auto add = [&](const Subgroup& s) {
    if (seen.insert(s.members).second) out.push_back(s);
  };
  add(Subgroup::trivial(g));
  // closure of up to 2 generators covers every subgroup for |G| <= 24 desk groups;
  // go to 3 to be safe for the Klein-type products
  for (int a = 0; a < g.n; ++a) {
    add(Subgroup::generated(g, {a}));
    for (int b = a; b < g.n; ++b) {
      add(Subgroup::generated(g, {a, b}));
      for (int c = b; c < g.n; ++c) add(Subgroup::generated(g, {a, b, c}));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Subgroup& x, const Subgroup& y) { return x.members < y.members; });
  return out;
}

} // namespace ctpair
