#pragma once

#include <string>
#include <vector>

#include "ctpair/errors.hpp"

namespace ctpair {

// A finite group given by its multiplication table; elements are indices.
struct FiniteGroup {
  int n = 1;
  std::vector<int> table;   // n*n, table[a*n+b] = a*b
  int identity = 0;
  std::vector<int> inverse; // per element

  static FiniteGroup from_table(std::vector<std::vector<int>> rows);
  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  static FiniteGroup klein_four();
  static FiniteGroup symmetric3();
  static FiniteGroup dihedral(int n); // order 2n
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);

  int mul(int a, int b) const { return table[static_cast<size_t>(a) * n + b]; }
  int inv(int a) const { return inverse[a]; }
  int order_of(int a) const;
  bool valid(std::string* why = nullptr) const;
  bool operator==(const FiniteGroup& o) const { return n == o.n && table == o.table; }
};

// Subgroup as a sorted member list; local indices are positions in `members`.
struct Subgroup {
  FiniteGroup parent;
  std::vector<int> members; // sorted parent indices, identity included

  static Subgroup full(const FiniteGroup& g);
  static Subgroup trivial(const FiniteGroup& g);
  static Subgroup generated(const FiniteGroup& g, const std::vector<int>& gens);

  int size() const { return static_cast<int>(members.size()); }
  int parent_of(int local) const { return members[local]; }
  int local_of(int parent_idx) const; // throws NotASubgroup-ish if missing
  bool contains_parent(int parent_idx) const;
  int mul(int a, int b) const { return local_of(parent.mul(members[a], members[b])); }
  int inv(int a) const { return local_of(parent.inv(members[a])); }
  int identity_local() const { return local_of(parent.identity); }
  bool is_subgroup_of(const Subgroup& other) const; // same parent, members subset
  bool operator==(const Subgroup& o) const { return parent == o.parent && members == o.members; }
};

std::vector<Subgroup> all_subgroups(const FiniteGroup& g);

} // namespace ctpair
