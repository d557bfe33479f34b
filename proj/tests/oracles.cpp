#include "oracles.hpp"

#include <algorithm>

namespace ctpair::oracle {

namespace {

struct Term {
  unsigned long long input;
  int sign;
  int actor; // parent index or -1
};
struct Constraint {
  std::vector<Term> terms;
  unsigned long long last; // largest input slot index involved
};

std::vector<Constraint> cocycle_constraints(const Subgroup& h, const GModule& m, int degree) {
  Cochain in = Cochain::zero(h, m, degree);
  Cochain out = Cochain::zero(h, m, degree + 1);
  std::vector<Constraint> cs;
  for (unsigned long long oi = 0; oi < out.tuples(); ++oi) {
    std::vector<int> tup = out.tuple_at(oi);
    Constraint c;
    c.last = 0;
    {
      std::vector<int> rest(tup.begin() + 1, tup.end());
      c.terms.push_back(Term{in.index(rest), 1, h.parent_of(tup[0])});
    }
    for (int j = 1; j <= degree; ++j) {
      std::vector<int> v;
      for (int k = 0; k < j - 1; ++k) v.push_back(tup[k]);
      v.push_back(h.mul(tup[j - 1], tup[j]));
      for (int k = j + 1; k <= degree; ++k) v.push_back(tup[k]);
      c.terms.push_back(Term{in.index(v), (j % 2 == 0) ? 1 : -1, -1});
    }
    {
      std::vector<int> head(tup.begin(), tup.begin() + degree);
      c.terms.push_back(Term{in.index(head), (degree % 2 == 0) ? -1 : 1, -1});
    }
    for (const Term& t : c.terms) c.last = std::max(c.last, t.input);
    cs.push_back(std::move(c));
  }
  return cs;
}

} // namespace

std::vector<Cochain> enumerate_cocycles(const Subgroup& h, const GModule& m, int degree) {
  Cochain proto = Cochain::zero(h, m, degree);
  unsigned long long slots = proto.tuples();
  unsigned long long msize = m.m.order_ull();
  std::vector<Elem> mel = all_elements(m.m);
  std::vector<Constraint> cs = cocycle_constraints(h, m, degree);
  std::vector<std::vector<const Constraint*>> by_last(slots);
  for (const Constraint& c : cs) by_last[c.last].push_back(&c);

  std::vector<Cochain> found;
  std::vector<unsigned long long> choice(slots, 0);
  Cochain cur = proto;
  auto ok_at = [&](unsigned long long k) {
    for (const Constraint* c : by_last[k]) {
      Elem acc = m.m.zero();
      for (const Term& t : c->terms) {
        Elem v = cur.table[t.input];
        if (t.actor >= 0) v = m.act(t.actor, v);
        acc = t.sign > 0 ? m.m.add(acc, v) : m.m.sub(acc, v);
      }
      if (!m.m.is_zero(acc)) return false;
    }
    return true;
  };
  if (slots == 0) return {proto};
  unsigned long long k = 0;
  while (true) {
    if (choice[k] >= msize) {
      choice[k] = 0;
      if (k == 0) break;
      --k;
      ++choice[k];
      continue;
    }
    cur.table[k] = mel[choice[k]];
    if (ok_at(k)) {
      if (k + 1 == slots) {
        found.push_back(cur);
        ++choice[k];
      } else {
        ++k;
        choice[k] = 0;
      }
    } else {
      ++choice[k];
    }
  }
  return found;
}

std::vector<Elem> enumerate_coboundaries(const Subgroup& h, const GModule& m, int degree) {
  std::set<Elem> set;
  if (degree == 0) {
    set.insert(flatten(Cochain::zero(h, m, 0)));
  } else {
    FiniteAbelianGroup below = cochain_space(h, m, degree - 1);
    unsigned long long n = below.order_ull();
    if (n > (1ULL << 20)) fail(errc::invalid_argument, "coboundary enumeration too large");
    for (unsigned long long i = 0; i < n; ++i) {
      Cochain c = unflatten(h, m, degree - 1, below.element_at(i));
      set.insert(flatten(coboundary(c)));
    }
  }
  return std::vector<Elem>(set.begin(), set.end());
}

BruteCohomology brute_cohomology(const Subgroup& h, const GModule& m, int degree) {
  BruteCohomology out;
  out.space = cochain_space(h, m, degree);
  std::vector<Elem> bs = enumerate_coboundaries(h, m, degree);
  out.coboundaries.insert(bs.begin(), bs.end());
  std::map<Elem, std::vector<Elem>> classes; // canonical (least) member -> members
  for (const Cochain& z : enumerate_cocycles(h, m, degree)) {
    Elem zf = flatten(z);
    Elem key = zf;
    for (const Elem& b : out.coboundaries) {
      Elem cand = out.space.add(zf, b);
      if (cand < key) key = cand;
    }
    classes[key].push_back(zf);
  }
  for (auto& [k, v] : classes) out.cosets.push_back(std::move(v));
  return out;
}

std::vector<long long> BruteCohomology::class_orders() const {
  std::vector<long long> orders;
  for (const auto& cls : cosets) {
    const Elem& z = cls.front();
    long long k = 1;
    while (!coboundaries.count(space.smul(k, z))) ++k;
    orders.push_back(k);
  }
  std::sort(orders.begin(), orders.end());
  return orders;
}

} // namespace ctpair::oracle
