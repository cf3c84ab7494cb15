#pragma once

// Exhaustive search for coefficient triples (a,b,c) in GF(q^3) whose
// involution triple carries the q-power triality, with per-order solution
// counts matching the reference table.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "trimaps/maps.hpp"

namespace trimaps {

struct SearchParams {
  int64_t p = 3;
  int n = 1;
  bool report_all_orders = false;
  int worker_count = 0;            // 0 = hardware concurrency
  uint64_t seed = 0;
  int64_t class_check_sample = -1; // -1 = every solution, 0 = none, k = sample
};

struct Solution {
  Fe a, b, c;
  MapType type;
  int64_t order_r0r1 = 0;
  WilsonClass cls = WilsonClass::III;
};

struct SearchReport {
  int64_t q = 0;
  int64_t count_minus = 0;  // solutions of order (q^3-1)/gcd(2,q^3-1)
  int64_t count_plus = 0;   // solutions of order (q^3+1)/gcd(2,q^3-1)
  std::map<int64_t, int64_t> other_counts;
  uint64_t candidates = 0;
  int64_t total_solutions = 0;
  int64_t class_checked = 0;
  double elapsed_sec = 0.0;
};

struct SearchResult {
  SearchReport report;
  std::vector<Solution> solutions;  // sorted by (a,b,c) rank
};

// Every (a,b,c) with -a^2 - bc = 1, each exactly once: c is solved from a
// and b != 0; the b = 0 column exists only when -a^2 = 1 has roots.
template <typename Fn>
void for_each_candidate(const FieldCtx& F, uint32_t a_lo, uint32_t a_hi,
                        Fn&& fn) {
  for (uint32_t av = a_lo; av < a_hi; ++av) {
    const Fe a{av};
    const Fe rhs = F.neg(F.add(F.mul(a, a), F.one()));  // bc = -a^2 - 1
    if (rhs.v == 0) {
      for (uint32_t cv = 0; cv < F.size(); ++cv) fn(a, F.zero(), Fe{cv});
    }
    for (uint32_t bv = 1; bv < F.size(); ++bv) {
      const Fe b{bv};
      fn(a, b, F.div(rhs, b));
    }
  }
}

// The closing relation of the Frobenius 3-cycle: the entrywise q-power of
// R2 equals R0*R2, componentwise. Its trace is the commutation condition,
// so the two matrices commute whenever this holds.
inline bool frobenius_cycle_holds(const FieldCtx& F, Fe a, Fe b, Fe c) {
  const Fe aq = F.frobenius_q(a);
  const Fe bq = F.frobenius_q(b);
  const Fe cq = F.frobenius_q(c);
  if (!(F.frobenius_q(aq) == F.add(F.mul(a, aq), F.mul(b, cq)))) return false;
  if (!(F.frobenius_q(bq) == F.sub(F.mul(a, bq), F.mul(b, aq)))) return false;
  if (!(F.frobenius_q(cq) == F.sub(F.mul(c, aq), F.mul(a, cq)))) return false;
  return true;
}

// R1 = [[0,1],[-1,0]], R0 = [[a,b],[c,-a]], R2 = entrywise q-power of R0.
// Requires the determinant condition and the Frobenius cycle relation.
MapTriple build_triple(const FieldCtx& F, Fe a, Fe b, Fe c);

SearchResult run_search(const FieldCtx& F, const SearchParams& params);

// Full independent re-verification of one emitted solution.
TripleCheck verify_solution(const FieldCtx& F, const Solution& s);

struct ReferenceCount {
  int64_t q;
  int64_t minus_count;
  int64_t plus_count;
};
// Embedded reference solution counts for q = 3..23.
std::span<const ReferenceCount> reference_counts();
const ReferenceCount* reference_for(int64_t q);

// Bucket orders for the two reference columns.
int64_t minus_bucket_order(const FieldCtx& F);
int64_t plus_bucket_order(const FieldCtx& F);

}  // namespace trimaps
