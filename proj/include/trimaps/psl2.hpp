#pragma once

// Elements of PSL(2,Q) over a tabled field: sign-canonical 2x2 matrices,
// the Mobius action on the projective line, permutation representation,
// stabilizer-chain group orders, Galois twists, and the linear intertwiner
// solver behind all conjugacy checks.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "trimaps/gf.hpp"

namespace trimaps {

struct Mat2 {
  Fe a, b, c, d;  // row-major [[a,b],[c,d]]
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2 mat_identity(const FieldCtx& F);
Fe mat_det(const FieldCtx& F, const Mat2& m);
Mat2 mat_mul(const FieldCtx& F, const Mat2& x, const Mat2& y);
Mat2 mat_neg(const FieldCtx& F, const Mat2& m);
// Inverse of a general invertible matrix (adjugate / det).
Mat2 mat_inv(const FieldCtx& F, const Mat2& m);
// X * A * X^{-1} for any invertible X; preserves det(A).
Mat2 mat_conj(const FieldCtx& F, const Mat2& x, const Mat2& a);

// A determinant-1 matrix up to sign: between M and -M, the representative is
// the one whose first nonzero entry in scan order (a,b,c,d) has the smaller
// rank. Equality of ProjMat values is plain representative equality.
class ProjMat {
 public:
  ProjMat() = default;
  const Mat2& rep() const { return rep_; }
  friend constexpr bool operator==(const ProjMat&, const ProjMat&) = default;

  // Total order induced by the canonical serialized form (a,b,c,d ranks).
  friend constexpr auto operator<=>(const ProjMat& x, const ProjMat& y) {
    if (auto c = x.rep_.a <=> y.rep_.a; c != 0) return c;
    if (auto c = x.rep_.b <=> y.rep_.b; c != 0) return c;
    if (auto c = x.rep_.c <=> y.rep_.c; c != 0) return c;
    return x.rep_.d <=> y.rep_.d;
  }

 private:
  friend ProjMat proj(const FieldCtx&, const Mat2&);
  Mat2 rep_;
};

struct ProjMatHash {
  size_t operator()(const ProjMat& m) const {
    uint64_t h = 0x9e3779b97f4a7c15ull;
    for (uint64_t x : {uint64_t(m.rep().a.v), uint64_t(m.rep().b.v),
                       uint64_t(m.rep().c.v), uint64_t(m.rep().d.v)}) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return size_t(h);
  }
};

// theta: SL(2,Q) -> PSL(2,Q). Throws when det != 1.
ProjMat proj(const FieldCtx& F, const Mat2& m);
ProjMat proj_identity(const FieldCtx& F);
ProjMat pmul(const FieldCtx& F, const ProjMat& x, const ProjMat& y);
ProjMat pinv(const FieldCtx& F, const ProjMat& x);

// A point of PG(1,Q): a field element or the point at infinity.
struct ProjPoint {
  uint32_t idx = 0;  // rank of the finite value, or Q for infinity
  friend constexpr bool operator==(ProjPoint, ProjPoint) = default;
};
ProjPoint pp_finite(Fe x);
ProjPoint pp_infinity(const FieldCtx& F);
bool pp_is_infinity(const FieldCtx& F, ProjPoint pt);
uint32_t line_size(const FieldCtx& F);  // Q + 1

// x -> (ax+b)/(cx+d) with the usual conventions at infinity.
ProjPoint mobius_apply(const FieldCtx& F, const ProjMat& g, ProjPoint pt);

// Smallest k >= 1 with g^k = 1 in PSL, by iterated multiplication.
int64_t proj_order(const FieldCtx& F, const ProjMat& g);

// |PSL(2,Q)| = Q(Q^2-1)/gcd(2,Q-1) for Q = |F|.
int64_t psl2_full_order(const FieldCtx& F);

// ---- permutation machinery ------------------------------------------------

using Perm = std::vector<uint32_t>;

Perm perm_identity(uint32_t npoints);
Perm perm_mul(const Perm& f, const Perm& g);  // apply f, then g
Perm perm_inv(const Perm& f);

// Faithful action on PG(1,Q), points indexed finite-by-rank then infinity.
Perm line_permutation(const FieldCtx& F, const ProjMat& g);

// Exact order of the permutation group generated on the projective line.
// Randomized stabilizer chain with a deterministic verification pass; the
// known bound |PSL(2,Q)| gives an early exit since every generator lies in
// PSL. Result is exact and reproducible.
int64_t group_order(const FieldCtx& F, std::span<const ProjMat> gens);

bool is_full_psl2(const FieldCtx& F, std::span<const ProjMat> gens);

// Closure of gens under multiplication. Throws when the closure would
// exceed `bound` elements.
std::vector<ProjMat> closure(const FieldCtx& F, std::span<const ProjMat> gens,
                             size_t bound);

// Entrywise x -> x^{p^k}, re-canonicalized. k = n realizes the q-power map.
ProjMat frobenius_twist(const FieldCtx& F, const ProjMat& g, int k);

// ---- intertwiner ------------------------------------------------------------

struct Conjugator {
  Mat2 mat;            // det 1 when in_psl, a fixed non-square otherwise
  bool in_psl = true;
  int max_nullity = 0; // largest nullspace dimension seen across sign patterns
};

// Searches for X with X * src_i * X^{-1} = dst_i in PSL for i = 0,1,2, over
// all sign patterns of the SL lifts. Returns the witness (possibly in
// PGL \ PSL, flagged) or nullopt.
std::optional<Conjugator> intertwiner(const FieldCtx& F,
                                      std::span<const ProjMat, 3> src,
                                      std::span<const ProjMat, 3> dst);

// Direct check that X conjugates src onto dst projectively.
bool conjugates_triple(const FieldCtx& F, const Mat2& x,
                       std::span<const ProjMat, 3> src,
                       std::span<const ProjMat, 3> dst);

// Uniform random element of SL(2,Q); test and sampling helper.
Mat2 random_sl2(const FieldCtx& F, std::mt19937_64& rng);

// "a;b;c;d" with each entry a coefficient list.
std::string mat_to_string(const FieldCtx& F, const Mat2& m);
Mat2 mat_from_string(const FieldCtx& F, const std::string& s);

}  // namespace trimaps
