#include "trimaps/psl2.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace trimaps {

Mat2 mat_identity(const FieldCtx& F) {
  return Mat2{F.one(), F.zero(), F.zero(), F.one()};
}

Fe mat_det(const FieldCtx& F, const Mat2& m) {
  return F.sub(F.mul(m.a, m.d), F.mul(m.b, m.c));
}

Mat2 mat_mul(const FieldCtx& F, const Mat2& x, const Mat2& y) {
  return Mat2{F.add(F.mul(x.a, y.a), F.mul(x.b, y.c)),
              F.add(F.mul(x.a, y.b), F.mul(x.b, y.d)),
              F.add(F.mul(x.c, y.a), F.mul(x.d, y.c)),
              F.add(F.mul(x.c, y.b), F.mul(x.d, y.d))};
}

Mat2 mat_neg(const FieldCtx& F, const Mat2& m) {
  return Mat2{F.neg(m.a), F.neg(m.b), F.neg(m.c), F.neg(m.d)};
}

Mat2 mat_inv(const FieldCtx& F, const Mat2& m) {
  Fe di = F.inv(mat_det(F, m));
  return Mat2{F.mul(m.d, di), F.mul(F.neg(m.b), di),
              F.mul(F.neg(m.c), di), F.mul(m.a, di)};
}

Mat2 mat_conj(const FieldCtx& F, const Mat2& x, const Mat2& a) {
  return mat_mul(F, mat_mul(F, x, a), mat_inv(F, x));
}

ProjMat proj(const FieldCtx& F, const Mat2& m) {
  if (mat_det(F, m) != F.one())
    throw std::invalid_argument("matrix is not in SL(2,Q)");
  ProjMat r;
  if (F.p() == 2) {
    r.rep_ = m;
    return r;
  }
  Fe first = m.a.v != 0 ? m.a : (m.b.v != 0 ? m.b : (m.c.v != 0 ? m.c : m.d));
  Fe nf = F.neg(first);
  r.rep_ = (nf.v < first.v) ? mat_neg(F, m) : m;
  return r;
}

ProjMat proj_identity(const FieldCtx& F) { return proj(F, mat_identity(F)); }

ProjMat pmul(const FieldCtx& F, const ProjMat& x, const ProjMat& y) {
  return proj(F, mat_mul(F, x.rep(), y.rep()));
}

ProjMat pinv(const FieldCtx& F, const ProjMat& x) {
  const Mat2& m = x.rep();
  // adjugate of a det-1 matrix
  return proj(F, Mat2{m.d, F.neg(m.b), F.neg(m.c), m.a});
}

ProjPoint pp_finite(Fe x) { return ProjPoint{x.v}; }
ProjPoint pp_infinity(const FieldCtx& F) { return ProjPoint{F.size()}; }
bool pp_is_infinity(const FieldCtx& F, ProjPoint pt) { return pt.idx == F.size(); }
uint32_t line_size(const FieldCtx& F) { return F.size() + 1; }

ProjPoint mobius_apply(const FieldCtx& F, const ProjMat& g, ProjPoint pt) {
  const Mat2& m = g.rep();
  if (pp_is_infinity(F, pt)) {
    if (m.c.v == 0) return pp_infinity(F);
    return pp_finite(F.div(m.a, m.c));
  }
  Fe x = Fe{pt.idx};
  Fe den = F.add(F.mul(m.c, x), m.d);
  if (den.v == 0) return pp_infinity(F);
  return pp_finite(F.div(F.add(F.mul(m.a, x), m.b), den));
}

int64_t proj_order(const FieldCtx& F, const ProjMat& g) {
  const ProjMat id = proj_identity(F);
  ProjMat acc = g;
  int64_t k = 1;
  const int64_t bound = int64_t(F.size()) + 1;
  while (!(acc == id)) {
    acc = pmul(F, acc, g);
    ++k;
    if (k > bound) throw std::logic_error("element order exceeds Q+1");
  }
  return k;
}

int64_t psl2_full_order(const FieldCtx& F) {
  const int64_t Q = F.size();
  const int64_t g = (Q - 1) % 2 == 0 ? 2 : 1;
  return Q * (Q * Q - 1) / g;
}

Perm perm_identity(uint32_t npoints) {
  Perm p(npoints);
  for (uint32_t i = 0; i < npoints; ++i) p[i] = i;
  return p;
}

Perm perm_mul(const Perm& f, const Perm& g) {
  Perm r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = g[f[i]];
  return r;
}

Perm perm_inv(const Perm& f) {
  Perm r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[f[i]] = uint32_t(i);
  return r;
}

Perm line_permutation(const FieldCtx& F, const ProjMat& g) {
  const uint32_t n = line_size(F);
  Perm p(n);
  for (uint32_t i = 0; i < n; ++i) p[i] = mobius_apply(F, g, ProjPoint{i}).idx;
  return p;
}

namespace {

bool is_identity_perm(const Perm& p) {
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

uint32_t first_moved(const Perm& p) {
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return uint32_t(i);
  throw std::logic_error("identity permutation has no moved point");
}

// Stabilizer chain with BFS Schreier trees. Transversal elements are
// reconstructed on demand by composing generators along the tree path.
class StabChain {
 public:
  explicit StabChain(uint32_t n) : n_(n) {}

  int64_t order() const {
    int64_t o = 1;
    for (const auto& L : levels_) o *= int64_t(L.orbit.size());
    return o;
  }

  // Sift g starting at `start`; returns true when g reduces to the identity,
  // otherwise inserts the residue as a strong generator and returns false.
  bool sift_and_insert(Perm g, size_t start = 0) {
    size_t lvl = start;
    for (;;) {
      if (is_identity_perm(g)) return true;
      if (lvl == levels_.size())
        levels_.push_back(Level{first_moved(g), {}, {}, {}, {}});
      Level& L = levels_[lvl];
      uint32_t img = g[L.beta];
      if (L.via.empty() || (img != L.beta && L.via[img] == kOut)) {
        add_gen(lvl, std::move(g));
        return false;
      }
      if (img != L.beta) g = perm_mul(g, perm_inv(rep(L, img)));
      ++lvl;
    }
  }

  // Deterministic Schreier generator check; on return the chain order is the
  // exact order of the group generated by the strong generators.
  void verify() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t lvl = levels_.size(); lvl-- > 0 && !changed;) {
        Level& L = levels_[lvl];
        for (size_t oi = 0; oi < L.orbit.size() && !changed; ++oi) {
          uint32_t pt = L.orbit[oi];
          Perm u = rep(L, pt);
          for (size_t gi = 0; gi < L.gens.size(); ++gi) {
            uint32_t img = L.gens[gi][pt];
            Perm schreier =
                perm_mul(perm_mul(u, L.gens[gi]), perm_inv(rep(L, img)));
            if (!sift_and_insert(std::move(schreier), lvl + 1)) {
              changed = true;
              break;
            }
          }
        }
      }
    }
  }

 private:
  static constexpr int32_t kOut = -2;

  struct Level {
    uint32_t beta;
    std::vector<Perm> gens;
    std::vector<uint32_t> from;  // BFS predecessor
    std::vector<int32_t> via;    // generator index, -1 at root, kOut outside
    std::vector<uint32_t> orbit;
  };

  void add_gen(size_t lvl, Perm g) {
    Level& L = levels_[lvl];
    L.gens.push_back(std::move(g));
    L.from.assign(n_, 0);
    L.via.assign(n_, kOut);
    L.orbit.clear();
    L.via[L.beta] = -1;
    L.orbit.push_back(L.beta);
    for (size_t qi = 0; qi < L.orbit.size(); ++qi) {
      uint32_t x = L.orbit[qi];
      for (size_t gi = 0; gi < L.gens.size(); ++gi) {
        uint32_t y = L.gens[gi][x];
        if (L.via[y] == kOut) {
          L.via[y] = int32_t(gi);
          L.from[y] = x;
          L.orbit.push_back(y);
        }
      }
    }
  }

  // Transversal element u with beta^u = pt.
  Perm rep(const Level& L, uint32_t pt) const {
    std::vector<int32_t> path;
    uint32_t x = pt;
    while (L.via[x] != -1) {
      path.push_back(L.via[x]);
      x = L.from[x];
    }
    Perm u = perm_identity(n_);
    for (size_t i = path.size(); i-- > 0;) u = perm_mul(u, L.gens[path[i]]);
    return u;
  }

  uint32_t n_;
  std::vector<Level> levels_;
};

uint64_t gens_fingerprint(std::span<const ProjMat> gens) {
  uint64_t h = 0x51ab0ff1ce5eedull;
  ProjMatHash hasher;
  for (const auto& g : gens) h = h * 0x100000001b3ull + hasher(g);
  return h;
}

// Product-replacement random words over the generators.
class RandomWords {
 public:
  RandomWords(const std::vector<Perm>& gens, uint64_t seed, uint32_t n)
      : rng_(seed) {
    size_t slots = std::max<size_t>(8, gens.size() + 2);
    for (size_t i = 0; i < slots; ++i) state_.push_back(gens[i % gens.size()]);
    acc_ = perm_identity(n);
    for (int i = 0; i < 20; ++i) next();
  }
  const Perm& next() {
    size_t i = rng_() % state_.size();
    size_t j = rng_() % state_.size();
    if (rng_() & 1)
      state_[i] = perm_mul(state_[i], state_[j]);
    else
      state_[i] = perm_mul(state_[j], state_[i]);
    acc_ = perm_mul(acc_, state_[i]);
    return acc_;
  }

 private:
  std::vector<Perm> state_;
  Perm acc_;
  std::mt19937_64 rng_;
};

}  // namespace

int64_t group_order(const FieldCtx& F, std::span<const ProjMat> gens) {
  if (gens.empty()) throw std::invalid_argument("empty generator list");
  const uint32_t npts = line_size(F);
  const int64_t target = psl2_full_order(F);

  std::vector<Perm> pgens;
  for (const auto& g : gens) {
    Perm p = line_permutation(F, g);
    if (!is_identity_perm(p)) pgens.push_back(std::move(p));
  }
  if (pgens.empty()) return 1;

  StabChain chain(npts);
  for (const auto& p : pgens) chain.sift_and_insert(p);
  if (chain.order() == target) return target;

  RandomWords words(pgens, gens_fingerprint(gens) ^ 0xb5297a4d3f2c1e09ull, npts);
  int streak = 0;
  while (streak < 16 && chain.order() < target) {
    if (chain.sift_and_insert(words.next()))
      ++streak;
    else
      streak = 0;
  }
  if (chain.order() == target) return target;

  chain.verify();
  if (chain.order() > target) throw std::logic_error("order exceeds |PSL(2,Q)|");
  return chain.order();
}

bool is_full_psl2(const FieldCtx& F, std::span<const ProjMat> gens) {
  return group_order(F, gens) == psl2_full_order(F);
}

std::vector<ProjMat> closure(const FieldCtx& F, std::span<const ProjMat> gens,
                             size_t bound) {
  std::vector<ProjMat> elems{proj_identity(F)};
  std::unordered_set<ProjMat, ProjMatHash> seen{elems[0]};
  for (size_t qi = 0; qi < elems.size(); ++qi) {
    for (const auto& g : gens) {
      ProjMat x = pmul(F, elems[qi], g);
      if (seen.insert(x).second) {
        if (elems.size() >= bound)
          throw std::runtime_error("subgroup closure exceeds bound");
        elems.push_back(x);
      }
    }
  }
  return elems;
}

ProjMat frobenius_twist(const FieldCtx& F, const ProjMat& g, int k) {
  if (k < 0 || k >= F.deg())
    throw std::invalid_argument("Galois exponent out of range");
  const Mat2& m = g.rep();
  return proj(F, Mat2{F.frobenius_p(m.a, k), F.frobenius_p(m.b, k),
                      F.frobenius_p(m.c, k), F.frobenius_p(m.d, k)});
}

namespace {

using Vec4 = std::array<Fe, 4>;

Fe vec_det(const FieldCtx& F, const Vec4& x) {
  return F.sub(F.mul(x[0], x[3]), F.mul(x[1], x[2]));
}

Mat2 vec_to_mat(const Vec4& x) { return Mat2{x[0], x[1], x[2], x[3]}; }

// Reduced row echelon nullspace of a 12x4 system.
std::vector<Vec4> nullspace4(const FieldCtx& F, std::vector<Vec4> rows) {
  std::array<int, 4> pivot_row{-1, -1, -1, -1};
  size_t r = 0;
  for (int col = 0; col < 4 && r < rows.size(); ++col) {
    size_t sel = r;
    while (sel < rows.size() && rows[sel][col].v == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    Fe piv_inv = F.inv(rows[r][col]);
    for (auto& e : rows[r]) e = F.mul(e, piv_inv);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col].v == 0) continue;
      Fe f = rows[i][col];
      for (int cc = 0; cc < 4; ++cc)
        rows[i][cc] = F.sub(rows[i][cc], F.mul(f, rows[r][cc]));
    }
    pivot_row[col] = int(r);
    ++r;
  }
  std::vector<Vec4> basis;
  for (int col = 0; col < 4; ++col) {
    if (pivot_row[col] != -1) continue;
    Vec4 v{F.zero(), F.zero(), F.zero(), F.zero()};
    v[col] = F.one();
    for (int pc = 0; pc < 4; ++pc)
      if (pivot_row[pc] != -1) v[pc] = F.neg(rows[pivot_row[pc]][col]);
    basis.push_back(v);
  }
  return basis;
}

// First invertible element of the span, scanning basis vectors, then the
// projective points of the span when that is affordable, then pair
// combinations. Valid map triples always give nullity <= 1, so the deeper
// scans only matter for degenerate inputs.
std::optional<Vec4> invertible_in_span(const FieldCtx& F,
                                       const std::vector<Vec4>& basis) {
  for (const auto& v : basis)
    if (vec_det(F, v).v != 0) return v;
  if (basis.size() < 2) return std::nullopt;

  const int64_t Q = F.size();
  int64_t reps = 1;
  for (size_t i = 1; i < basis.size(); ++i) {
    reps *= Q;
    if (reps > 2'000'000) break;
  }
  if (reps <= 2'000'000) {
    // all projective points: first nonzero coordinate equal to 1
    std::vector<uint32_t> lambda(basis.size(), 0);
    std::function<std::optional<Vec4>(size_t, Vec4)> rec =
        [&](size_t i, Vec4 acc) -> std::optional<Vec4> {
      if (i == basis.size())
        return std::nullopt;
      // leading coefficient 1 at position i
      Vec4 lead = acc;
      for (int k = 0; k < 4; ++k) lead[k] = F.add(lead[k], basis[i][k]);
      std::function<std::optional<Vec4>(size_t, Vec4)> tail =
          [&](size_t j, Vec4 cur) -> std::optional<Vec4> {
        if (j == basis.size()) {
          if (vec_det(F, cur).v != 0) return cur;
          return std::nullopt;
        }
        for (int64_t lam = 0; lam < Q; ++lam) {
          Vec4 nxt = cur;
          Fe l = Fe{uint32_t(lam)};
          for (int k = 0; k < 4; ++k)
            nxt[k] = F.add(nxt[k], F.mul(l, basis[j][k]));
          if (auto r = tail(j + 1, nxt)) return r;
        }
        return std::nullopt;
      };
      if (auto r = tail(i + 1, lead)) return r;
      return rec(i + 1, acc);
    };
    return rec(0, Vec4{F.zero(), F.zero(), F.zero(), F.zero()});
  }

  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i + 1; j < basis.size(); ++j)
      for (int64_t lam = 1; lam < Q; ++lam) {
        Vec4 v;
        Fe l = Fe{uint32_t(lam)};
        for (int k = 0; k < 4; ++k)
          v[k] = F.add(basis[i][k], F.mul(l, basis[j][k]));
        if (vec_det(F, v).v != 0) return v;
      }
  return std::nullopt;
}

Mat2 mat_scale(const FieldCtx& F, const Mat2& m, Fe s) {
  return Mat2{F.mul(m.a, s), F.mul(m.b, s), F.mul(m.c, s), F.mul(m.d, s)};
}

Conjugator make_conjugator(const FieldCtx& F, Mat2 x, int max_nullity) {
  Fe d = mat_det(F, x);
  Conjugator w;
  w.max_nullity = max_nullity;
  if (F.is_square(d)) {
    w.mat = mat_scale(F, x, F.inv(F.sqrt(d)));
    w.in_psl = true;
  } else {
    // normalize to the smallest non-square determinant
    Fe nu = F.zero();
    for (uint32_t r = 1; r < F.size(); ++r) {
      if (!F.is_square(Fe{r})) {
        nu = Fe{r};
        break;
      }
    }
    w.mat = mat_scale(F, x, F.inv(F.sqrt(F.div(d, nu))));
    w.in_psl = false;
  }
  return w;
}

}  // namespace

bool conjugates_triple(const FieldCtx& F, const Mat2& x,
                       std::span<const ProjMat, 3> src,
                       std::span<const ProjMat, 3> dst) {
  if (mat_det(F, x).v == 0) return false;
  for (int i = 0; i < 3; ++i) {
    Mat2 c = mat_conj(F, x, src[i].rep());
    if (!(proj(F, c) == dst[i])) return false;
  }
  return true;
}

std::optional<Conjugator> intertwiner(const FieldCtx& F,
                                      std::span<const ProjMat, 3> src,
                                      std::span<const ProjMat, 3> dst) {
  const int npatterns = (F.p() == 2) ? 1 : 8;
  int max_nullity = 0;
  for (int pat = 0; pat < npatterns; ++pat) {
    std::vector<Vec4> rows;
    rows.reserve(12);
    for (int i = 0; i < 3; ++i) {
      const Mat2& A = src[i].rep();
      Mat2 B = dst[i].rep();
      if (pat >> i & 1) B = mat_neg(F, B);
      // coefficients of X*A - B*X = 0 in the unknowns (x0,x1,x2,x3)
      rows.push_back({F.sub(A.a, B.a), A.c, F.neg(B.b), F.zero()});
      rows.push_back({A.b, F.sub(A.d, B.a), F.zero(), F.neg(B.b)});
      rows.push_back({F.neg(B.c), F.zero(), F.sub(A.a, B.d), A.c});
      rows.push_back({F.zero(), F.neg(B.c), A.b, F.sub(A.d, B.d)});
    }
    std::vector<Vec4> basis = nullspace4(F, std::move(rows));
    max_nullity = std::max(max_nullity, int(basis.size()));
    if (basis.empty()) continue;
    std::optional<Vec4> x = invertible_in_span(F, basis);
    if (!x) continue;
    Mat2 xm = vec_to_mat(*x);
    if (!conjugates_triple(F, xm, src, dst))
      throw std::logic_error("intertwiner produced a non-conjugating witness");
    return make_conjugator(F, xm, max_nullity);
  }
  return std::nullopt;
}

Mat2 random_sl2(const FieldCtx& F, std::mt19937_64& rng) {
  auto rand_fe = [&] { return Fe{uint32_t(rng() % F.size())}; };
  for (;;) {
    Fe a = rand_fe(), b = rand_fe();
    if (a.v == 0 && b.v == 0) continue;
    if (a.v != 0) {
      Fe c = rand_fe();
      Fe d = F.div(F.add(F.one(), F.mul(b, c)), a);
      return Mat2{a, b, c, d};
    }
    Fe d = rand_fe();
    Fe c = F.neg(F.inv(b));  // det = -bc = 1
    return Mat2{a, b, c, d};
  }
}

std::string mat_to_string(const FieldCtx& F, const Mat2& m) {
  return F.to_string(m.a) + ";" + F.to_string(m.b) + ";" + F.to_string(m.c) +
         ";" + F.to_string(m.d);
}

Mat2 mat_from_string(const FieldCtx& F, const std::string& s) {
  std::array<Fe, 4> e;
  std::stringstream ss(s);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ';')) {
    if (i >= 4) throw std::invalid_argument("malformed matrix: " + s);
    e[i++] = F.parse_element(item);
  }
  if (i != 4) throw std::invalid_argument("malformed matrix: " + s);
  return Mat2{e[0], e[1], e[2], e[3]};
}

}  // namespace trimaps
