#include "trimaps/gf.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace trimaps {

namespace {

// Dense polynomials over GF(p), constant term first, no trailing zeros.
using Poly = std::vector<int64_t>;

int64_t mod_p(int64_t x, int64_t p) {
  int64_t r = x % p;
  return r < 0 ? r + p : r;
}

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int64_t inv_mod_p(int64_t a, int64_t p) {
  // Fermat; p is prime and a != 0 mod p.
  int64_t r = 1, b = mod_p(a, p), e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

Poly poly_mul(const Poly& a, const Poly& b, int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

Poly poly_mod(Poly a, const Poly& f, int64_t p) {
  const int64_t lead_inv = inv_mod_p(f.back(), p);
  while (a.size() >= f.size()) {
    int64_t coef = a.back() * lead_inv % p;
    size_t shift = a.size() - f.size();
    if (coef != 0)
      for (size_t i = 0; i < f.size(); ++i)
        a[shift + i] = mod_p(a[shift + i] - coef * f[i], p);
    a.pop_back();
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, int64_t p) {
  return poly_mod(poly_mul(a, b, p), f, p);
}

// x^(p^d) mod f
Poly poly_frob_power(const Poly& f, int64_t p, int d) {
  Poly t = {0, 1};  // x
  t = poly_mod(t, f, p);
  for (int i = 0; i < d; ++i) {
    // t <- t^p by square-and-multiply on the exponent p
    Poly acc = {1};
    Poly base = t;
    int64_t e = p;
    while (e > 0) {
      if (e & 1) acc = poly_mulmod(acc, base, f, p);
      base = poly_mulmod(base, base, f, p);
      e >>= 1;
    }
    t = acc;
  }
  return t;
}

Poly poly_gcd(Poly a, Poly b, int64_t p) {
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    int64_t li = inv_mod_p(a.back(), p);
    for (auto& c : a) c = c * li % p;
  }
  return a;
}

// f monic of degree m is irreducible iff x^(p^m) = x mod f and
// gcd(x^(p^d) - x, f) = 1 for every proper divisor d of m.
bool poly_irreducible(const Poly& f, int64_t p) {
  const int m = int(f.size()) - 1;
  {
    Poly t = poly_frob_power(f, p, m);  // x^(p^m) mod f
    Poly x = poly_mod({0, 1}, f, p);
    if (t != x) return false;
  }
  for (int d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    Poly t = poly_frob_power(f, p, d);
    // t - x
    Poly diff = t;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = mod_p(diff[1] - 1, p);
    trim(diff);
    Poly g = poly_gcd(diff, f, p);
    if (g.size() != 1) return false;  // gcd != 1
  }
  return true;
}

}  // namespace

int64_t ipow_checked(int64_t base, int exponent, int64_t limit) {
  int64_t r = 1;
  for (int i = 0; i < exponent; ++i) {
    if (r > limit / base) return -1;
    r *= base;
  }
  return r;
}

bool is_prime_i64(int64_t m) {
  if (m < 2) return false;
  for (int64_t d = 2; d * d <= m; ++d)
    if (m % d == 0) return false;
  return true;
}

std::vector<int64_t> prime_factors(int64_t m) {
  std::vector<int64_t> out;
  for (int64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      out.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) out.push_back(m);
  return out;
}

FieldCtx FieldCtx::build(int64_t p, int deg) {
  if (!is_prime_i64(p)) throw std::invalid_argument("field characteristic must be prime");
  if (deg < 1) throw std::invalid_argument("extension degree must be positive");
  constexpr int64_t kMaxSize = int64_t(1) << 20;
  int64_t size = ipow_checked(p, deg, kMaxSize);
  if (size < 0) throw std::invalid_argument("field too large to table");

  FieldCtx ctx;
  ctx.p_ = p;
  ctx.deg_ = deg;
  ctx.n_ = (deg % 3 == 0) ? deg / 3 : 0;
  ctx.q_ = ctx.n_ > 0 ? ipow_checked(p, ctx.n_, kMaxSize) : 0;
  ctx.size_ = uint32_t(size);

  // Scan monic degree-deg polynomials in rank order of their lower
  // coefficient tuple; the first irreducible one is the modulus.
  for (int64_t rank = 0; rank < size; ++rank) {
    Poly f(deg + 1, 0);
    int64_t r = rank;
    for (int i = 0; i < deg; ++i) {
      f[i] = r % p;
      r /= p;
    }
    f[deg] = 1;
    if (poly_irreducible(f, p)) {
      ctx.modulus_ = f;
      break;
    }
  }
  if (ctx.modulus_.empty()) throw std::runtime_error("no irreducible modulus found");

  ctx.order_primes_ = prime_factors(size - 1);
  ctx.build_tables();
  return ctx;
}

FieldCtx FieldCtx::build_cubic(int64_t p, int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  return build(p, 3 * n);
}

void FieldCtx::build_tables() {
  const uint32_t size = size_;
  const int deg = deg_;
  digits_.assign(size_t(size) * deg, 0);
  for (uint32_t x = 0; x < size; ++x) {
    uint32_t r = x;
    for (int i = 0; i < deg; ++i) {
      digits_[size_t(x) * deg + i] = uint16_t(r % p_);
      r /= uint32_t(p_);
    }
  }

  // Bootstrap multiplication: schoolbook polynomial product reduced by the
  // modulus, on digit vectors. Used only to build the log/exp tables.
  auto slow_mul = [&](uint32_t x, uint32_t y) -> uint32_t {
    std::vector<int64_t> prod(2 * deg - 1, 0);
    const uint16_t* dx = &digits_[size_t(x) * deg];
    const uint16_t* dy = &digits_[size_t(y) * deg];
    for (int i = 0; i < deg; ++i) {
      if (dx[i] == 0) continue;
      for (int j = 0; j < deg; ++j)
        prod[i + j] = (prod[i + j] + int64_t(dx[i]) * dy[j]) % p_;
    }
    for (int k = 2 * deg - 2; k >= deg; --k) {
      int64_t coef = prod[k];
      if (coef == 0) continue;
      prod[k] = 0;
      for (int i = 0; i < deg; ++i)
        prod[k - deg + i] = mod_p(prod[k - deg + i] - coef * modulus_[i], p_);
    }
    uint32_t out = 0;
    for (int i = deg - 1; i >= 0; --i) out = out * uint32_t(p_) + uint32_t(prod[i]);
    return out;
  };
  auto slow_pow = [&](uint32_t x, int64_t e) -> uint32_t {
    uint32_t acc = 1, base = x;
    while (e > 0) {
      if (e & 1) acc = slow_mul(acc, base);
      base = slow_mul(base, base);
      e >>= 1;
    }
    return acc;
  };

  const int64_t unit_order = int64_t(size) - 1;
  uint32_t gen = 0;
  if (unit_order == 1) {
    gen = 1;
  } else {
    for (uint32_t cand = 2; cand < size; ++cand) {
      bool primitive = true;
      for (int64_t ell : order_primes_) {
        if (slow_pow(cand, unit_order / ell) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        gen = cand;
        break;
      }
    }
    if (gen == 0) throw std::runtime_error("no multiplicative generator found");
  }
  gen_ = Fe{gen};

  exp_.assign(size_t(2) * unit_order, 1);
  log_.assign(size, 0);
  uint32_t acc = 1;
  for (int64_t k = 0; k < unit_order; ++k) {
    exp_[k] = acc;
    exp_[k + unit_order] = acc;
    log_[acc] = uint32_t(k);
    acc = slow_mul(acc, gen);
  }
  if (acc != 1) throw std::runtime_error("generator order mismatch");

  frob_p_.assign(size, 0);
  for (uint32_t x = 1; x < size; ++x) frob_p_[x] = slow_pow(x, p_);

  if (n_ > 0) {
    // Columns of the GF(p)-linear q-power map: (t^i)^q = (t^q)^i where t is
    // the basis root (rank p). The table is that linear map applied rank-wise.
    Fe tq = Fe{slow_pow(uint32_t(p_), q_)};
    std::vector<Fe> col(deg);
    Fe c = one();
    for (int i = 0; i < deg; ++i) {
      col[i] = c;
      c = Fe{slow_mul(c.v, tq.v)};
    }
    frob_q_.assign(size, 0);
    for (uint32_t x = 0; x < size; ++x) {
      Fe out = zero();
      const uint16_t* dx = &digits_[size_t(x) * deg];
      for (int i = 0; i < deg; ++i) {
        if (dx[i] == 0) continue;
        out = add(out, Fe{slow_mul(uint32_t(dx[i]), col[i].v)});
      }
      frob_q_[x] = out.v;
    }
    // x^(q^3) = x must hold in GF(q^3).
    for (uint32_t x = 0; x < size; ++x)
      if (frob_q_[frob_q_[frob_q_[x]]] != x)
        throw std::runtime_error("q-power Frobenius table inconsistent");
  }
}

Fe FieldCtx::digit_add(Fe x, Fe y, bool subtract) const {
  const uint16_t* dx = &digits_[size_t(x.v) * deg_];
  const uint16_t* dy = &digits_[size_t(y.v) * deg_];
  uint32_t r = 0;
  for (int i = deg_ - 1; i >= 0; --i) {
    int64_t s = subtract ? dx[i] - dy[i] : dx[i] + dy[i];
    if (s >= p_) s -= p_;
    if (s < 0) s += p_;
    r = r * uint32_t(p_) + uint32_t(s);
  }
  return Fe{r};
}

Fe FieldCtx::element(uint32_t rank) const {
  if (rank >= size_) throw std::out_of_range("element rank out of range");
  return Fe{rank};
}

Fe FieldCtx::from_int(int64_t k) const {
  return Fe{uint32_t(mod_p(k, p_))};
}

Fe FieldCtx::inv(Fe x) const {
  if (x.v == 0) throw std::domain_error("division by zero in GF(p^deg)");
  const int64_t unit_order = int64_t(size_) - 1;
  return Fe{exp_[size_t(unit_order - log_[x.v])]};
}

Fe FieldCtx::pow(Fe x, int64_t k) const {
  if (x.v == 0) {
    if (k > 0) return Fe{0};
    if (k == 0) return one();
    throw std::domain_error("0 raised to a negative power");
  }
  const int64_t unit_order = int64_t(size_) - 1;
  if (unit_order == 0) return one();
  int64_t e = mod_p(k, unit_order);
  return Fe{exp_[size_t(int64_t(log_[x.v]) * e % unit_order)]};
}

Fe FieldCtx::frobenius_q(Fe x) const {
  if (n_ == 0) throw std::logic_error("frobenius_q requires deg divisible by 3");
  return Fe{frob_q_[x.v]};
}

Fe FieldCtx::frobenius_p(Fe x, int k) const {
  if (k < 0) throw std::invalid_argument("negative Frobenius power");
  k %= deg_;
  Fe r = x;
  for (int i = 0; i < k; ++i) r = Fe{frob_p_[r.v]};
  return r;
}

int64_t FieldCtx::element_order(Fe x) const {
  if (x.v == 0) throw std::domain_error("order of zero is undefined");
  int64_t o = int64_t(size_) - 1;
  for (int64_t ell : order_primes_) {
    while (o % ell == 0 && pow(x, o / ell) == one()) o /= ell;
  }
  return o;
}

bool FieldCtx::is_square(Fe x) const {
  if (x.v == 0 || p_ == 2) return true;
  return log_[x.v] % 2 == 0;
}

Fe FieldCtx::sqrt(Fe x) const {
  if (x.v == 0) return x;
  if (p_ == 2) return pow(x, int64_t(size_) / 2);  // squaring is bijective in char 2
  if (log_[x.v] % 2 != 0) throw std::domain_error("element is not a square");
  return Fe{exp_[size_t(log_[x.v]) / 2]};
}

std::vector<int64_t> FieldCtx::coeffs(Fe x) const {
  std::vector<int64_t> c(deg_);
  const uint16_t* dx = &digits_[size_t(x.v) * deg_];
  for (int i = 0; i < deg_; ++i) c[i] = dx[i];
  return c;
}

Fe FieldCtx::from_coeffs(const std::vector<int64_t>& c) const {
  if (int(c.size()) != deg_) throw std::invalid_argument("coefficient list has wrong length");
  uint32_t r = 0;
  for (int i = deg_ - 1; i >= 0; --i) {
    if (c[i] < 0 || c[i] >= p_) throw std::invalid_argument("coefficient out of range");
    r = r * uint32_t(p_) + uint32_t(c[i]);
  }
  return Fe{r};
}

std::string FieldCtx::to_string(Fe x) const {
  std::string s;
  const uint16_t* dx = &digits_[size_t(x.v) * deg_];
  for (int i = 0; i < deg_; ++i) {
    if (i) s += ',';
    s += std::to_string(dx[i]);
  }
  return s;
}

Fe FieldCtx::parse_element(const std::string& s) const {
  std::vector<int64_t> c;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    int64_t val = std::stoll(item, &pos);
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) throw std::invalid_argument("malformed field element: " + s);
    c.push_back(val);
  }
  return from_coeffs(c);
}

std::string FieldCtx::describe() const {
  std::string s = "p=" + std::to_string(p_) + " n=" + std::to_string(n_) + " modulus=";
  for (size_t i = 0; i < modulus_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(modulus_[i]);
  }
  return s;
}

}  // namespace trimaps
