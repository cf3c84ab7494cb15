#pragma once

// Arithmetic in GF(p^deg) with table-backed multiplication, built for the
// cubic extensions GF(q^3) = GF(p^{3n}) that carry a q-power Frobenius.

#include <cstdint>
#include <string>
#include <vector>

namespace trimaps {

// An element of GF(p^deg), identified by its rank in the canonical
// enumeration: rank = c0 + c1*p + ... + c_{deg-1}*p^{deg-1}, where
// (c0, ..., c_{deg-1}) are the coordinates in the power basis of the
// modulus. Rank order is the total order used for all canonical choices.
struct FieldElement {
  uint32_t v = 0;
  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

using Fe = FieldElement;

class FieldCtx {
 public:
  // Modulus is the first monic irreducible polynomial of degree `deg` over
  // GF(p) in the coefficient enumeration order above (constant term varies
  // fastest). Throws on non-prime p, deg < 1, or a field too large to table.
  static FieldCtx build(int64_t p, int deg);
  // Convenience for the cubic tower: deg = 3n, q = p^n.
  static FieldCtx build_cubic(int64_t p, int n);

  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;
  FieldCtx(FieldCtx&&) = default;
  FieldCtx& operator=(FieldCtx&&) = default;

  int64_t p() const { return p_; }
  int n() const { return n_; }        // deg/3, or 0 when deg % 3 != 0
  int deg() const { return deg_; }
  int64_t q() const { return q_; }    // p^n, or 0 when n == 0
  uint32_t size() const { return size_; }
  // deg+1 coefficients, constant term first, leading coefficient 1.
  const std::vector<int64_t>& modulus() const { return modulus_; }
  // Prime divisors of size-1, ascending.
  const std::vector<int64_t>& unit_order_primes() const { return order_primes_; }

  Fe zero() const { return Fe{0}; }
  Fe one() const { return Fe{1}; }
  Fe element(uint32_t rank) const;      // rank < size
  Fe from_int(int64_t k) const;         // canonical embed of Z into GF(p)
  Fe generator() const { return gen_; } // fixed multiplicative generator

  Fe add(Fe x, Fe y) const {
    if (p_ == 2) return Fe{x.v ^ y.v};
    return digit_add(x, y, /*subtract=*/false);
  }
  Fe sub(Fe x, Fe y) const {
    if (p_ == 2) return Fe{x.v ^ y.v};
    return digit_add(x, y, /*subtract=*/true);
  }
  Fe neg(Fe x) const { return sub(Fe{0}, x); }
  Fe mul(Fe x, Fe y) const {
    if (x.v == 0 || y.v == 0) return Fe{0};
    return Fe{exp_[size_t(log_[x.v]) + size_t(log_[y.v])]};
  }
  Fe inv(Fe x) const;                   // throws on 0
  Fe div(Fe x, Fe y) const { return mul(x, inv(y)); }
  Fe pow(Fe x, int64_t k) const;        // throws on 0^k with k < 0

  bool in_prime_field(Fe x) const { return x.v < uint32_t(p_); }

  // x -> x^q. Backed by a table precomputed from the GF(p)-linear action of
  // the q-power map on the power basis. Requires n >= 1.
  Fe frobenius_q(Fe x) const;
  // x -> x^{p^k} for any k >= 0.
  Fe frobenius_p(Fe x, int k) const;

  int64_t element_order(Fe x) const;    // multiplicative order; throws on 0
  bool is_square(Fe x) const;
  Fe sqrt(Fe x) const;                  // throws when x is not a square

  std::vector<int64_t> coeffs(Fe x) const;
  Fe from_coeffs(const std::vector<int64_t>& c) const;

  // "c0,c1,...,c_{deg-1}"
  std::string to_string(Fe x) const;
  Fe parse_element(const std::string& s) const;
  // "p=<p> n=<n> modulus=<c0,...,c_deg>"
  std::string describe() const;

 private:
  FieldCtx() = default;
  Fe digit_add(Fe x, Fe y, bool subtract) const;
  void build_tables();

  int64_t p_ = 0;
  int n_ = 0;
  int deg_ = 0;
  int64_t q_ = 0;
  uint32_t size_ = 0;
  std::vector<int64_t> modulus_;
  std::vector<int64_t> order_primes_;
  Fe gen_{0};

  std::vector<uint16_t> digits_;   // size * deg, base-p digits per rank
  std::vector<uint32_t> exp_;      // 2*(size-1) entries, exp_[k] = gen^k
  std::vector<uint32_t> log_;      // size entries, log_[0] unused
  std::vector<uint32_t> frob_q_;   // x -> x^q (empty when n == 0)
  std::vector<uint32_t> frob_p_;   // x -> x^p
};

int64_t ipow_checked(int64_t base, int exponent, int64_t limit);
bool is_prime_i64(int64_t m);
std::vector<int64_t> prime_factors(int64_t m);

}  // namespace trimaps
