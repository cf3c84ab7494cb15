#pragma once

// Reflexible maps as ordered involution triples: type computation, the
// six-operator hexad, isomorphism over PGammaL(2,Q), and class decisions
// with triality/duality witnesses.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "trimaps/psl2.hpp"

namespace trimaps {

struct MapTriple {
  const FieldCtx* ctx = nullptr;
  ProjMat r0, r1, r2;
  std::array<ProjMat, 3> arr() const { return {r0, r1, r2}; }
  friend bool operator==(const MapTriple& x, const MapTriple& y) {
    return x.r0 == y.r0 && x.r1 == y.r1 && x.r2 == y.r2;
  }
};

// {p,q}_r: p = order(r0 r1), q = order(r1 r2), r = order(r0 r2 r1).
struct MapType {
  int64_t p = 0, q = 0, r = 0;
  friend bool operator==(const MapType&, const MapType&) = default;
};

// The hexad: D swaps r0 and r2, P replaces r0 by r0*r2. Composition is
// right-to-left (DP applies P first), matching (DP)^3 = ID.
enum class WilsonOp { ID, D, P, DP, PD, DPD };

enum class WilsonClass { I, II, III, IV };

const char* wilson_class_name(WilsonClass c);
const char* wilson_op_name(WilsonOp op);

// An element of Aut(PSL(2,Q)) = PGL(2,Q) : Gal, as a Galois exponent plus a
// conjugating matrix (det 1 inside PSL, flagged otherwise).
struct IsoWitness {
  int galois_k = 0;
  Mat2 conj;
  bool in_psl = true;
};

struct ClassReport {
  WilsonClass cls = WilsonClass::I;
  std::optional<IsoWitness> triality;
  std::optional<IsoWitness> duality;
  WilsonOp duality_op = WilsonOp::ID;  // which of D, P, DPD held
};

struct TripleCheck {
  bool ok = true;
  std::vector<std::string> failures;
};

// All MapTriple invariants, full-group generation included. Generation is
// only tested once the cheap involution checks pass.
TripleCheck validate_triple(const MapTriple& t);

MapType map_type(const MapTriple& t);

MapTriple wilson_image(const MapTriple& t, WilsonOp op);

// PGammaL-conjugacy of ordered triples: searches Galois exponents
// k = 0..deg-1 in order and returns the first verified witness.
std::optional<IsoWitness> are_isomorphic(const MapTriple& t1,
                                         const MapTriple& t2);

// First duality among the D, P, DPD images, if any; sets *which when found.
std::optional<IsoWitness> find_duality(const MapTriple& t, WilsonOp* which);
std::optional<IsoWitness> find_triality(const MapTriple& t);

ClassReport wilson_class(const MapTriple& t);

// The specific witness produced by the q-power construction: the q-power
// twist fixes r1, sends r0 to r2 and r2 to r0*r2.
bool triality_witness_frobenius(const MapTriple& t);

// One triple per line: "p n | a;b;c;d | a;b;c;d | a;b;c;d".
std::string triple_to_line(const MapTriple& t);
struct ParsedTripleLine {
  int64_t p = 0;
  int n = 0;
  std::array<std::string, 3> mats;
};
ParsedTripleLine parse_triple_line(const std::string& line);
MapTriple triple_from_parsed(const FieldCtx& F, const ParsedTripleLine& ptl);

}  // namespace trimaps
