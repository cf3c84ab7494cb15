#include "trimaps/maps.hpp"

#include <sstream>
#include <stdexcept>

namespace trimaps {

const char* wilson_class_name(WilsonClass c) {
  switch (c) {
    case WilsonClass::I: return "I";
    case WilsonClass::II: return "II";
    case WilsonClass::III: return "III";
    case WilsonClass::IV: return "IV";
  }
  return "?";
}

const char* wilson_op_name(WilsonOp op) {
  switch (op) {
    case WilsonOp::ID: return "ID";
    case WilsonOp::D: return "D";
    case WilsonOp::P: return "P";
    case WilsonOp::DP: return "DP";
    case WilsonOp::PD: return "PD";
    case WilsonOp::DPD: return "DPD";
  }
  return "?";
}

TripleCheck validate_triple(const MapTriple& t) {
  const FieldCtx& F = *t.ctx;
  TripleCheck c;
  auto fail = [&](std::string msg) {
    c.ok = false;
    c.failures.push_back(std::move(msg));
  };
  const ProjMat id = proj_identity(F);
  const std::array<ProjMat, 3> rs = t.arr();
  for (int i = 0; i < 3; ++i) {
    if (rs[i] == id) fail("r" + std::to_string(i) + " is the identity");
    else if (!(pmul(F, rs[i], rs[i]) == id))
      fail("r" + std::to_string(i) + " is not an involution");
  }
  if (t.r0 == t.r2) fail("r0 equals r2");
  ProjMat r02 = pmul(F, t.r0, t.r2);
  if (r02 == id) fail("r0*r2 is the identity");
  else if (!(pmul(F, r02, r02) == id)) fail("r0 and r2 do not commute");
  if (c.ok) {
    if (!is_full_psl2(F, rs)) fail("triple does not generate PSL(2,Q)");
  }
  return c;
}

MapType map_type(const MapTriple& t) {
  const FieldCtx& F = *t.ctx;
  MapType ty;
  ty.p = proj_order(F, pmul(F, t.r0, t.r1));
  ty.q = proj_order(F, pmul(F, t.r1, t.r2));
  ty.r = proj_order(F, pmul(F, pmul(F, t.r0, t.r2), t.r1));
  return ty;
}

namespace {

MapTriple apply_d(const MapTriple& t) { return MapTriple{t.ctx, t.r2, t.r1, t.r0}; }

MapTriple apply_p(const MapTriple& t) {
  return MapTriple{t.ctx, pmul(*t.ctx, t.r0, t.r2), t.r1, t.r2};
}

}  // namespace

MapTriple wilson_image(const MapTriple& t, WilsonOp op) {
  switch (op) {
    case WilsonOp::ID: return t;
    case WilsonOp::D: return apply_d(t);
    case WilsonOp::P: return apply_p(t);
    case WilsonOp::DP: return apply_d(apply_p(t));
    case WilsonOp::PD: return apply_p(apply_d(t));
    case WilsonOp::DPD: return apply_d(apply_p(apply_d(t)));
  }
  throw std::logic_error("unknown Wilson operator");
}

std::optional<IsoWitness> are_isomorphic(const MapTriple& t1,
                                         const MapTriple& t2) {
  const FieldCtx& F = *t1.ctx;
  const std::array<ProjMat, 3> dst = t2.arr();
  for (int k = 0; k < F.deg(); ++k) {
    std::array<ProjMat, 3> src;
    for (int i = 0; i < 3; ++i) src[i] = frobenius_twist(F, t1.arr()[i], k);
    if (auto w = intertwiner(F, src, dst))
      return IsoWitness{k, w->mat, w->in_psl};
  }
  return std::nullopt;
}

std::optional<IsoWitness> find_duality(const MapTriple& t, WilsonOp* which) {
  for (WilsonOp op : {WilsonOp::D, WilsonOp::P, WilsonOp::DPD}) {
    if (auto w = are_isomorphic(t, wilson_image(t, op))) {
      if (which) *which = op;
      return w;
    }
  }
  return std::nullopt;
}

std::optional<IsoWitness> find_triality(const MapTriple& t) {
  return are_isomorphic(t, wilson_image(t, WilsonOp::DP));
}

ClassReport wilson_class(const MapTriple& t) {
  ClassReport rep;
  rep.triality = find_triality(t);
  rep.duality = find_duality(t, &rep.duality_op);
  if (rep.triality && rep.duality) rep.cls = WilsonClass::IV;
  else if (rep.triality) rep.cls = WilsonClass::III;
  else if (rep.duality) rep.cls = WilsonClass::II;
  else rep.cls = WilsonClass::I;
  return rep;
}

bool triality_witness_frobenius(const MapTriple& t) {
  const FieldCtx& F = *t.ctx;
  if (F.n() == 0) return false;
  const int n = F.n();
  return frobenius_twist(F, t.r0, n) == t.r2 &&
         frobenius_twist(F, t.r2, n) == pmul(F, t.r0, t.r2) &&
         frobenius_twist(F, t.r1, n) == t.r1;
}

std::string triple_to_line(const MapTriple& t) {
  const FieldCtx& F = *t.ctx;
  return std::to_string(F.p()) + " " + std::to_string(F.n()) + " | " +
         mat_to_string(F, t.r0.rep()) + " | " + mat_to_string(F, t.r1.rep()) +
         " | " + mat_to_string(F, t.r2.rep());
}

ParsedTripleLine parse_triple_line(const std::string& line) {
  ParsedTripleLine out;
  std::vector<std::string> parts;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, '|')) parts.push_back(cur);
  if (parts.size() != 4) throw std::invalid_argument("expected 'p n | m | m | m'");
  {
    std::stringstream head(parts[0]);
    if (!(head >> out.p >> out.n)) throw std::invalid_argument("bad field header");
    std::string rest;
    if (head >> rest) throw std::invalid_argument("bad field header");
  }
  auto strip = [](std::string s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return std::string();
    return s.substr(b, e - b + 1);
  };
  for (int i = 0; i < 3; ++i) out.mats[i] = strip(parts[i + 1]);
  return out;
}

MapTriple triple_from_parsed(const FieldCtx& F, const ParsedTripleLine& ptl) {
  if (F.p() != ptl.p || F.n() != ptl.n)
    throw std::invalid_argument("field context does not match triple header");
  MapTriple t;
  t.ctx = &F;
  t.r0 = proj(F, mat_from_string(F, ptl.mats[0]));
  t.r1 = proj(F, mat_from_string(F, ptl.mats[1]));
  t.r2 = proj(F, mat_from_string(F, ptl.mats[2]));
  return t;
}

}  // namespace trimaps
