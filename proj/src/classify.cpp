#include "reltilt/classify.hpp"

#include <algorithm>

namespace rt {

bool pi2VanishPair(const FContext& ctx, int i, int j) {
  auto key = std::make_pair(i, j);
  auto it = ctx.pi2VanishCache.find(key);
  if (it != ctx.pi2VanishCache.end()) return it->second;
  const FRes& res = entryResolution(ctx, i, 2);
  bool ok = true;
  for (const auto& h : homBasis(res.terms[1].rep, ctx.catalog().entries[j]))
    if (!compose(h, res.diffs[1]).isZeroMap()) {
      ok = false;
      break;
    }
  ctx.pi2VanishCache[key] = ok;
  return ok;
}

bool gammaRigidPair(const FContext& ctx, int i, int j) {
  auto key = std::make_pair(i, j);
  auto it = ctx.gammaRigidCache.find(key);
  if (it != ctx.gammaRigidCache.end()) return it->second;
  bool ok = homDim(entryEvalOf(ctx, i).rep, entryTauGammaOf(ctx, j)) == 0;
  ctx.gammaRigidCache[key] = ok;
  return ok;
}

PresiltingVerdict isFPresiltingMask(const FContext& ctx, std::uint32_t mask) {
  PresiltingVerdict v;
  auto entries = maskToEntries(mask);
  v.viaPropB = v.viaGamma = v.viaHomotopy = true;
  for (int i : entries)
    for (int j : entries) {
      if (!pi2VanishPair(ctx, i, j) || extF1Entries(ctx, i, j) != 0) v.viaPropB = false;
      if (!gammaRigidPair(ctx, i, j)) v.viaGamma = false;
      if (!homotopyPairVanishes(ctx, i, j)) v.viaHomotopy = false;
    }
  return v;
}

PresiltingVerdict isFPresilting(const FContext& ctx, const Rep& m) {
  PresiltingVerdict v;
  if (m.isZero()) {
    v.viaPropB = v.viaGamma = v.viaHomotopy = true;
    return v;
  }
  if (ctx.cat) {
    auto entries = matchFactorsToCatalog(ctx, m);
    if (entries) {
      std::uint32_t mask = entriesToMask(*entries);
      // Multiplicities do not affect any of the three conditions.
      return isFPresiltingMask(ctx, mask);
    }
  }
  FRes res = minimalFResolution(ctx, m, 2, false);
  v.viaPropB = true;
  for (const auto& h : homBasis(res.terms[1].rep, m))
    if (!compose(h, res.diffs[1]).isZeroMap()) {
      v.viaPropB = false;
      break;
    }
  if (v.viaPropB) v.viaPropB = extFDim(ctx, m, m, 1).dim == 0;
  EvalRep em = evalModule(ctx, m);
  Rep tg = tau(em.rep);
  v.viaGamma = homDim(em.rep, tg) == 0;
  TwoTerm tt{res.terms[1].rep, res.terms[0].rep, res.diffs[0]};
  v.viaHomotopy = homotopyHomVanishes(tt, tt);
  return v;
}

namespace {

FTiltingResult tiltingOver(const FContext& ctx, const Rep& t, const std::vector<Rep>& summands) {
  FTiltingResult out;
  if (t.isZero()) {
    out.why = "zero module";
    return out;
  }
  if (!pdF(ctx, t, 1)) {
    out.why = "pd_F exceeds 1";
    return out;
  }
  if (extFDim(ctx, t, t, 1).dim != 0 || extFDim(ctx, t, t, 2).dim != 0) {
    out.why = "self-extensions do not vanish";
    return out;
  }
  for (int k = 0; k < ctx.n(); ++k) {
    Map w = leftApproximation(ctx.xs[k], summands, true, ctx.lim);
    if (!isFMonicMap(ctx, w)) {
      out.why = "coresolution of a generator summand fails (approximation not F-monic)";
      return out;
    }
    auto kc = kernelCokernel(w);
    if (!kc.coker.isZero()) {
      auto dec = decompose(kc.coker, ctx.lim);
      for (const auto& fac : dec.factors) {
        bool in = false;
        for (const auto& s : summands)
          if (isIsomorphic(fac.piece, s, ctx.lim)) {
            in = true;
            break;
          }
        if (!in) {
          out.why = "coresolution cokernel leaves add(T)";
          return out;
        }
      }
    }
    out.coresolutions.push_back(Triple{w, kc.cokerProj});
  }
  out.ok = true;
  return out;
}

}  // namespace

FTiltingResult isFTiltingMask(const FContext& ctx, std::uint32_t mask) {
  std::vector<Rep> summands;
  for (int e : maskToEntries(mask)) summands.push_back(ctx.catalog().entries[e]);
  Rep t = sumOfEntries(ctx, maskToEntries(mask));
  return tiltingOver(ctx, t, summands);
}

FTiltingResult isFTilting(const FContext& ctx, const Rep& t) {
  if (t.isZero()) {
    FTiltingResult r;
    r.why = "zero module";
    return r;
  }
  auto dec = decompose(t, ctx.lim);
  return tiltingOver(ctx, t, dec.classReps());
}

Rep genFMinimalReduct(const FContext& ctx, const Rep& m) {
  if (m.isZero()) fail(Errc::BadInput, "gen_F-minimal reduct of the zero module");
  auto dec = decompose(m, ctx.lim);
  std::vector<Rep> parts;
  for (const auto& f : dec.factors) parts.push_back(f.piece);

  bool changed = true;
  while (changed && parts.size() > 1) {
    changed = false;
    for (size_t k = 0; k < parts.size(); ++k) {
      std::vector<Rep> rest;
      for (size_t j = 0; j < parts.size(); ++j)
        if (j != k) rest.push_back(parts[j]);
      Rep restSum = directSum(ctx.alg, rest).rep;
      if (genFContains(ctx, restSum, parts[k])) {
        parts.erase(parts.begin() + static_cast<long>(k));
        changed = true;
        break;
      }
    }
  }
  return parts.empty() ? Rep::zero(ctx.alg) : directSum(ctx.alg, parts).rep;
}

PresiltingPair pairClassify(const FContext& ctx, const Rep& m, const Rep& xp) {
  PresiltingPair out;
  if (!xp.isZero()) {
    auto dec = decompose(xp, ctx.lim);
    for (const auto& f : dec.factors) {
      bool in = false;
      for (const auto& x : ctx.xs)
        if (isIsomorphic(f.piece, x, ctx.lim)) {
          in = true;
          break;
        }
      if (!in) fail(Errc::BadInput, "second pair component is not in add(X)");
    }
    out.rkXp = dec.rk();
  }
  out.verdict = isFPresilting(ctx, m);
  out.rkM = m.isZero() ? 0 : decompose(m, ctx.lim).rk();
  out.rkX = ctx.n();
  bool homVanishes = xp.isZero() || homDim(xp, m) == 0;
  out.isPair = out.verdict.value() && homVanishes;
  out.isSupportSilting = out.isPair && (out.rkX == out.rkM + out.rkXp);
  return out;
}

namespace {

bool ordinaryGenContains(const Rep& n, const Rep& z) {
  auto hb = homBasis(n, z);
  if (hb.empty()) return z.isZero();
  auto alg = n.alg;
  std::vector<Rep> parts(hb.size(), n);
  auto sum = directSum(alg, parts);
  Map g = Map::zero(sum.rep, z);
  for (size_t k = 0; k < hb.size(); ++k)
    for (size_t v = 0; v < g.f.size(); ++v) {
      const Mat& b = hb[k].f[v];
      for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) g.f[v].at(i, static_cast<int>(k) * n.dims[v] + j) = b.at(i, j);
    }
  return g.vertexwiseSurjective();
}

}  // namespace

ExtProjResult extProjectivesOfGen(const FContext& ctx, const Rep& nGamma) {
  if (nGamma.alg != ctx.gamma) fail(Errc::BadInput, "module is not over Gamma");
  const GammaWorld& gw = gammaWorld(ctx);
  ExtProjResult out;
  if (nGamma.isZero()) {
    out.p = Rep::zero(ctx.gamma);
    return out;
  }
  Rep tg = tau(nGamma);
  if (homDim(nGamma, tg) != 0) fail(Errc::NotTauRigid, "module is not tau-rigid over Gamma");

  for (int z = 0; z < gw.cat.size(); ++z)
    if (ordinaryGenContains(nGamma, gw.cat.entries[z])) out.genEntries.push_back(z);
  for (int z : out.genEntries) {
    bool extProj = true;
    for (int y : out.genEntries)
      if (extDim(gw.cat.entries[z], gw.cat.entries[y], 1) != 0) {
        extProj = false;
        break;
      }
    if (extProj) out.pEntries.push_back(z);
  }
  std::vector<Rep> parts;
  for (int z : out.pEntries) parts.push_back(gw.cat.entries[z]);
  out.p = parts.empty() ? Rep::zero(ctx.gamma) : directSum(ctx.gamma, parts).rep;
  return out;
}

bool isSpecialFPresiltingMask(const FContext& ctx, std::uint32_t mask) {
  if (mask == 0) return false;
  if (!isFPresiltingMask(ctx, mask).value()) return false;
  const GammaWorld& gw = gammaWorld(ctx);

  EvalRep em = evalModule(ctx, sumOfEntries(ctx, maskToEntries(mask)));
  ExtProjResult pr = extProjectivesOfGen(ctx, em.rep);
  std::uint32_t pSet = 0;
  for (int z : pr.pEntries) pSet |= 1u << z;

  std::uint32_t evalSet = 0;
  for (int e : maskToEntries(mask)) evalSet |= 1u << gw.evalEntryIdx[e];

  // Maximality: no further indecomposable can be added while dividing P.
  // Divisibility for a sum forces it per summand, so indecomposable
  // candidates decide the condition.
  for (int e = 0; e < ctx.catalog().size(); ++e) {
    if (mask & (1u << e)) continue;
    std::uint32_t withE = evalSet | (1u << gw.evalEntryIdx[e]);
    if ((withE & ~pSet) == 0) return false;  // e_X(M (+) M') divides P(gen e_X M)
  }
  return true;
}

bool isSpecialFPresilting(const FContext& ctx, const Rep& m) {
  auto entries = matchFactorsToCatalog(ctx, m);
  if (!entries) fail(Errc::IncompleteCatalog, "module has factors outside the catalog");
  // Basic: no repeated factors.
  for (size_t i = 0; i + 1 < entries->size(); ++i)
    if ((*entries)[i] == (*entries)[i + 1]) return false;
  return isSpecialFPresiltingMask(ctx, entriesToMask(*entries));
}

AdmissibleResult isFAdmissible(const FContext& ctx) {
  const Catalog& cat = ctx.catalog();
  if (!cat.complete()) fail(Errc::IncompleteCatalog, "F-admissibility needs a complete catalog");
  AdmissibleResult out;

  // Both conditions are additive in the module, so singleton and pair
  // counterexamples decide the scan. Largest candidates are visited first.
  std::vector<int> order(cat.size());
  for (int i = 0; i < cat.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (cat.entries[a].total() != cat.entries[b].total()) return cat.entries[a].total() > cat.entries[b].total();
    return a > b;
  });

  auto isCex = [&](const std::vector<int>& s) {
    for (int a : s)
      for (int b : s)
        if (extF1Entries(ctx, a, b) != 0) return false;
    for (int a : s)
      for (int b : s)
        if (!pi2VanishPair(ctx, a, b)) return true;
    return false;
  };

  for (int i : order)
    if (isCex({i})) {
      out.admissible = false;
      out.counterexampleEntries = {i};
      return out;
    }
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < cat.size(); ++i)
    for (int j = i + 1; j < cat.size(); ++j) pairs.emplace_back(i, j);
  std::sort(pairs.begin(), pairs.end(), [&](auto a, auto b) {
    int ta = cat.entries[a.first].total() + cat.entries[a.second].total();
    int tb = cat.entries[b.first].total() + cat.entries[b.second].total();
    if (ta != tb) return ta > tb;
    return a > b;
  });
  for (auto [i, j] : pairs)
    if (isCex({i, j})) {
      out.admissible = false;
      out.counterexampleEntries = {i, j};
      return out;
    }
  return out;
}

std::vector<std::uint32_t> enumerateTorsionClasses(const FContext& ctx, const TorsionFilter& filter) {
  const Catalog& cat = ctx.catalog();
  if (cat.size() > ctx.lim.subsetBound) fail(Errc::CapExceeded, "catalog exceeds the subset enumeration bound");
  std::vector<std::uint32_t> out;
  std::uint32_t full = ctx.fullMask();
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    if (filter.nonzero && mask == 0) continue;
    if (!isFTorsionClass(ctx, mask).isTorsion) continue;
    if (filter.fPreenveloping && !isFPreenveloping(ctx, mask)) continue;
    // Every additively finite class over a complete finite catalog is
    // preenveloping, so that filter never rejects here.
    out.push_back(mask);
  }
  return out;
}

Rep buildFTiltingFromTorsion(const FContext& ctx, std::uint32_t mask) {
  if (!isFTorsionClass(ctx, mask).isTorsion) fail(Errc::HypothesisFailed, "class is not F-torsion");
  if (!isFPreenveloping(ctx, mask)) fail(Errc::HypothesisFailed, "class is not F-preenveloping");
  std::vector<Rep> targets;
  for (int e : maskToEntries(mask)) targets.push_back(ctx.catalog().entries[e]);

  std::vector<Rep> parts;
  for (int k = 0; k < ctx.n(); ++k) {
    Map w = leftApproximation(ctx.xs[k], targets, true, ctx.lim);
    if (!isFMonicMap(ctx, w)) fail(Errc::HypothesisFailed, "generator preenvelope is not F-monic");
    auto kc = kernelCokernel(w);
    if (!w.dst.isZero()) parts.push_back(w.dst);
    if (!kc.coker.isZero()) parts.push_back(kc.coker);
  }
  Rep big = parts.empty() ? Rep::zero(ctx.alg) : directSum(ctx.alg, parts).rep;
  Rep basic = decompose(big, ctx.lim).basicPart(ctx.alg);

  auto entries = matchFactorsToCatalog(ctx, basic);
  if (!entries) fail(Errc::Internal, "constructed F-tilting module leaves the catalog");
  Rep result = sumOfEntries(ctx, *entries);
  std::uint32_t rm = entriesToMask(*entries);
  if (!isFTiltingMask(ctx, rm).ok) fail(Errc::Internal, "constructed module fails the F-tilting test");
  if (genFClosureMask(ctx, rm) != mask) fail(Errc::Internal, "constructed module generates the wrong class");
  return result;
}

TheoremReport verifyTheoremTilting(const FContext& ctx) {
  TheoremReport rep;
  std::uint32_t full = ctx.fullMask();
  for (std::uint32_t mask = 1; mask <= full; ++mask)
    if (isFTiltingMask(ctx, mask).ok) rep.leftMasks.push_back(mask);
  for (std::uint32_t mask = 1; mask <= full; ++mask)
    if (isFTorsionClass(ctx, mask).isTorsion && isFPreenveloping(ctx, mask)) rep.rightMasks.push_back(mask);

  rep.bijectionHolds = true;
  std::map<std::uint32_t, std::uint32_t> seen;
  for (std::uint32_t m : rep.leftMasks) {
    std::uint32_t c = genFClosureMask(ctx, m);
    rep.mapping.emplace_back(m, c);
    if (std::find(rep.rightMasks.begin(), rep.rightMasks.end(), c) == rep.rightMasks.end()) {
      rep.bijectionHolds = false;
      rep.failure = "gen_F of an F-tilting module is not a qualifying class";
    }
    auto it = seen.find(c);
    if (it != seen.end()) {
      rep.bijectionHolds = false;
      rep.failure = "two F-tilting modules share a gen_F class";
    }
    seen[c] = m;
  }
  for (std::uint32_t r : rep.rightMasks) {
    if (!seen.count(r)) {
      rep.bijectionHolds = false;
      rep.failure = "a qualifying torsion class has no F-tilting preimage";
      continue;
    }
    // Constructive cross-derivation.
    Rep t = buildFTiltingFromTorsion(ctx, r);
    auto entries = matchFactorsToCatalog(ctx, t);
    if (!entries || entriesToMask(*entries) != seen[r]) {
      rep.bijectionHolds = false;
      rep.failure = "re-derived F-tilting module differs from the enumerated one";
    }
  }
  return rep;
}

TheoremReport verifyTheoremSpecial(const FContext& ctx) {
  auto adm = isFAdmissible(ctx);
  if (!adm.admissible) {
    std::string names;
    for (int e : adm.counterexampleEntries) {
      if (!names.empty()) names += "+";
      names += ctx.catalog().names[e];
    }
    fail(Errc::NotAdmissible, "context is not F-admissible; counterexample " + names);
  }

  TheoremReport rep;
  std::uint32_t full = ctx.fullMask();
  for (std::uint32_t mask = 1; mask <= full; ++mask)
    if (isFPresiltingMask(ctx, mask).value() && isSpecialFPresiltingMask(ctx, mask)) rep.leftMasks.push_back(mask);
  for (std::uint32_t mask = 1; mask <= full; ++mask)
    if (isFTorsionClass(ctx, mask).isTorsion) rep.rightMasks.push_back(mask);

  rep.bijectionHolds = true;
  std::map<std::uint32_t, std::uint32_t> seen;
  for (std::uint32_t m : rep.leftMasks) {
    std::uint32_t c = genFClosureMask(ctx, m);
    rep.mapping.emplace_back(m, c);
    if (std::find(rep.rightMasks.begin(), rep.rightMasks.end(), c) == rep.rightMasks.end()) {
      rep.bijectionHolds = false;
      rep.failure = "gen_F of a special F-presilting module is not a nonzero torsion class";
    }
    if (seen.count(c)) {
      rep.bijectionHolds = false;
      rep.failure = "two special F-presilting modules share a gen_F class";
    }
    seen[c] = m;
  }
  for (std::uint32_t r : rep.rightMasks)
    if (!seen.count(r)) {
      rep.bijectionHolds = false;
      rep.failure = "a nonzero preenveloping F-torsion class has no special preimage";
    }
  return rep;
}

std::vector<PairListing> presiltingPairsAttaining(const FContext& ctx, std::uint32_t closureMask) {
  std::vector<PairListing> out;
  std::uint32_t full = ctx.fullMask();
  for (std::uint32_t m = 1; m <= full; ++m) {
    if (!isFPresiltingMask(ctx, m).value()) continue;
    if (genFClosureMask(ctx, m) != closureMask) continue;
    Rep mRep = sumOfEntries(ctx, maskToEntries(m));
    // Generator subsets X' with Hom(X', M) = 0; list in subset order.
    std::vector<int> viable;
    for (int k = 0; k < ctx.n(); ++k)
      if (homDim(ctx.xs[k], mRep) == 0) viable.push_back(k);
    for (std::uint32_t s = 0; s < (1u << viable.size()); ++s) {
      PairListing pl;
      pl.mMask = m;
      for (size_t t = 0; t < viable.size(); ++t)
        if (s & (1u << t)) pl.xpGens.push_back(viable[t]);
      int rkM = static_cast<int>(maskToEntries(m).size());
      pl.support = (ctx.n() == rkM + static_cast<int>(pl.xpGens.size()));
      out.push_back(std::move(pl));
    }
  }
  return out;
}

}  // namespace rt
