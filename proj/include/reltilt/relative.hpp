#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "reltilt/analysis.hpp"

namespace rt {

struct Triple {
  Map f;  // A -> B
  Map g;  // B -> C
};

struct FExactTriple {
  Map f, g;
  std::vector<int> homSurjRanks;  // rank of Hom(X_i, g) per generator summand
};

// A term of an F-projective resolution: an explicit finite sum of generator
// summands.
struct XSumTerm {
  std::vector<int> gens;  // generator summand indices, with repetition
  Rep rep;
};

struct FRes {
  std::vector<XSumTerm> terms;  // terms[k] = P^{-k}_F
  std::vector<Map> diffs;       // diffs[k]: terms[k+1] -> terms[k]
  Map aug;                      // terms[0] -> M
  std::vector<char> rightMinimalCert;  // per cover, when certificates were requested
};

struct TwoTerm {
  Rep m1, z0;  // degrees -1 and 0, both in add(X)
  Map d;
};

struct EvalRep {
  Rep rep;                                // over Gamma
  std::vector<std::vector<Map>> basisAt;  // chosen basis of Hom(X_i, M) per vertex i
};

struct TorsionVerdict {
  bool isTorsion = false;
  bool layersAgree = true;
  std::string reason;
  std::optional<int> witnessEntry;
};

struct GammaWorld {
  Catalog cat;                    // complete Gamma catalog (enumerated to a bound)
  std::vector<int> evalEntryIdx;  // Lambda catalog index -> Gamma catalog index of e_X(entry)
};

// The relative structure F = F_add(X): generator summands, the presented
// endomorphism algebra Gamma, the evaluation dictionary and lazy caches.
struct FContext {
  std::shared_ptr<const BoundAlgebra> alg;
  std::vector<Rep> xs;
  std::vector<std::string> xNames;
  std::optional<Catalog> cat;
  Limits lim;

  std::shared_ptr<const BoundAlgebra> gamma;
  std::vector<std::vector<std::vector<Map>>> homXX;  // homXX[i][j] = basis of Hom(X_i, X_j)
  std::vector<Map> gammaArrowMap;  // per Gamma arrow i->j: the underlying map X_j -> X_i
  std::vector<Map> gammaBasisMap;  // evaluation of every Gamma basis path

  std::uint32_t fProjMask = 0, fInjMask = 0;  // valid when cat present

  FContext() = default;
  FContext(const FContext&) = delete;
  FContext& operator=(const FContext&) = delete;
  FContext(FContext&&) = default;
  FContext& operator=(FContext&&) = default;

  int n() const { return static_cast<int>(xs.size()); }
  const Catalog& catalog() const;
  std::uint32_t fullMask() const { return (1u << catalog().size()) - 1u; }

  // Lazy caches (single-threaded use).
  mutable std::vector<FRes> entryRes;
  mutable std::vector<std::optional<EvalRep>> entryEval;
  mutable std::vector<std::optional<Rep>> entryTauGamma;
  mutable std::map<std::pair<int, int>, int> extF1Cache, extF2Cache;
  mutable std::map<std::pair<int, int>, bool> pi2VanishCache;   // Hom(pi^{-2}_{M_i}, M_j) = 0
  mutable std::map<std::pair<int, int>, bool> gammaRigidCache;  // Hom_G(eM_i, tau_G eM_j) = 0
  mutable std::map<std::pair<int, int>, bool> homotopyCache;
  mutable std::map<std::pair<std::uint32_t, int>, bool> genFContainsCache;
  mutable std::map<std::uint32_t, std::uint32_t> genFClosureCache;
  mutable std::map<std::uint32_t, TorsionVerdict> torsionCache;
  struct MiddleInfo {
    bool allMatched = true;
    std::vector<std::vector<int>> classFactors;  // per nonzero class: factor indices (sorted)
  };
  mutable std::map<std::pair<std::uint32_t, std::uint32_t>, MiddleInfo> middleCache;
  mutable std::optional<GammaWorld> gworld;
};

FContext buildFContext(std::shared_ptr<const BoundAlgebra> alg, std::vector<Rep> xs,
                       std::vector<std::string> xNames, std::optional<Catalog> cat, const Limits& lim = {});

EvalRep evalModule(const FContext& ctx, const Rep& m);
Map evalMap(const FContext& ctx, const Map& f, const EvalRep& src, const EvalRep& dst);
const EvalRep& entryEvalOf(const FContext& ctx, int entry);
const Rep& entryTauGammaOf(const FContext& ctx, int entry);

bool isFEpicMap(const FContext& ctx, const Map& g);
bool isFMonicMap(const FContext& ctx, const Map& f);
std::optional<FExactTriple> isFExact(const FContext& ctx, const Map& f, const Map& g);
Triple completeEpi(const FContext& ctx, const Map& g);   // prepend the kernel
Triple completeMono(const FContext& ctx, const Map& f);  // append the cokernel

Triple pushoutTriple(const Triple& t, const Map& a);   // along a: A -> A'
Triple pullbackTriple(const Triple& t, const Map& c);  // along c: C' -> C

struct FCoverRes {
  XSumTerm p;
  Map aug;
};
FCoverRes fCover(const FContext& ctx, const Rep& m);

FRes minimalFResolution(const FContext& ctx, const Rep& m, int length, bool certificates = false);
const FRes& entryResolution(const FContext& ctx, int entry, int length);
FRes resolutionOfSum(const FContext& ctx, const std::vector<int>& entries, int length);
Rep sumOfEntries(const FContext& ctx, const std::vector<int>& entries);

struct ExtFResult {
  int dim = 0;
  std::vector<Map> cocycles;  // representatives P^{-i} -> N of a basis
};
ExtFResult extFDim(const FContext& ctx, const Rep& m, const Rep& n, int i);
int extF1Entries(const FContext& ctx, int i, int j);
int extF2Entries(const FContext& ctx, int i, int j);

// All p^d cohomology classes of Ext^1_F(C, A) as representative cocycles,
// including zero at index 0.
std::vector<Map> extF1ClassReps(const FContext& ctx, const Rep& c, const Rep& a);

std::optional<int> pdF(const FContext& ctx, const Rep& m, int bound);
std::optional<int> glDimF(const FContext& ctx, int bound);

struct MiddleTermResult {
  Rep b;
  Triple triple;
};
MiddleTermResult middleTerm(const FContext& ctx, const Rep& c, const Rep& a, const Map& cocycle);

bool genFContains(const FContext& ctx, const Rep& m, const Rep& z);
std::uint32_t genFClosureOfRep(const FContext& ctx, const Rep& m);
std::uint32_t genFClosureMask(const FContext& ctx, std::uint32_t mask);

TorsionVerdict isFTorsionClass(const FContext& ctx, std::uint32_t mask);
bool isFPreenveloping(const FContext& ctx, std::uint32_t mask);

struct FProjInj {
  std::uint32_t pMask = 0, iMask = 0;
};
FProjInj fProjInj(const FContext& ctx);

Map leftApproximation(const Rep& n, const std::vector<Rep>& targets, bool minimize, const Limits& lim = {});
FExactTriple constructPreenvelope(const FContext& ctx, const Rep& n, std::uint32_t mask);

TwoTerm twoTermOf(const FContext& ctx, const Rep& m);
bool homotopyHomVanishes(const TwoTerm& p, const TwoTerm& q);
bool homotopyPairVanishes(const FContext& ctx, int i, int j);

const GammaWorld& gammaWorld(const FContext& ctx);

// Assorted helpers shared with classify/tests.
std::vector<int> maskToEntries(std::uint32_t mask);
std::uint32_t entriesToMask(const std::vector<int>& entries);
std::optional<std::vector<int>> matchFactorsToCatalog(const FContext& ctx, const Rep& m);

}  // namespace rt
