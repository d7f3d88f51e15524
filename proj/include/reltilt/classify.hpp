#pragma once

#include "reltilt/relative.hpp"

namespace rt {

struct PresiltingVerdict {
  bool viaPropB = false;
  bool viaGamma = false;
  bool viaHomotopy = false;
  bool agreed() const { return viaPropB == viaGamma && viaGamma == viaHomotopy; }
  bool value() const { return viaPropB && viaGamma && viaHomotopy; }
};

PresiltingVerdict isFPresilting(const FContext& ctx, const Rep& m);
PresiltingVerdict isFPresiltingMask(const FContext& ctx, std::uint32_t mask);

// Pair tables backing the oracles (exposed for the property suites).
bool pi2VanishPair(const FContext& ctx, int i, int j);    // Hom(pi^{-2}_{M_i}, M_j) = 0
bool gammaRigidPair(const FContext& ctx, int i, int j);   // Hom_G(e M_i, tau_G e M_j) = 0

struct FTiltingResult {
  bool ok = false;
  std::string why;
  std::vector<Triple> coresolutions;  // one per generator summand when ok
};
FTiltingResult isFTilting(const FContext& ctx, const Rep& t);
FTiltingResult isFTiltingMask(const FContext& ctx, std::uint32_t mask);

Rep genFMinimalReduct(const FContext& ctx, const Rep& m);

struct PresiltingPair {
  bool isPair = false;
  bool isSupportSilting = false;
  PresiltingVerdict verdict;
  int rkM = 0, rkXp = 0, rkX = 0;
};
PresiltingPair pairClassify(const FContext& ctx, const Rep& m, const Rep& xp);

struct ExtProjResult {
  Rep p;                          // over Gamma
  std::vector<int> pEntries;      // Gamma catalog indices of the summands
  std::vector<int> genEntries;    // Gamma catalog indices of gen(N)
};
ExtProjResult extProjectivesOfGen(const FContext& ctx, const Rep& nGamma);

bool isSpecialFPresilting(const FContext& ctx, const Rep& m);
bool isSpecialFPresiltingMask(const FContext& ctx, std::uint32_t mask);

struct AdmissibleResult {
  bool admissible = true;
  std::vector<int> counterexampleEntries;  // catalog indices of the basic counterexample
};
AdmissibleResult isFAdmissible(const FContext& ctx);

struct TorsionFilter {
  bool nonzero = false;
  bool preenveloping = false;
  bool fPreenveloping = false;
};
std::vector<std::uint32_t> enumerateTorsionClasses(const FContext& ctx, const TorsionFilter& filter);

struct TheoremReport {
  std::vector<std::uint32_t> leftMasks;                          // basic modules as catalog masks
  std::vector<std::uint32_t> rightMasks;                         // torsion classes
  std::vector<std::pair<std::uint32_t, std::uint32_t>> mapping;  // module -> gen_F closure
  bool bijectionHolds = false;
  std::string failure;
};

TheoremReport verifyTheoremTilting(const FContext& ctx);
Rep buildFTiltingFromTorsion(const FContext& ctx, std::uint32_t mask);
TheoremReport verifyTheoremSpecial(const FContext& ctx);

// All basic F-presilting pairs (as catalog mask, generator index subset)
// whose gen_F closure equals the given class.
struct PairListing {
  std::uint32_t mMask;
  std::vector<int> xpGens;
  bool support;
};
std::vector<PairListing> presiltingPairsAttaining(const FContext& ctx, std::uint32_t closureMask);

}  // namespace rt
