#pragma once

#include <cstdint>
#include <optional>

#include "reltilt/rep.hpp"

namespace rt {

struct Limits {
  std::uint64_t enumCap = 1'000'000;  // candidate vectors for enumerated searches
  int subsetBound = 20;               // max catalog size for subset enumeration
  int maxResLen = 8;                  // default resolution length bound
};

// F_p-basis of Hom(M, N), deterministic (kernel of the intertwiner system in
// reduced echelon order).
std::vector<Map> homBasis(const Rep& m, const Rep& n);
int homDim(const Rep& m, const Rep& n);

std::vector<Fel> flattenMap(const Map& f);
Map unflattenMap(const Rep& src, const Rep& dst, const std::vector<Fel>& v);
// Coordinates of g in the span of basis; throws Internal when absent.
std::vector<Fel> homCoords(const std::vector<Map>& basis, const Map& g);
// Matrix of h |-> post o h o pre between given hom bases.
Mat homInduced(const std::vector<Map>& fromBasis, const std::vector<Map>& toBasis,
               const std::optional<Map>& post, const std::optional<Map>& pre);

std::optional<Map> isIsomorphic(const Rep& m, const Rep& n, const Limits& lim = {});
bool isIndecomposable(const Rep& m, const Limits& lim = {});

struct Factor {
  Rep piece;
  Map incl;  // piece -> M
  Map proj;  // M -> piece, proj o incl = id
};
struct Decomposition {
  std::vector<Factor> factors;                   // indecomposable pieces
  std::vector<std::pair<int, int>> classes;      // (factor index of representative, multiplicity)
  int rk() const { return static_cast<int>(classes.size()); }
  std::vector<Rep> classReps() const;
  Rep basicPart(std::shared_ptr<const BoundAlgebra> alg) const;
};
Decomposition decompose(const Rep& m, const Limits& lim = {});

enum class Provenance { EnumeratedToBound, UserSupplied };

struct Catalog {
  std::shared_ptr<const BoundAlgebra> alg;
  std::vector<Rep> entries;
  std::vector<std::string> names;
  Provenance provenance = Provenance::UserSupplied;
  std::vector<int> bound;
  bool complete() const { return provenance == Provenance::EnumeratedToBound; }
  int size() const { return static_cast<int>(entries.size()); }
  int findIso(const Rep& m, const Limits& lim = {}) const;  // -1 when absent
};

Catalog enumerateIndecomposables(std::shared_ptr<const BoundAlgebra> alg, const std::vector<int>& bound,
                                 const Limits& lim = {});

// Radical Hom-space rad(M, N), assembled blockwise from a decomposition.
std::vector<Map> radHomBasis(const Rep& m, const Rep& n, const Limits& lim = {});
// Non-invertible endomorphisms of an indecomposable module.
std::vector<Map> radEndBasis(const Rep& m, const Limits& lim = {});
// Span of {h o g : g in rad(M, Z), h in rad(Z, N)} over the given middles.
std::vector<Map> radCompositeBasis(const Rep& m, const std::vector<Rep>& middles, const Rep& n,
                                   const Limits& lim = {});

struct Presentation {
  StdSum p1, p0;
  Map d;    // p1 -> p0
  Map aug;  // p0 -> M
};
Presentation minimalPresentation(const Rep& m);

struct OrdResolution {
  std::vector<StdSum> terms;  // terms[0] covers M
  std::vector<Map> diffs;     // diffs[k]: terms[k+1] -> terms[k]
  Map aug;
};
OrdResolution ordinaryResolution(const Rep& m, int length);

Rep tau(const Rep& m);

int ext1Dim(const Rep& m, const Rep& n);
int extDim(const Rep& m, const Rep& n, int i);

enum class Side { Left, Right };
bool isMinimal(const Map& f, Side side, const Limits& lim = {});

// Endomorphism search helpers shared with the relative layer.
std::vector<Map> endBasis(const Rep& m);
std::optional<Map> findNontrivialIdempotent(const std::vector<Map>& basisAll, const Rep& m, const Limits& lim);
// Fitting projector of an endomorphism (projection onto the stable image);
// nullopt when it is trivial (0 or identity).
std::optional<Map> fittingProjector(const Map& phi);

}  // namespace rt
