#pragma once

#include <memory>
#include <vector>

#include "reltilt/quiver.hpp"

namespace rt {

// A finite-dimensional module over a bound quiver algebra: one space per
// vertex and one matrix per arrow, satisfying the relations.
struct Rep {
  std::shared_ptr<const BoundAlgebra> alg;
  std::vector<int> dims;
  std::vector<Mat> arrow;  // arrow[a]: dims[tgt] x dims[src]

  int total() const;
  bool isZero() const { return total() == 0; }
  static Rep zero(std::shared_ptr<const BoundAlgebra> alg);
  Mat evalWord(const std::vector<int>& arrows) const;  // composite action
  Mat evalPath(const Path& p) const;                   // identity at p.src when trivial
  void validate() const;                               // shapes + all relations
  bool satisfiesRelations() const;
  bool operator==(const Rep& o) const { return alg == o.alg && dims == o.dims && arrow == o.arrow; }
};

struct Map {
  Rep src, dst;
  std::vector<Mat> f;  // per vertex: dims_dst(v) x dims_src(v)

  static Map zero(const Rep& src, const Rep& dst);
  static Map identity(const Rep& m);
  bool isZeroMap() const;
  bool intertwines() const;
  void validate() const;
  Map scaled(Fel c) const;
  Map plus(const Map& o) const;
  Map minus(const Map& o) const;
  bool vertexwiseInjective() const;
  bool vertexwiseSurjective() const;
  bool isIsoMap() const;
  bool operator==(const Map& o) const { return f == o.f && src == o.src && dst == o.dst; }
};

Map compose(const Map& g, const Map& f);  // g after f

struct SumRep {
  Rep rep;
  std::vector<Map> inj;   // canonical injections
  std::vector<Map> proj;  // canonical projections
};
SumRep directSum(std::shared_ptr<const BoundAlgebra> alg, const std::vector<Rep>& parts);

struct KerCoker {
  Rep ker;
  Map kerIncl;  // ker -> src
  Rep img;
  Map imgIncl;        // img -> dst
  Map corestriction;  // src -> img
  Rep coker;
  Map cokerProj;  // dst -> coker
};
KerCoker kernelCokernel(const Map& f);

enum class StdKind { Simple, Proj, Inj };

struct StdModule {
  StdKind kind = StdKind::Simple;
  int v = 0;
  Rep rep;
  // basisAt[w] lists the algebra basis positions realizing rep's vertex-w
  // coordinates (paths from v for projectives, paths into v for injectives).
  std::vector<std::vector<int>> basisAt;
};

StdModule standardModule(std::shared_ptr<const BoundAlgebra> alg, StdKind kind, int v);

// An explicit finite direct sum of standard modules of one kind.
struct StdSum {
  StdKind kind = StdKind::Proj;
  std::vector<int> verts;
  std::vector<StdModule> mods;
  Rep rep;
  std::vector<std::vector<int>> colOffset;  // colOffset[k][w]: block start of summand k at w

  bool empty() const { return verts.empty(); }
};

StdSum makeStdSum(std::shared_ptr<const BoundAlgebra> alg, StdKind kind, const std::vector<int>& verts);

struct NakayamaResult {
  StdSum src;  // nu of the input source (injectives)
  StdSum dst;
  Map nu;
};

// Transports a map between explicit sums of indecomposable projectives to the
// corresponding sums of indecomposable injectives through e_i A e_j.
NakayamaResult nakayamaOnProjectives(const StdSum& from, const StdSum& to, const Map& d);

// Radical (arrow-ideal image) dimensions and a complement: at each vertex the
// non-pivot standard coordinates descend to a basis of top(M).
struct TopData {
  std::vector<Echelon> rad;                 // per vertex: span of incoming arrow images
  std::vector<std::vector<int>> topCoords;  // per vertex: coordinate indices lifting top(M)
  std::vector<int> topDims;
};
TopData topOf(const Rep& m);

struct Cover {
  StdSum p;  // projective cover
  Map aug;   // p.rep -> m
};
Cover projCover(const Rep& m);

}  // namespace rt
