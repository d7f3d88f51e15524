#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "reltilt/matrix.hpp"

namespace rt {

struct Arrow {
  std::string name;
  int src = 0, tgt = 0;
};

struct Quiver {
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;

  int vertexCount() const { return static_cast<int>(vertices.size()); }
  int arrowCount() const { return static_cast<int>(arrows.size()); }
  int vertexIndex(const std::string& name) const;  // -1 when absent
  int arrowIndex(const std::string& name) const;
  void validate() const;
};

// A path is a composable arrow sequence in application order: arrows[0] acts
// first. The written form "b a" (a first, then b) therefore stores {a, b}.
struct Path {
  int src = 0, tgt = 0;
  std::vector<int> arrows;
  int length() const { return static_cast<int>(arrows.size()); }
};

struct PathTerm {
  Fel coeff = 1;
  std::vector<int> arrows;  // application order
};

struct Relation {
  std::vector<PathTerm> terms;  // parallel paths, each of length >= 2
};

struct RelationIdeal {
  int nilpotency = 2;  // all paths of length >= nilpotency lie in the ideal
  std::vector<Relation> generators;
};

// Bound quiver algebra kQ / (generators + R^L) with a fixed residue-class
// path basis and precomputed structure constants.
struct BoundAlgebra {
  Fp field;
  Quiver quiver;
  RelationIdeal ideal;

  std::vector<Path> allPaths;            // every path of length < L, (length, lex) order
  std::vector<Path> lengthLPaths;        // paths of length exactly L (for module checks)
  std::vector<int> basisOfAll;           // indices into allPaths forming the basis
  std::vector<int> posInBasis;           // allPaths index -> basis position or -1
  std::vector<int> idemBasisPos;         // basis position of e_v per vertex
  std::vector<int> arrowBasisPos;        // basis position of each arrow
  // mult[i][j] = class of path_i after path_j (path_j applied first),
  // as sparse (basis position, coeff) pairs.
  std::vector<std::vector<std::vector<std::pair<int, Fel>>>> mult;

  int dim() const { return static_cast<int>(basisOfAll.size()); }
  const Path& basisPath(int b) const { return allPaths[basisOfAll[b]]; }
  int basisSrc(int b) const { return basisPath(b).src; }
  int basisTgt(int b) const { return basisPath(b).tgt; }

  // Class of an arbitrary arrow word; empty when the word is non-composable
  // or falls in the ideal.
  std::vector<std::pair<int, Fel>> classOfWord(const std::vector<int>& arrows) const;

  // Structure-constant lookup; {} when non-composable or zero.
  const std::vector<std::pair<int, Fel>>& multiply(int i, int j) const { return mult[i][j]; }

 private:
  friend std::shared_ptr<const BoundAlgebra> buildAlgebra(const Quiver&, const RelationIdeal&, Fp);
  Echelon idealSpan{Fp{2}, 0};  // over allPaths coordinates
};

std::vector<Path> enumeratePaths(const Quiver& q, int maxLen);

std::shared_ptr<const BoundAlgebra> buildAlgebra(const Quiver& q, const RelationIdeal& rel, Fp f);

}  // namespace rt
