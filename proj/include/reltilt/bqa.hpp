#pragma once

#include <optional>
#include <string>

#include "reltilt/relative.hpp"

namespace rt {

// Parsed .bqa description: field, bound quiver, named modules, generator and
// catalog directives.
struct ParsedFile {
  Fp field;
  std::shared_ptr<const BoundAlgebra> alg;
  std::vector<std::pair<std::string, Rep>> namedModules;
  std::vector<std::string> generatorNames;
  std::optional<std::vector<int>> catalogBound;
  std::optional<std::vector<std::string>> catalogExplicit;
};

ParsedFile parseAlgebraFile(const std::string& text, std::optional<std::uint32_t> overrideP = {});

// Semantic serialization (parse -> serialize -> parse is the identity on the
// content).
std::string serializeAlgebraFile(const ParsedFile& pf);

// Name resolution: file-defined modules, built-ins P<v>/I<v>/S<v>, Kronecker
// families J(n) and R(p0:p1,n) on two-vertex double-arrow quivers, and sums
// joined with '+'.
Rep resolveModuleName(const ParsedFile& pf, const std::string& name);

bool isKroneckerShaped(const Quiver& q);
Rep kroneckerJ(std::shared_ptr<const BoundAlgebra> alg, int n);
Rep kroneckerR(std::shared_ptr<const BoundAlgebra> alg, int p0, int p1, int n);

}  // namespace rt
