#pragma once

#include <json.hpp>

#include "reltilt/bqa.hpp"
#include "reltilt/classify.hpp"

namespace rt {

using Json = nlohmann::ordered_json;

// A parsed file promoted to a working context: built catalog, generator
// context and display names.
struct Workspace {
  ParsedFile pf;
  FContext ctx;
  std::vector<std::string> entryNames;  // display name per catalog entry

  Workspace() = default;
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
  Workspace(Workspace&&) = default;
  Workspace& operator=(Workspace&&) = default;

  std::string maskNames(std::uint32_t mask) const;
  Json maskList(std::uint32_t mask) const;
};

Workspace buildWorkspace(ParsedFile pf, const Limits& lim = {});

struct RunOptions {
  std::string command;
  std::vector<std::string> args;
  int maxResLen = 8;
  std::string filterSpec;  // comma-joined: all,nonzero,preenveloping,fPreenveloping
  int kroneckerN = 3;
  bool timing = false;
};

struct RunResult {
  Json report;
  int exitCode = 0;  // 0 ok / 1 property-false / 2 error
  std::string text;
};

RunResult runCommand(Workspace& ws, const RunOptions& opt);

// target: "torsion-lattice" or "quiver".
std::string emitDot(Workspace& ws, const std::string& target);

}  // namespace rt
