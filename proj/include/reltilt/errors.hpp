#pragma once

#include <stdexcept>
#include <string>

namespace rt {

enum class Errc {
  CapExceeded,
  NotAGenerator,
  DuplicateSummand,
  IncompleteCatalog,
  NotAdmissible,
  HypothesisFailed,
  NotTauRigid,
  BadInput,
  Parse,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc c, std::string msg) : std::runtime_error(std::move(msg)), code(c) {}
  Errc code;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

inline const char* errcName(Errc c) {
  switch (c) {
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::NotAGenerator: return "NotAGenerator";
    case Errc::DuplicateSummand: return "DuplicateSummand";
    case Errc::IncompleteCatalog: return "IncompleteCatalog";
    case Errc::NotAdmissible: return "NotAdmissible";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::NotTauRigid: return "NotTauRigid";
    case Errc::BadInput: return "BadInput";
    case Errc::Parse: return "Parse";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace rt
