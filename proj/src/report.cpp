#include "ivmech/report.hpp"

namespace ivmech {

const char* target_name(Target target) {
  switch (target) {
    case Target::Value: return "value";
    case Target::Cost: return "cost";
    case Target::Det: return "det";
  }
  return "unknown";
}

const char* path_name(SolvePath path) {
  switch (path) {
    case SolvePath::Duo: return "duo";
    case SolvePath::Binary: return "binary";
    case SolvePath::Lp: return "lp";
    case SolvePath::Oracle: return "oracle";
    case SolvePath::Propagation: return "propagation";
  }
  return "unknown";
}

}  // namespace ivmech
