#pragma once

// Three-valued outcome shared by every certifier in the library: a
// certificate either witnesses the property on the sampled data, refutes
// it beyond the numerical margin, or lands in between.

namespace proxlab {

enum class Verdict { Certified, Refuted, Inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Certified:
      return "Certified";
    case Verdict::Refuted:
      return "Refuted";
    default:
      return "Inconclusive";
  }
}

}  // namespace proxlab
