#pragma once
#include "vfw/errors.hpp"

namespace vfw {

// Unit system carried through every physics routine.  Gaussian-style
// conventions without 4*pi factors: the scalar potential of a point charge q
// is q/r and field energies carry a plain 1/2.
struct Units {
  double c = 1.0;     // speed of light
  double hbar = 1.0;  // reduced Planck constant

  Units() = default;
  Units(double c_, double hbar_) : c(c_), hbar(hbar_) {
    if (!(c > 0.0) || !(hbar > 0.0)) throw DomainError("Units: c and hbar must be positive");
  }
};

}  // namespace vfw
