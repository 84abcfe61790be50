#pragma once

#include "doctest.h"

// doctest::Approx adds an absolute floor of epsilon; this one is purely relative.
inline doctest::Approx rel(double v) {
  doctest::Approx a(v);
  a.scale(0.0);
  return a;
}
