#pragma once

#include <vector>

#include "wgqed/model.hpp"

namespace testing {

// r = 0.22, n = 1.45, h = 0.1, beta_1 = 0.15
inline const wgqed::Model& nanofiber() {
  static const wgqed::Model m = wgqed::make_model({}, {}, 0.1);
  return m;
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace testing
