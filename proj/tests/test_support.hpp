#pragma once

#include <random>

#include "dssyk/qcore.hpp"

namespace testsupport {

using dssyk::qcore::MultiPoly;
using dssyk::qcore::Rational;

inline MultiPoly poly(std::initializer_list<std::pair<dssyk::qcore::Exponents, long>> terms) {
  MultiPoly p;
  for (const auto& [e, c] : terms) p.add_term(e, c);
  return p;
}

inline MultiPoly q_poly(std::initializer_list<long> coeffs) {
  MultiPoly p;
  int d = 0;
  for (long c : coeffs) p.add_term({d++, 0, 0}, c);
  return p;
}

inline MultiPoly random_poly(std::mt19937_64& gen, int terms = 5, int max_deg = 3) {
  std::uniform_int_distribution<int> deg(0, max_deg), num(-9, 9), den(1, 5);
  MultiPoly p;
  for (int i = 0; i < terms; ++i) p.add_term({deg(gen), deg(gen), deg(gen)}, dssyk::qcore::make_rational(num(gen), den(gen)));
  return p;
}

}  // namespace testsupport
