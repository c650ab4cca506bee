#pragma once

#include <gtest/gtest.h>

#include "relcalc/random.hpp"

namespace relcalc::testing {

inline double dist(const Matrix& a, const Matrix& b) { return opnorm(a - b); }
inline double dist(const HermMatrix& a, const HermMatrix& b) { return (a - b).norm(); }

inline Matrix diag(std::initializer_list<double> d) {
  RealVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<cplx>().asDiagonal();
}

inline HermMatrix hdiag(std::initializer_list<double> d) { return HermMatrix(diag(d)); }

inline Matrix mat2(cplx a, cplx b, cplx c, cplx d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Vector unit(Eigen::Index n, Eigen::Index i) {
  Vector v = Vector::Zero(n);
  v(i) = 1.0;
  return v;
}

inline Subspace span_of(const Matrix& columns) { return Subspace::span(columns); }

inline Subspace axis(Eigen::Index n, Eigen::Index i) { return Subspace(n, unit(n, i)); }

inline NonnegRelation op(const Matrix& m) { return NonnegRelation::from_operator(HermMatrix(m)); }

}  // namespace relcalc::testing
