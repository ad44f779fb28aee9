// SPDX-License-Identifier: Apache-2.0
#include "levyscope/jump_maps.hpp"

#include <cmath>
#include <sstream>

namespace levyscope {

JumpMap JumpMap::identity(int dim) {
  JumpMap j;
  j.kind_ = JumpKind::Identity;
  j.dim_ = dim;
  j.linear_bound_ = 1.0;
  j.a1_constant_ = 0.0;
  j.x_lipschitz_ = 0.0;
  return j;
}

JumpMap JumpMap::linear_in_z(const SymMat& A) {
  JumpMap j;
  j.kind_ = JumpKind::LinearInZ;
  j.dim_ = A.dim;
  j.matrix_ = A;
  j.linear_bound_ =
      std::max(std::abs(A.min_eigenvalue()), std::abs(A.max_eigenvalue()));
  j.a1_constant_ = 0.0;  // x-independent
  j.x_lipschitz_ = 0.0;
  return j;
}

JumpMap JumpMap::shear(int dim, double b_amp, double b_freq) {
  if (!(std::abs(b_amp) < 1.0))
    throw std::invalid_argument("shear: |b_amp| < 1 keeps 1 + b(x) positive");
  JumpMap j;
  j.kind_ = JumpKind::Shear;
  j.dim_ = dim;
  j.b_amp_ = b_amp;
  j.b_freq_ = b_freq;
  j.linear_bound_ = 1.0 + std::abs(b_amp);
  j.x_lipschitz_ =
      std::abs(b_amp * b_freq) * std::sqrt(static_cast<double>(dim));
  j.a1_constant_ = 0.0;  // measure-dependent; declared by the caller
  return j;
}

Point JumpMap::apply(const Point& x, const Point& z) const {
  switch (kind_) {
    case JumpKind::Identity:
      return z;
    case JumpKind::LinearInZ:
      return matrix_.apply(z);
    case JumpKind::Shear: {
      const double b = b_amp_ * std::sin(b_freq_ * (x[0] + x[1]));
      return z * (1.0 + b / (1.0 + z.norm2()));
    }
  }
  return z;
}

JumpMap JumpMap::with_declared_bounds(double linear_bound,
                                      double a1_constant) const {
  JumpMap j = *this;
  j.linear_bound_ = linear_bound;
  j.a1_constant_ = a1_constant;
  return j;
}

std::string JumpMap::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case JumpKind::Identity:
      return "identity";
    case JumpKind::LinearInZ:
      os << "linear_in_z(A=[" << matrix_.xx;
      if (dim_ == 2) os << "," << matrix_.xy << ";" << matrix_.xy << "," << matrix_.yy;
      os << "])";
      return os.str();
    case JumpKind::Shear:
      os << "shear(amp=" << b_amp_ << ", freq=" << b_freq_ << ")";
      return os.str();
  }
  return "?";
}

GammaWeight GammaWeight::constant(double c) {
  GammaWeight g;
  g.clipped_ = false;
  g.c_ = c;
  return g;
}

GammaWeight GammaWeight::clipped_linear(double c) {
  GammaWeight g;
  g.clipped_ = true;
  g.c_ = c;
  return g;
}

double GammaWeight::value(const Point& /*x*/, const Point& z) const {
  return clipped_ ? c_ * std::min(z.norm(), 1.0) : c_;
}

std::string GammaWeight::describe() const {
  std::ostringstream os;
  os << (clipped_ ? "clipped_linear(" : "constant(") << c_ << ")";
  return os.str();
}

}  // namespace levyscope
