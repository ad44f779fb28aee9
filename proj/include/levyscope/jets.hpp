// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "levyscope/fields.hpp"
#include "levyscope/geometry.hpp"

namespace levyscope {

/// First- and second-order one-sided expansion data (p, X), X symmetric.
struct SemiJet {
  Point p;
  SymMat X;
};

/// Exact jet of a closed-form probe.
SemiJet jet_probe(const TestFunction& phi, const Point& x);

/// Diagnostic least-squares quadratic fit over the 2-ring stencil around the
/// node nearest to x. Certifies candidate jets only; it decides nothing about
/// semi-jet membership.
SemiJet jet_probe(const GridFunction& u, const Point& x);

}  // namespace levyscope
