// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "levyscope/fields.hpp"
#include "levyscope/geometry.hpp"

namespace levyscope {

enum class ContactKind { Max, Min };

/// Certificate that u - probe attains its discrete max (resp. min) over the
/// grid nodes of B(x, radius) at the node x. `gap` is the smallest margin
/// min over the punctured ball of (probe~ - u) (resp. (u - probe~)) after
/// shifting the probe to touch u at x; it is >= 0 for a valid contact.
struct ContactCertificate {
  GridIndex node;
  Point x;
  TestFunction probe;
  double radius = 0.0;
  ContactKind kind = ContactKind::Max;
  double gap = 0.0;
};

/// Tests the discrete contact property; when `gap_out` is given it receives
/// the contact margin (meaningful only on success).
bool is_discrete_contact(const GridFunction& u, const TestFunction& probe,
                         const GridIndex& node, double radius,
                         ContactKind kind, double* gap_out = nullptr);

/// Builds a verified certificate; throws NotContactPointError otherwise.
ContactCertificate make_contact_certificate(const GridFunction& u,
                                            const TestFunction& probe,
                                            const GridIndex& node,
                                            double radius, ContactKind kind);

}  // namespace levyscope
