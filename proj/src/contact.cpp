// SPDX-License-Identifier: Apache-2.0
#include "levyscope/contact.hpp"

#include <cmath>
#include <limits>

#include "levyscope/errors.hpp"

namespace levyscope {

bool is_discrete_contact(const GridFunction& u, const TestFunction& probe,
                         const GridIndex& node, double radius,
                         ContactKind kind, double* gap_out) {
  const Point x0 = u.node_point(node);
  const double center = u.at(node) - probe.value(x0);
  const int reach = static_cast<int>(std::floor(radius / u.h() + 1e-9));
  const int n = u.nodes_per_axis() - 1;
  double gap = std::numeric_limits<double>::infinity();
  bool ok = true;
  const int jlo = u.dim() == 2 ? std::max(0, node.j - reach) : 0;
  const int jhi = u.dim() == 2 ? std::min(n, node.j + reach) : 0;
  for (int j = jlo; j <= jhi && ok; ++j) {
    for (int i = std::max(0, node.i - reach); i <= std::min(n, node.i + reach);
         ++i) {
      if (i == node.i && j == node.j) continue;
      GridIndex idx{i, j};
      const Point y = u.node_point(idx);
      if ((y - x0).norm() > radius + 1e-12) continue;
      const double diff = u.at(idx) - probe.value(y);
      const double margin =
          kind == ContactKind::Max ? center - diff : diff - center;
      if (margin < 0.0) {
        ok = false;
        break;
      }
      gap = std::min(gap, margin);
    }
  }
  if (gap_out && ok)
    *gap_out = std::isfinite(gap) ? gap : 0.0;
  return ok;
}

ContactCertificate make_contact_certificate(const GridFunction& u,
                                            const TestFunction& probe,
                                            const GridIndex& node,
                                            double radius, ContactKind kind) {
  double gap = 0.0;
  if (!is_discrete_contact(u, probe, node, radius, kind, &gap))
    throw NotContactPointError(
        "u - probe has no discrete extremum at the requested node");
  ContactCertificate cert;
  cert.node = node;
  cert.x = u.node_point(node);
  cert.probe = probe;
  cert.radius = radius;
  cert.kind = kind;
  cert.gap = gap;
  return cert;
}

}  // namespace levyscope
