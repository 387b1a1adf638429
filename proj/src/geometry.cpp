// SPDX-License-Identifier: Apache-2.0
#include "defcast/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "defcast/errors.hpp"

namespace defcast {
namespace {

template <class... Ts> struct Overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dim(const ConvexDomain& domain, const Vector& p, const char* what) {
  if (p.dim() != domain.dim()) {
    throw ContractViolation(std::string(what) + ": point has dimension " + std::to_string(p.dim()) +
                            ", domain " + domain.name() + " has dimension " +
                            std::to_string(domain.dim()));
  }
}

bool finite_pair(double lo, double hi) { return std::isfinite(lo) && std::isfinite(hi); }

// ---------------------------------------------------------------------------
// Simplex: sort-based exact projection.

Vector project_simplex(const Vector& p) {
  std::vector<double> sorted(p.begin(), p.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  Vector out(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) out[i] = std::max(p[i] - theta, 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// Parabola hull.

double parabola_eps(const ParabolaHull& h, double a, double b) {
  const double scale = 1.0 + std::abs(b) + std::abs(a) * (std::abs(h.lo) + std::abs(h.hi)) +
                       std::abs(h.lo * h.hi);
  return 8.0 * std::numeric_limits<double>::epsilon() * scale;
}

bool inside_parabola(const ParabolaHull& h, double a, double b) {
  const double eps = parabola_eps(h, a, b);
  return a >= h.lo - eps && a <= h.hi + eps && b >= a * a - eps && b <= h.chord(a) + eps;
}

// Root of a function monotone on [u, v] with g(u), g(v) of opposite signs.
// Newton steps, falling back to bisection whenever a step leaves the bracket.
double safeguarded_newton(const std::function<double(double)>& g,
                          const std::function<double(double)>& dg, double u, double v) {
  double gu = g(u);
  if (gu == 0.0) return u;
  double t = 0.5 * (u + v);
  for (int iter = 0; iter < 200; ++iter) {
    const double gt = g(t);
    if (gt == 0.0) return t;
    if ((gt > 0.0) == (gu > 0.0)) {
      u = t;
      gu = gt;
    } else {
      v = t;
    }
    const double slope = dg(t);
    double next = slope != 0.0 ? t - gt / slope : 0.5 * (u + v);
    if (!(next > u && next < v)) next = 0.5 * (u + v);
    if (std::abs(next - t) <= 1e-16 * (1.0 + std::abs(t)) || v - u <= 1e-16 * (1.0 + std::abs(u))) {
      return next;
    }
    t = next;
  }
  return t;
}

// Closest point of the arc {(t, t^2) : t in [lo, hi]} to (a, b).
Vector closest_on_arc(const ParabolaHull& h, double a, double b) {
  // d/dt [(t-a)^2 + (t^2-b)^2] / 2 = 2t^3 + (1 - 2b) t - a, monotone between its critical points.
  auto g = [a, b](double t) { return 2.0 * t * t * t + (1.0 - 2.0 * b) * t - a; };
  auto dg = [b](double t) { return 6.0 * t * t + 1.0 - 2.0 * b; };
  std::vector<double> cuts{h.lo, h.hi};
  if (b > 0.5) {
    const double c = std::sqrt((2.0 * b - 1.0) / 6.0);
    for (double s : {-c, c}) {
      if (s > h.lo && s < h.hi) cuts.push_back(s);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> candidates{h.lo, h.hi};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double gu = g(cuts[i]);
    const double gv = g(cuts[i + 1]);
    if ((gu <= 0.0 && gv >= 0.0) || (gu >= 0.0 && gv <= 0.0)) {
      candidates.push_back(safeguarded_newton(g, dg, cuts[i], cuts[i + 1]));
    }
  }
  double best_t = h.lo;
  double best = std::numeric_limits<double>::infinity();
  for (double t : candidates) {
    t = std::clamp(t, h.lo, h.hi);
    const double d = (t - a) * (t - a) + (t * t - b) * (t * t - b);
    if (d < best) {
      best = d;
      best_t = t;
    }
  }
  return Vector{best_t, best_t * best_t};
}

Vector closest_on_chord(const ParabolaHull& h, double a, double b) {
  const double dx = h.hi - h.lo;
  const double dy = h.hi * h.hi - h.lo * h.lo;
  const double lambda = ((a - h.lo) * dx + (b - h.lo * h.lo) * dy) / (dx * dx + dy * dy);
  if (lambda <= 0.0) return Vector{h.lo, h.lo * h.lo};
  if (lambda >= 1.0) return Vector{h.hi, h.hi * h.hi};
  return Vector{h.lo + lambda * dx, h.lo * h.lo + lambda * dy};
}

Vector project_parabola(const ParabolaHull& h, const Vector& p) {
  const double a = p[0];
  const double b = p[1];
  if (inside_parabola(h, a, b)) return p;
  Vector arc = closest_on_arc(h, a, b);
  Vector chord = closest_on_chord(h, a, b);
  return squared_norm(arc - p) <= squared_norm(chord - p) ? arc : chord;
}

// ---------------------------------------------------------------------------
// Finite hull: Wolfe's minimum-norm-point algorithm on {v_j - p}.

Eigen::VectorXd affine_minimizer(const Eigen::MatrixXd& active) {
  const auto k = active.cols();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = active.transpose() * active;
  kkt.block(0, k, k, 1).setOnes();
  kkt.block(k, 0, 1, k).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs(k) = 1.0;
  Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(k);
}

Vector project_finite_hull(const FiniteHull& hull, const Vector& p) {
  const auto& verts = hull.vertices;
  const std::size_t k = verts.size();
  if (k == 1) return verts[0];
  const std::size_t d = p.dim();
  Eigen::MatrixXd pts(d, k);
  double scale = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < d; ++i) pts(i, j) = verts[j][i] - p[i];
    scale = std::max(scale, pts.col(j).squaredNorm());
  }
  if (scale == 0.0) return verts[0];

  std::size_t start = 0;
  for (std::size_t j = 1; j < k; ++j) {
    if (pts.col(j).squaredNorm() < pts.col(start).squaredNorm()) start = j;
  }
  std::vector<std::size_t> active{start};
  std::vector<double> weights{1.0};
  Eigen::VectorXd x = pts.col(start);

  auto gather = [&]() {
    Eigen::MatrixXd m(d, active.size());
    for (std::size_t c = 0; c < active.size(); ++c) m.col(c) = pts.col(active[c]);
    return m;
  };

  constexpr double kTiny = 1e-14;
  for (int major = 0; major < 1000; ++major) {
    const double xx = x.squaredNorm();
    if (xx <= 1e-30 * scale) break;
    Eigen::VectorXd gaps = pts.transpose() * x;
    Eigen::Index entering = 0;
    gaps.minCoeff(&entering);
    if (xx - gaps(entering) <= 1e-15 * scale) break;
    if (std::find(active.begin(), active.end(), static_cast<std::size_t>(entering)) != active.end()) break;
    active.push_back(static_cast<std::size_t>(entering));
    weights.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      const Eigen::VectorXd alpha = affine_minimizer(gather());
      if (alpha.minCoeff() > kTiny) {
        for (std::size_t c = 0; c < active.size(); ++c) weights[c] = alpha(static_cast<Eigen::Index>(c));
        break;
      }
      double theta = 1.0;
      std::size_t leaving = active.size();
      for (std::size_t c = 0; c < active.size(); ++c) {
        const double a = alpha(static_cast<Eigen::Index>(c));
        if (a <= kTiny) {
          const double denom = weights[c] - a;
          const double step = denom > 0.0 ? weights[c] / denom : 0.0;
          if (step < theta) {
            theta = step;
            leaving = c;
          }
        }
      }
      for (std::size_t c = 0; c < active.size(); ++c) {
        weights[c] += theta * (alpha(static_cast<Eigen::Index>(c)) - weights[c]);
      }
      if (leaving < active.size()) weights[leaving] = 0.0;
      std::vector<std::size_t> kept_idx;
      std::vector<double> kept_w;
      for (std::size_t c = 0; c < active.size(); ++c) {
        if (weights[c] > kTiny) {
          kept_idx.push_back(active[c]);
          kept_w.push_back(weights[c]);
        }
      }
      if (kept_idx.empty()) {
        kept_idx.push_back(active.back());
        kept_w.push_back(1.0);
      }
      const double total = std::accumulate(kept_w.begin(), kept_w.end(), 0.0);
      for (auto& w : kept_w) w /= total;
      active = std::move(kept_idx);
      weights = std::move(kept_w);
      if (active.size() == 1) break;
    }
    x = gather() * Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  }

  Vector out(d);
  for (std::size_t c = 0; c < active.size(); ++c) {
    for (std::size_t i = 0; i < d; ++i) out[i] += weights[c] * verts[active[c]][i];
  }
  return out;
}

SupportPoint best_vertex(const std::vector<Vector>& vertices, const Vector& direction) {
  SupportPoint best{vertices.front(), dot(direction, vertices.front())};
  for (std::size_t j = 1; j < vertices.size(); ++j) {
    const double v = dot(direction, vertices[j]);
    if (v > best.value || (v == best.value && lexicographically_less(vertices[j], best.point))) {
      best = {vertices[j], v};
    }
  }
  return best;
}

std::vector<Vector> simplex_vertices(std::size_t m) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < m; ++i) {
    Vector e(m);
    e[i] = 1.0;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Vector> box_corners(const Box& box) {
  const std::size_t m = box.dim();
  if (m > 10) {
    Vector lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
      lo[i] = box.sides[i].lo;
      hi[i] = box.sides[i].hi;
    }
    return {lo, hi};
  }
  std::vector<Vector> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    Vector c(m);
    for (std::size_t i = 0; i < m; ++i) c[i] = (mask >> i & 1U) ? box.sides[i].hi : box.sides[i].lo;
    out.push_back(std::move(c));
  }
  return out;
}

double parabola_diameter(const ParabolaHull& h) {
  // At a farthest pair on the arc at least one parameter sits at an endpoint; for a fixed
  // endpoint s the other parameter is an endpoint or a root of 2t^2 + 2st + 1 = 0.
  double best = 0.0;
  for (double s : {h.lo, h.hi}) {
    std::vector<double> ts{h.lo, h.hi};
    const double disc = s * s - 2.0;
    if (disc >= 0.0) {
      for (double sign : {-1.0, 1.0}) {
        const double t = (-s + sign * std::sqrt(disc)) / 2.0;
        if (t > h.lo && t < h.hi) ts.push_back(t);
      }
    }
    for (double t : ts) {
      best = std::max(best, std::abs(t - s) * std::sqrt(1.0 + (s + t) * (s + t)));
    }
  }
  return best;
}

void simplex_lattice(std::size_t m, int total, std::vector<int>& counts, std::size_t pos,
                     std::vector<Vector>& out) {
  if (pos + 1 == m) {
    counts[pos] = total;
    Vector v(m);
    const int denom = std::accumulate(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < m; ++i) v[i] = static_cast<double>(counts[i]) / denom;
    out.push_back(std::move(v));
    return;
  }
  for (int c = 0; c <= total; ++c) {
    counts[pos] = c;
    simplex_lattice(m, total - c, counts, pos + 1, out);
  }
}

} // namespace

// ---------------------------------------------------------------------------

ConvexDomain ConvexDomain::interval(double lo, double hi) {
  if (!finite_pair(lo, hi) || !(lo < hi)) {
    throw ValidationError("Interval(A,B) requires finite A < B");
  }
  return ConvexDomain(Interval{lo, hi}, 1);
}

ConvexDomain ConvexDomain::box(std::vector<Interval> sides) {
  if (sides.empty()) throw ValidationError("Box requires at least one side");
  for (const auto& s : sides) {
    if (!finite_pair(s.lo, s.hi) || !(s.lo <= s.hi)) {
      throw ValidationError("Box sides require finite lo <= hi");
    }
  }
  const std::size_t dim = sides.size();
  return ConvexDomain(Box{std::move(sides)}, dim);
}

ConvexDomain ConvexDomain::simplex(std::size_t dim) {
  if (dim < 1) throw ValidationError("Simplex requires dimension >= 1");
  return ConvexDomain(Simplex{dim}, dim);
}

ConvexDomain ConvexDomain::parabola_hull(double lo, double hi) {
  if (!finite_pair(lo, hi) || !(lo < hi)) {
    throw ValidationError("ParabolaHull(A,B) requires finite A < B");
  }
  return ConvexDomain(ParabolaHull{lo, hi}, 2);
}

ConvexDomain ConvexDomain::finite_hull(std::vector<Vector> vertices) {
  if (vertices.empty()) throw ValidationError("FiniteHull requires at least one vertex");
  const std::size_t dim = vertices.front().dim();
  if (dim == 0) throw ValidationError("FiniteHull vertices must have positive dimension");
  for (const auto& v : vertices) {
    if (v.dim() != dim) throw ValidationError("FiniteHull vertices must share one dimension");
    require_finite(v, "FiniteHull vertex");
  }
  return ConvexDomain(FiniteHull{std::move(vertices)}, dim);
}

std::string ConvexDomain::name() const {
  return std::visit(Overloaded{
                        [](const Interval& i) {
                          return "Interval(" + std::to_string(i.lo) + "," + std::to_string(i.hi) + ")";
                        },
                        [](const Box& b) { return "Box(" + std::to_string(b.dim()) + ")"; },
                        [](const Simplex& s) { return "Simplex(" + std::to_string(s.dim) + ")"; },
                        [](const ParabolaHull& h) {
                          return "ParabolaHull(" + std::to_string(h.lo) + "," + std::to_string(h.hi) + ")";
                        },
                        [](const FiniteHull& f) {
                          return "FiniteHull(" + std::to_string(f.vertices.size()) + " vertices)";
                        },
                    },
                    variant_);
}

Vector project(const ConvexDomain& domain, const Vector& p) {
  require_dim(domain, p, "project");
  return std::visit(Overloaded{
                        [&](const Interval& i) { return Vector{std::clamp(p[0], i.lo, i.hi)}; },
                        [&](const Box& b) {
                          Vector out(p.dim());
                          for (std::size_t k = 0; k < p.dim(); ++k) {
                            out[k] = std::clamp(p[k], b.sides[k].lo, b.sides[k].hi);
                          }
                          return out;
                        },
                        [&](const Simplex&) { return project_simplex(p); },
                        [&](const ParabolaHull& h) { return project_parabola(h, p); },
                        [&](const FiniteHull& f) { return project_finite_hull(f, p); },
                    },
                    domain.variant());
}

double distance_to(const ConvexDomain& domain, const Vector& p) { return distance(project(domain, p), p); }

bool contains(const ConvexDomain& domain, const Vector& p, double tol) {
  return p.dim() == domain.dim() && p.all_finite() && distance_to(domain, p) <= tol;
}

SupportPoint support_max(const ConvexDomain& domain, const Vector& direction) {
  require_dim(domain, direction, "support_max");
  return std::visit(
      Overloaded{
          [&](const Interval& i) {
            Vector y{direction[0] > 0.0 ? i.hi : i.lo};
            return SupportPoint{y, direction[0] * y[0]};
          },
          [&](const Box& b) {
            Vector y(direction.dim());
            for (std::size_t k = 0; k < y.dim(); ++k) y[k] = direction[k] > 0.0 ? b.sides[k].hi : b.sides[k].lo;
            return SupportPoint{y, dot(direction, y)};
          },
          [&](const Simplex& s) { return best_vertex(simplex_vertices(s.dim), direction); },
          [&](const ParabolaHull& h) {
            std::vector<double> ts{h.lo, h.hi};
            if (direction[1] < 0.0) {
              ts.push_back(std::clamp(-direction[0] / (2.0 * direction[1]), h.lo, h.hi));
            }
            std::sort(ts.begin(), ts.end());
            std::vector<Vector> pts;
            for (double t : ts) pts.push_back(Vector{t, t * t});
            return best_vertex(pts, direction);
          },
          [&](const FiniteHull& f) { return best_vertex(f.vertices, direction); },
      },
      domain.variant());
}

double exterior_slack(const ConvexDomain& domain, const Vector& f, const Vector& s) {
  require_dim(domain, f, "exterior_slack");
  return support_max(domain, s).value - dot(s, f);
}

bool is_normal_exterior(const ConvexDomain& domain, const Vector& f, const Vector& s, double tol) {
  require_dim(domain, f, "is_normal_exterior");
  require_dim(domain, s, "is_normal_exterior");
  if (distance_to(domain, f) > std::max(tol, kMembershipTol)) {
    throw ContractViolation("is_normal_exterior: point " + to_string(f) + " is outside " + domain.name());
  }
  return exterior_slack(domain, f, s) <= tol;
}

Vector barycenter(const ConvexDomain& domain) {
  return std::visit(Overloaded{
                        [](const Interval& i) { return Vector{0.5 * (i.lo + i.hi)}; },
                        [](const Box& b) {
                          Vector c(b.dim());
                          for (std::size_t k = 0; k < b.dim(); ++k) c[k] = 0.5 * (b.sides[k].lo + b.sides[k].hi);
                          return c;
                        },
                        [](const Simplex& s) { return Vector(s.dim, 1.0 / static_cast<double>(s.dim)); },
                        [](const ParabolaHull& h) {
                          // Midway between the arc midpoint and the chord midpoint.
                          const double c = 0.5 * (h.lo + h.hi);
                          const double chord_mid = 0.5 * (h.lo * h.lo + h.hi * h.hi);
                          return Vector{c, 0.5 * (c * c + chord_mid)};
                        },
                        [](const FiniteHull& f) {
                          Vector c(f.vertices.front().dim());
                          for (const auto& v : f.vertices) c += v;
                          return c * (1.0 / static_cast<double>(f.vertices.size()));
                        },
                    },
                    domain.variant());
}

double diameter(const ConvexDomain& domain) {
  return std::visit(Overloaded{
                        [](const Interval& i) { return i.hi - i.lo; },
                        [](const Box& b) {
                          double acc = 0.0;
                          for (const auto& s : b.sides) acc += (s.hi - s.lo) * (s.hi - s.lo);
                          return std::sqrt(acc);
                        },
                        [](const Simplex& s) { return s.dim >= 2 ? std::sqrt(2.0) : 0.0; },
                        [](const ParabolaHull& h) { return parabola_diameter(h); },
                        [](const FiniteHull& f) {
                          double best = 0.0;
                          for (std::size_t i = 0; i < f.vertices.size(); ++i) {
                            for (std::size_t j = i + 1; j < f.vertices.size(); ++j) {
                              best = std::max(best, distance(f.vertices[i], f.vertices[j]));
                            }
                          }
                          return best;
                        },
                    },
                    domain.variant());
}

std::vector<Vector> extreme_points(const ConvexDomain& domain) {
  return std::visit(Overloaded{
                        [](const Interval& i) { return std::vector<Vector>{Vector{i.lo}, Vector{i.hi}}; },
                        [](const Box& b) { return box_corners(b); },
                        [](const Simplex& s) { return simplex_vertices(s.dim); },
                        [](const ParabolaHull& h) {
                          const double c = 0.5 * (h.lo + h.hi);
                          return std::vector<Vector>{Vector{h.lo, h.lo * h.lo}, Vector{h.hi, h.hi * h.hi},
                                                     Vector{c, c * c}};
                        },
                        [](const FiniteHull& f) { return f.vertices; },
                    },
                    domain.variant());
}

std::vector<Vector> grid_points(const ConvexDomain& domain, int resolution) {
  const int g = std::max(resolution, 2);
  std::vector<Vector> out;
  std::visit(
      Overloaded{
          [&](const Interval& i) {
            for (int k = 0; k <= g; ++k) out.push_back(Vector{i.lo + (i.hi - i.lo) * k / g});
          },
          [&](const Box& b) {
            const std::size_t m = b.dim();
            const double budget = static_cast<double>(g + 1) * (g + 1);
            const int per = std::max(2, static_cast<int>(std::floor(std::pow(budget, 1.0 / static_cast<double>(m)))));
            std::vector<int> idx(m, 0);
            while (true) {
              Vector v(m);
              for (std::size_t k = 0; k < m; ++k) {
                v[k] = b.sides[k].lo + (b.sides[k].hi - b.sides[k].lo) * idx[k] / (per - 1);
              }
              out.push_back(std::move(v));
              std::size_t k = 0;
              while (k < m && ++idx[k] == per) idx[k++] = 0;
              if (k == m) break;
            }
          },
          [&](const Simplex& s) {
            int total = g;
            auto count = [&](int t) {
              double c = 1.0;
              for (std::size_t i = 1; i < s.dim; ++i) c = c * (t + static_cast<double>(i)) / static_cast<double>(i);
              return c;
            };
            const double budget = static_cast<double>(g + 1) * (g + 2) / 2.0;
            while (total > 1 && count(total) > budget) --total;
            std::vector<int> counts(s.dim, 0);
            simplex_lattice(s.dim, total, counts, 0, out);
          },
          [&](const ParabolaHull& h) {
            const int rows = std::max(2, g / 2);
            for (int k = 0; k <= g; ++k) {
              const double a = h.lo + (h.hi - h.lo) * k / g;
              const double bottom = a * a;
              const double top = std::max(bottom, h.chord(a));
              for (int r = 0; r <= rows; ++r) out.push_back(Vector{a, bottom + (top - bottom) * r / rows});
            }
          },
          [&](const FiniteHull& f) {
            const auto& vs = f.vertices;
            out = vs;
            for (std::size_t i = 0; i < vs.size(); ++i) {
              for (std::size_t j = i + 1; j < vs.size(); ++j) {
                for (int k = 1; k < g; ++k) {
                  const double w = static_cast<double>(k) / g;
                  out.push_back(vs[i] * (1.0 - w) + vs[j] * w);
                }
              }
            }
            out.push_back(barycenter(domain));
          },
      },
      domain.variant());
  return out;
}

Box bounding_box(const ConvexDomain& domain) {
  return std::visit(Overloaded{
                        [](const Interval& i) { return Box{{i}}; },
                        [](const Box& b) { return b; },
                        [](const Simplex& s) { return Box{std::vector<Interval>(s.dim, Interval{0.0, 1.0})}; },
                        [](const ParabolaHull& h) {
                          const double top = std::max(h.lo * h.lo, h.hi * h.hi);
                          const double bottom =
                              (h.lo < 0.0 && h.hi > 0.0) ? 0.0 : std::min(h.lo * h.lo, h.hi * h.hi);
                          return Box{{Interval{h.lo, h.hi}, Interval{bottom, top}}};
                        },
                        [](const FiniteHull& f) {
                          const std::size_t d = f.vertices.front().dim();
                          Box b{std::vector<Interval>(d, Interval{std::numeric_limits<double>::infinity(),
                                                                  -std::numeric_limits<double>::infinity()})};
                          for (const auto& v : f.vertices) {
                            for (std::size_t k = 0; k < d; ++k) {
                              b.sides[k].lo = std::min(b.sides[k].lo, v[k]);
                              b.sides[k].hi = std::max(b.sides[k].hi, v[k]);
                            }
                          }
                          return b;
                        },
                    },
                    domain.variant());
}

} // namespace defcast
