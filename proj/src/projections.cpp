#include "visc/projections.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "overloaded.hpp"
#include "visc/error.hpp"

namespace visc {

namespace {

using detail::overloaded;

void require_dim(const ConvexSet& set, const Vector& x, const char* where) {
  if (x.dim() != set.dim()) {
    throw Error(ErrorKind::Dimension, std::string(where) + ": set has dim " +
                                          std::to_string(set.dim()) + ", point has dim " +
                                          std::to_string(x.dim()));
  }
}

void require_positive_dim(std::size_t dim) {
  if (dim == 0) throw Error(ErrorKind::InvalidDescriptor, "set dimension must be >= 1");
}

void require_nonzero_normal(const Vector& normal) {
  if (!(norm(normal) > 0.0)) {
    throw Error(ErrorKind::InvalidDescriptor, "normal vector must be nonzero");
  }
}

Vector map_entries(const Vector& x, const std::function<double(std::size_t, double)>& fn) {
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = fn(i, x[i]);
  return Vector(std::move(out));
}

}  // namespace

ConvexSet ConvexSet::orthant(std::size_t dim) {
  require_positive_dim(dim);
  return ConvexSet(dim, NonnegOrthant{});
}

ConvexSet ConvexSet::box(Vector lo, Vector hi) {
  if (lo.dim() != hi.dim()) throw Error(ErrorKind::Dimension, "box bounds differ in dimension");
  for (std::size_t i = 0; i < lo.dim(); ++i) {
    if (lo[i] > hi[i]) {
      throw Error(ErrorKind::InvalidDescriptor,
                  "box has lo > hi in coordinate " + std::to_string(i));
    }
  }
  const std::size_t dim = lo.dim();
  return ConvexSet(dim, Box{std::move(lo), std::move(hi)});
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::InvalidDescriptor, "ball radius must be positive and finite");
  }
  const std::size_t dim = center.dim();
  return ConvexSet(dim, Ball{std::move(center), radius});
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
  require_nonzero_normal(normal);
  if (!std::isfinite(offset)) throw Error(ErrorKind::InvalidDescriptor, "offset must be finite");
  const std::size_t dim = normal.dim();
  return ConvexSet(dim, Halfspace{std::move(normal), offset});
}

ConvexSet ConvexSet::hyperplane(Vector normal, double offset) {
  require_nonzero_normal(normal);
  if (!std::isfinite(offset)) throw Error(ErrorKind::InvalidDescriptor, "offset must be finite");
  const std::size_t dim = normal.dim();
  return ConvexSet(dim, Hyperplane{std::move(normal), offset});
}

ConvexSet ConvexSet::simplex(std::size_t dim, double a) {
  require_positive_dim(dim);
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorKind::InvalidDescriptor, "simplex level a must be positive and finite");
  }
  return ConvexSet(dim, Simplex{a});
}

std::string ConvexSet::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const NonnegOrthant&) { os << "orthant"; },
                 [&](const Box&) { os << "box"; },
                 [&](const Ball& b) { os << "ball(radius=" << b.radius << ")"; },
                 [&](const Halfspace& h) { os << "halfspace(offset=" << h.offset << ")"; },
                 [&](const Hyperplane& h) { os << "hyperplane(offset=" << h.offset << ")"; },
                 [&](const Simplex& s) { os << "simplex(a=" << s.a << ")"; },
             },
             shape_);
  os << "[dim=" << dim_ << "]";
  return os.str();
}

double simplex_threshold(const Vector& x, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorKind::Parameter, "simplex_threshold needs a > 0");
  }
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // The active set is a prefix of the sorted coordinates; its length is the
  // largest j with sorted[j-1] > (prefix_sum_j − a) / j.
  double prefix = 0.0;
  double alpha = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - a) / static_cast<double>(j + 1);
    if (sorted[j] > candidate) alpha = candidate;
    else break;
  }
  return alpha;
}

Vector project(const ConvexSet& set, const Vector& x) {
  require_dim(set, x, "project");
  return std::visit(
      overloaded{
          [&](const NonnegOrthant&) {
            return map_entries(x, [](std::size_t, double v) { return std::max(v, 0.0); });
          },
          [&](const Box& b) {
            return map_entries(x, [&](std::size_t i, double v) {
              return std::clamp(v, b.lo[i], b.hi[i]);
            });
          },
          [&](const Ball& b) {
            const Vector d = x - b.center;
            const double r = norm(d);
            if (r <= b.radius) return x;
            return b.center + (b.radius / r) * d;
          },
          [&](const Halfspace& h) {
            const double excess = inner(h.normal, x) - h.offset;
            if (excess <= 0.0) return x;
            return x - (excess / inner(h.normal, h.normal)) * h.normal;
          },
          [&](const Hyperplane& h) {
            const double excess = inner(h.normal, x) - h.offset;
            return x - (excess / inner(h.normal, h.normal)) * h.normal;
          },
          [&](const Simplex& s) {
            const double alpha = simplex_threshold(x, s.a);
            return map_entries(x, [alpha](std::size_t, double v) { return std::max(v - alpha, 0.0); });
          },
      },
      set.shape());
}

bool contains(const ConvexSet& set, const Vector& x, double tol) {
  require_dim(set, x, "contains");
  if (!(tol >= 0.0)) throw Error(ErrorKind::Parameter, "contains: tol must be >= 0");
  return std::visit(
      overloaded{
          [&](const NonnegOrthant&) {
            return std::all_of(x.begin(), x.end(), [tol](double v) { return v >= -tol; });
          },
          [&](const Box& b) {
            for (std::size_t i = 0; i < x.dim(); ++i) {
              if (x[i] < b.lo[i] - tol || x[i] > b.hi[i] + tol) return false;
            }
            return true;
          },
          [&](const Ball& b) { return distance(x, b.center) <= b.radius + tol; },
          [&](const Halfspace& h) {
            return (inner(h.normal, x) - h.offset) / norm(h.normal) <= tol;
          },
          [&](const Hyperplane& h) {
            return std::abs(inner(h.normal, x) - h.offset) / norm(h.normal) <= tol;
          },
          [&](const Simplex& s) {
            double sum = 0.0;
            for (double v : x) {
              if (v < -tol) return false;
              sum += v;
            }
            return std::abs(sum - s.a) <= tol;
          },
      },
      set.shape());
}

}  // namespace visc
