#include <algorithm>
#include <cmath>

#include "msp/solvers.hpp"

namespace msp {

ObjectivePoint Segment::at(double lambda) const {
  const double s = lambda * delta;
  return {p0.travel_time + s * (p1.travel_time - p0.travel_time), p0.energy + s * (p1.energy - p0.energy)};
}

double Segment::parameter_of(const ObjectivePoint& q) const {
  const ObjectivePoint e = end();
  const double dx = e.travel_time - p0.travel_time;
  const double dy = e.energy - p0.energy;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return 0.0;
  const double t = ((q.travel_time - p0.travel_time) * dx + (q.energy - p0.energy) * dy) / len2;
  return std::clamp(t, 0.0, 1.0);
}

bool Segment::contains(const ObjectivePoint& q, double rel_tol) const {
  const ObjectivePoint nearest = at(parameter_of(q));
  const ObjectivePoint e = end();
  const double scale = std::max({1.0, std::abs(p0.travel_time), std::abs(p0.energy), std::abs(e.travel_time),
                                 std::abs(e.energy)});
  return std::hypot(q.travel_time - nearest.travel_time, q.energy - nearest.energy) <= rel_tol * scale;
}

bool ParetoSet::dominated(const ObjectivePoint& q) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&q](const ParetoEntry& e) { return e.point == q || dominates(e.point, q); });
}

bool ParetoSet::insert(Solution sol, const ObjectivePoint& q) {
  if (dominated(q)) return false;
  std::erase_if(entries_, [&q](const ParetoEntry& e) { return dominates(q, e.point); });
  auto pos = std::lower_bound(entries_.begin(), entries_.end(), q, [](const ParetoEntry& e, const ObjectivePoint& p) {
    return e.point.travel_time < p.travel_time ||
           (e.point.travel_time == p.travel_time && e.point.energy < p.energy);
  });
  entries_.insert(pos, ParetoEntry{std::move(sol), q});
  return true;
}

}  // namespace msp
