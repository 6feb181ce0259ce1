#include "aebsim/fusion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace aebsim {

void TrackerConfig::validate() const {
  if (m_confirm < 1 || m_confirm > n_window) throw std::invalid_argument("tracker: require 1 <= m_confirm <= n_window");
  if (n_window > 32) throw std::invalid_argument("tracker: n_window must be <= 32");
  if (!(gate_radius > 0.0)) throw std::invalid_argument("tracker: gate_radius must be positive");
  if (miss_delete < 0) throw std::invalid_argument("tracker: miss_delete must be >= 0");
  if (!(smoothing > 0.0 && smoothing <= 1.0)) throw std::invalid_argument("tracker: smoothing must be in (0, 1]");
}

HitWindow::HitWindow(int capacity) : capacity_(capacity) {
  if (capacity < 1 || capacity > 32) throw std::invalid_argument("HitWindow capacity must be in [1, 32]");
}

void HitWindow::push(bool hit) {
  const std::uint32_t mask = capacity_ == 32 ? 0xffffffffu : ((1u << capacity_) - 1u);
  bits_ = ((bits_ << 1) | (hit ? 1u : 0u)) & mask;
  size_ = std::min(size_ + 1, capacity_);
}

int HitWindow::hits() const { return std::popcount(bits_); }

std::string_view to_string(TrackStatus status) {
  switch (status) {
    case TrackStatus::Tentative: return "Tentative";
    case TrackStatus::Confirmed: return "Confirmed";
    case TrackStatus::Deleted: return "Deleted";
  }
  return "Tentative";
}

double Track::range() const { return std::hypot(x, y); }
double Track::azimuth() const { return std::atan2(y, x); }

std::vector<Detection> concatenate_detections(std::span<const std::vector<Detection>> per_sensor) {
  std::vector<Detection> out;
  for (const auto& list : per_sensor) out.insert(out.end(), list.begin(), list.end());
  std::stable_sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
    return std::tie(a.sensor, a.range, a.azimuth) < std::tie(b.sensor, b.range, b.azimuth);
  });
  return out;
}

namespace {

struct Point {
  double x, y;
};

Point cartesian(const Detection& d) { return {d.range * std::cos(d.azimuth), d.range * std::sin(d.azimuth)}; }

void absorb(Track& t, const std::vector<const Detection*>& dets, const TrackerConfig& cfg, double now) {
  double mx = 0.0, my = 0.0, rr = 0.0;
  int rr_count = 0;
  for (const Detection* d : dets) {
    const Point p = cartesian(*d);
    mx += p.x;
    my += p.y;
    if (d->range_rate) {
      rr += *d->range_rate;
      ++rr_count;
    }
    if (d->class_label && *d->class_label != ObjectClass::Unknown) t.class_label = d->class_label;
  }
  mx /= static_cast<double>(dets.size());
  my /= static_cast<double>(dets.size());

  const double beta = cfg.smoothing;
  const double old_range = t.range();
  const double dt = now - t.last_update;
  t.x += beta * (mx - t.x);
  t.y += beta * (my - t.y);

  std::optional<double> measured_rate;
  if (rr_count > 0) {
    measured_rate = rr / rr_count;
  } else if (dt > 0.0) {
    measured_rate = (t.range() - old_range) / dt;
  }
  if (measured_rate) {
    t.range_rate = t.range_rate ? *t.range_rate + beta * (*measured_rate - *t.range_rate) : *measured_rate;
  }
}

Track spawn(int id, const Detection& d, const TrackerConfig& cfg, double now) {
  Track t;
  t.id = id;
  const Point p = cartesian(d);
  t.x = p.x;
  t.y = p.y;
  t.range_rate = d.range_rate;
  t.history = HitWindow(cfg.n_window);
  t.history.push(true);
  t.last_update = now;
  if (d.class_label) t.class_label = d.class_label;
  if (t.history.hits() >= cfg.m_confirm) t.status = TrackStatus::Confirmed;
  return t;
}

}  // namespace

TrackSet update_tracks(const TrackSet& previous, std::span<const Detection> detections, const TrackerConfig& cfg,
                       double now) {
  cfg.validate();
  TrackSet next;
  next.next_id = previous.next_id;
  for (const Track& t : previous.tracks)
    if (t.status != TrackStatus::Deleted) next.tracks.push_back(t);

  // Arrival order within a tick must not matter.
  std::vector<const Detection*> dets;
  dets.reserve(detections.size());
  for (const Detection& d : detections) dets.push_back(&d);
  std::stable_sort(dets.begin(), dets.end(), [](const Detection* a, const Detection* b) {
    return std::tie(a->sensor, a->range, a->azimuth) < std::tie(b->sensor, b->range, b->azimuth);
  });

  const double gate2 = cfg.gate_radius * cfg.gate_radius;
  std::vector<std::vector<const Detection*>> assigned(next.tracks.size());
  std::vector<const Detection*> leftovers;
  for (const Detection* d : dets) {
    const Point p = cartesian(*d);
    std::size_t best = next.tracks.size();
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < next.tracks.size(); ++i) {
      const double dx = next.tracks[i].x - p.x;
      const double dy = next.tracks[i].y - p.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 > gate2) continue;
      if (d2 < best_d2 || (d2 == best_d2 && next.tracks[i].id < next.tracks[best].id)) {
        best = i;
        best_d2 = d2;
      }
    }
    if (best < next.tracks.size()) {
      assigned[best].push_back(d);
    } else {
      leftovers.push_back(d);
    }
  }

  const int miss_delete = cfg.effective_miss_delete();
  for (std::size_t i = 0; i < next.tracks.size(); ++i) {
    Track& t = next.tracks[i];
    if (!assigned[i].empty()) {
      absorb(t, assigned[i], cfg, now);
      t.history.push(true);
      t.consecutive_misses = 0;
      t.last_update = now;
    } else {
      t.history.push(false);
      ++t.consecutive_misses;
    }
    if (t.status == TrackStatus::Tentative && t.history.hits() >= cfg.m_confirm) t.status = TrackStatus::Confirmed;
    if (t.consecutive_misses >= miss_delete) t.status = TrackStatus::Deleted;
  }

  // Seed new tracks; detections of one new object in the same tick share a track.
  const std::size_t first_new = next.tracks.size();
  std::vector<std::vector<const Detection*>> seeded;
  for (const Detection* d : leftovers) {
    const Point p = cartesian(*d);
    std::size_t best = next.tracks.size();
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = first_new; i < next.tracks.size(); ++i) {
      const double dx = next.tracks[i].x - p.x;
      const double dy = next.tracks[i].y - p.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 <= gate2 && d2 < best_d2) {
        best = i;
        best_d2 = d2;
      }
    }
    if (best < next.tracks.size()) {
      seeded[best - first_new].push_back(d);
    } else {
      next.tracks.push_back(spawn(next.next_id++, *d, cfg, now));
      seeded.push_back({d});
    }
  }
  for (std::size_t k = 0; k < seeded.size(); ++k) {
    if (seeded[k].size() < 2) continue;
    Track& t = next.tracks[first_new + k];
    double mx = 0.0, my = 0.0, rr = 0.0;
    int rr_count = 0;
    for (const Detection* d : seeded[k]) {
      const Point p = cartesian(*d);
      mx += p.x;
      my += p.y;
      if (d->range_rate) {
        rr += *d->range_rate;
        ++rr_count;
      }
      if (d->class_label && *d->class_label != ObjectClass::Unknown) t.class_label = d->class_label;
    }
    t.x = mx / static_cast<double>(seeded[k].size());
    t.y = my / static_cast<double>(seeded[k].size());
    if (rr_count > 0) t.range_rate = rr / rr_count;
  }
  return next;
}

std::optional<Track> select_mio(std::span<const Track> tracks, double ego_lane_halfwidth) {
  const Track* best = nullptr;
  for (const Track& t : tracks) {
    if (t.status != TrackStatus::Confirmed) continue;
    if (t.x <= 0.0 || std::abs(t.y) > ego_lane_halfwidth) continue;
    if (!best) {
      best = &t;
      continue;
    }
    const double closing = -t.range_rate.value_or(0.0);
    const double best_closing = -best->range_rate.value_or(0.0);
    const double r = t.range(), br = best->range();
    if (r < br || (r == br && (closing > best_closing || (closing == best_closing && t.id < best->id)))) best = &t;
  }
  if (!best) return std::nullopt;
  return *best;
}

}  // namespace aebsim
