#ifndef CYCLO_REFERENCE_HPP_
#define CYCLO_REFERENCE_HPP_

// Time-parameterised reference for one mission segment: a polyline from the
// previous waypoint to the segment target, traversed at the medium's cruise
// speed. Yaw turns toward the path heading on Drive/FlyTo at a bounded rate
// and is held otherwise.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cyclo/errors.hpp"
#include "cyclo/mission.hpp"

namespace cyclo {

struct CruiseSpeeds {
  double ground = 2.0;  // m/s
  double air = 3.0;
  double water = 1.0;
  double yaw_rate = 0.5;  // rad/s

  void validate() const {
    if (!(ground > 0 && air > 0 && water > 0 && yaw_rate > 0) || !std::isfinite(ground + air + water + yaw_rate))
      throw InvalidArgument("cruise speeds must be finite and > 0");
  }
};

struct Reference {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
  Vec3 velocity = Vec3::Zero();  // feed-forward along the path
};

class SegmentPath {
 public:
  SegmentPath() = default;

  SegmentPath(const Segment& seg, const Vec3& from, double from_yaw, const CruiseSpeeds& speeds) {
    const Vec3& to = seg.target;
    knots_.push_back(from);
    switch (seg.action) {
      case Action::kTakeoff:
        add({from.x(), from.y(), to.z()});  // climb first
        break;
      case Action::kLand:
        add({to.x(), to.y(), from.z()});  // move over the touchdown point first
        break;
      default:
        break;
    }
    add(to);
    speed_ = seg.medium == Medium::kTerrestrial ? speeds.ground
             : seg.medium == Medium::kAquatic   ? speeds.water
                                                : speeds.air;
    for (std::size_t i = 1; i < knots_.size(); ++i) length_ += (knots_[i] - knots_[i - 1]).norm();

    yaw_ = from_yaw;
    yaw_from_ = from_yaw;
    yaw_rate_ = speeds.yaw_rate;
    const Vec3 d = to - from;
    const bool steers = seg.action == Action::kDrive || seg.action == Action::kFlyTo;
    if (steers && std::hypot(d.x(), d.y()) > 1e-6) yaw_ = std::atan2(d.y(), d.x());
  }

  double length() const { return length_; }
  double speed() const { return speed_; }
  double duration() const { return length_ / speed_; }
  double yaw() const { return yaw_; }  // heading once the turn is complete
  const Vec3& end() const { return knots_.back(); }

  /// Reference tau seconds after the segment started; holds at the end.
  Reference at(double tau) const {
    Reference r;
    const double turn = wrap_angle(yaw_ - yaw_from_);
    const double limit = yaw_rate_ * std::max(tau, 0.0);
    r.yaw = std::abs(turn) <= limit ? yaw_ : wrap_angle(yaw_from_ + std::copysign(limit, turn));
    double s = std::clamp(speed_ * tau, 0.0, length_);
    const bool moving = speed_ * tau < length_;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      const Vec3 leg = knots_[i] - knots_[i - 1];
      const double l = leg.norm();
      if (s <= l || i + 1 == knots_.size()) {
        r.position = knots_[i - 1];
        if (l > 0) r.position += leg * (std::min(s, l) / l);
        if (moving && l > 0) r.velocity = leg * (speed_ / l);
        return r;
      }
      s -= l;
    }
    r.position = knots_.back();
    return r;
  }

 private:
  void add(const Vec3& p) {
    if ((p - knots_.back()).norm() > 1e-12) knots_.push_back(p);
  }

  std::vector<Vec3> knots_;
  double length_ = 0.0;
  double speed_ = 1.0;
  double yaw_ = 0.0;
  double yaw_from_ = 0.0;
  double yaw_rate_ = 0.5;
};

}  // namespace cyclo

#endif  // CYCLO_REFERENCE_HPP_
