#include <gtest/gtest.h>

#include "cyclo/mission.hpp"
#include "cyclo/reference.hpp"

namespace cyclo {
namespace {

constexpr Medium A = Medium::kAerial, T = Medium::kTerrestrial, W = Medium::kAquatic;

TEST(BuiltinMission, Waypoints) {
  const Mission m = builtin_mission();
  ASSERT_EQ(m.segments.size(), 8u);
  EXPECT_EQ(m.start, Vec3(0, 0, 0));
  EXPECT_EQ(m.start_medium, T);
  const std::vector<std::tuple<Medium, Action, Vec3>> expected = {
      {T, Action::kDrive, {100, 0, 0}},    {A, Action::kTakeoff, {100, 0, 100}},
      {A, Action::kFlyTo, {200, 100, 150}}, {A, Action::kHover, {200, 100, 150}},
      {A, Action::kFlyTo, {150, 80, 100}},  {A, Action::kHover, {150, 80, 100}},
      {A, Action::kLand, {200, 0, 0}},      {W, Action::kDrive, {300, 100, 0}}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(m.segments[i].medium, std::get<0>(expected[i])) << i;
    EXPECT_EQ(m.segments[i].action, std::get<1>(expected[i])) << i;
    EXPECT_EQ(m.segments[i].target, std::get<2>(expected[i])) << i;
  }
  EXPECT_GT(m.segments[3].hold, 0.0);
  EXPECT_GT(m.segments[5].hold, 0.0);
  EXPECT_FALSE(check_mission(m));
}

TEST(CheckMission, BandViolationNamesSegment) {
  Mission m = builtin_mission();
  m.segments[0].target = {150, 0, 0};
  const auto issue = check_mission(m);
  ASSERT_TRUE(issue);
  EXPECT_EQ(issue->segment, 0);
}

TEST(CheckMission, SurfaceTargetsOnTheSurface) {
  Mission m = builtin_mission();
  m.segments[7].target.z() = 2.0;
  ASSERT_TRUE(check_mission(m));
  EXPECT_EQ(check_mission(m)->segment, 7);
}

TEST(CheckMission, NonFiniteAndNegativeHold) {
  Mission m = builtin_mission();
  m.segments[2].target.x() = std::nan("");
  EXPECT_EQ(check_mission(m)->segment, 2);
  m = builtin_mission();
  m.segments[3].hold = -1;
  EXPECT_EQ(check_mission(m)->segment, 3);
}

TEST(CheckMission, AerialActionOnSurfaceRejected) {
  Mission m = builtin_mission();
  m.segments[0].action = Action::kHover;
  EXPECT_EQ(check_mission(m)->segment, 0);
}

TEST(MissionEvents, AerialSegmentBeforeGearNamesSegment) {
  Mission m;
  m.segments = {{A, Action::kFlyTo, {120, 0, 10}, 0.0}};  // still on wheels
  const MissionEvents ev = mission_events(m);
  ASSERT_TRUE(ev.issue);
  EXPECT_EQ(ev.issue->segment, 0);
}

TEST(MissionEvents, EmptyMissionEndsAtStart) {
  const MissionEvents ev = mission_events(Mission{});
  EXPECT_FALSE(ev.issue);
  EXPECT_TRUE(ev.events.empty());
  EXPECT_EQ(ev.expected_final, make_state(T, SubState::kStatic));
}

TEST(MissionEvents, LandOnGroundEmitsTouchdown) {
  Mission m;
  m.start = {100, 0, 0};
  m.start_medium = A;
  m.segments = {{A, Action::kTakeoff, {100, 0, 10}, 0.0},
                {A, Action::kLand, {150, 0, 0}, 0.0},
                {A, Action::kTakeoff, {150, 0, 5}, 0.0}};
  const MissionEvents ev = mission_events(m);
  ASSERT_FALSE(ev.issue) << describe(*ev.issue);
  const auto it = std::find_if(ev.events.begin(), ev.events.end(),
                               [](const TransitionEvent& e) { return e.kind == EventKind::kTouchedDown; });
  EXPECT_NE(it, ev.events.end());
  EXPECT_EQ(ev.expected_final, make_state(A, SubState::kTakeoff));
}

TEST(AerialOnly, KeepsTheAerialStretch) {
  const Mission m = aerial_only(builtin_mission());
  ASSERT_EQ(m.segments.size(), 6u);
  EXPECT_EQ(m.start, Vec3(100, 0, 0));
  EXPECT_EQ(m.start_medium, A);
  EXPECT_EQ(m.segments.front().action, Action::kTakeoff);
  EXPECT_EQ(m.segments.back().action, Action::kLand);
  EXPECT_FALSE(mission_events(m).issue);
}

TEST(SegmentPath, FirstTickMovesCruiseSpeedTimesDt) {
  const CruiseSpeeds sp;
  const SegmentPath p({T, Action::kDrive, {100, 0, 0}, 0.0}, Vec3::Zero(), 0.0, sp);
  EXPECT_NEAR((p.at(0.01).position - Vec3(0.02, 0, 0)).norm(), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(p.duration(), 50.0);
  EXPECT_EQ(p.at(1000).position, Vec3(100, 0, 0));
}

TEST(SegmentPath, HoverIsConstant) {
  const CruiseSpeeds sp;
  const Vec3 h(200, 100, 150);
  const SegmentPath p({A, Action::kHover, h, 5.0}, h, 0.7, sp);
  for (double t : {0.0, 1.0, 4.9, 20.0}) {
    EXPECT_EQ(p.at(t).position, h);
    EXPECT_EQ(p.at(t).yaw, 0.7);
    EXPECT_EQ(p.at(t).velocity, Vec3::Zero());
  }
}

TEST(SegmentPath, TakeoffClimbsBeforeMovingSideways) {
  const CruiseSpeeds sp;
  const SegmentPath p({A, Action::kTakeoff, {110, 0, 20}, 0.0}, {100, 0, 0}, 0.0, sp);
  const Reference r = p.at(20.0 / 3.0 - 1e-6);
  EXPECT_NEAR(r.position.x(), 100.0, 1e-9);
  EXPECT_NEAR(p.length(), 30.0, 1e-12);
}

TEST(SegmentPath, LandMovesSidewaysBeforeDescending) {
  const CruiseSpeeds sp;
  const SegmentPath p({A, Action::kLand, {200, 0, 0}, 0.0}, {150, 80, 100}, 0.0, sp);
  const double lateral = std::hypot(50.0, 80.0);
  EXPECT_NEAR(p.at(lateral / 3.0).position.z(), 100.0, 1e-9);
  EXPECT_NEAR(p.at(lateral / 3.0 + 1.0).position.z(), 97.0, 1e-9);
}

TEST(SegmentPath, LipschitzInTime) {
  const CruiseSpeeds sp;
  const SegmentPath p({A, Action::kFlyTo, {200, 100, 150}, 0.0}, {100, 0, 100}, 0.0, sp);
  const double dt = 0.01;
  for (double t = 0; t < p.duration() + 1; t += dt)
    EXPECT_LE((p.at(t + dt).position - p.at(t).position).norm(), sp.air * dt + 1e-12);
}

TEST(SegmentPath, YawSlewsToHeading) {
  const CruiseSpeeds sp;
  const SegmentPath p({A, Action::kFlyTo, {110, 10, 100}, 0.0}, {100, 0, 100}, 0.0, sp);
  EXPECT_NEAR(p.yaw(), kPi / 4, 1e-12);
  EXPECT_NEAR(p.at(0.5).yaw, 0.25, 1e-12);
  EXPECT_NEAR(p.at(10).yaw, kPi / 4, 1e-12);
}

TEST(SegmentPath, VerticalMoveHoldsYaw) {
  const CruiseSpeeds sp;
  const SegmentPath p({A, Action::kFlyTo, {100, 0, 50}, 0.0}, {100, 0, 100}, 1.2, sp);
  EXPECT_EQ(p.at(3).yaw, 1.2);
}

TEST(SegmentPath, MediumSelectsSpeed) {
  const CruiseSpeeds sp;
  EXPECT_EQ(SegmentPath({W, Action::kDrive, {300, 100, 0}, 0}, {200, 0, 0}, 0, sp).speed(), 1.0);
  EXPECT_EQ(SegmentPath({T, Action::kDrive, {100, 0, 0}, 0}, {0, 0, 0}, 0, sp).speed(), 2.0);
  EXPECT_EQ(SegmentPath({A, Action::kFlyTo, {150, 0, 5}, 0}, {100, 0, 5}, 0, sp).speed(), 3.0);
}

}  // namespace
}  // namespace cyclo
