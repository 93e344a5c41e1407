#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cyclo/config.hpp"
#include "cyclo/io.hpp"

namespace cyclo {
namespace {

std::string where_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.where();
  }
  return "<no error>";
}

TEST(Config, EmptyObjectGivesDefaults) {
  const SimConfig c = parse_config("{}");
  EXPECT_EQ(c.vehicle.mass, 0.75);
  EXPECT_EQ(c.nmpc.horizon, 15);
  EXPECT_EQ(c.pid[kZ].p, SimConfig{}.pid[kZ].p);
}

TEST(Config, RoundTrip) {
  SimConfig c;
  c.vehicle.mass = 0.8;
  c.pid[kYaw].d = 0.33;
  c.nmpc.q[3] = 4.0;
  c.nmpc.torque_max.z() = 0.7;
  c.sim.cruise.air = 2.5;
  c.surface.crosstrack = 0.75;
  const SimConfig d = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(d), config_to_json(c));
  EXPECT_EQ(d.vehicle.mass, 0.8);
  EXPECT_EQ(d.pid[kYaw].d, 0.33);
  EXPECT_EQ(d.nmpc.q[3], 4.0);
  EXPECT_EQ(d.nmpc.torque_max.z(), 0.7);
}

TEST(Config, ExactVehicleKeyNames) {
  const SimConfig c = parse_config(R"({"vehicle": {"mass": 1, "inertia_xx": 0.01, "inertia_yy": 0.02,
      "inertia_zz": 0.03, "track_width": 0.5, "wheelbase": 0.6, "k_f": 2e-5, "arm": 0.25,
      "rotor_max": 1000, "servo_max": 0.5, "dt": 0.002}})");
  EXPECT_EQ(c.vehicle.inertia, Vec3(0.01, 0.02, 0.03));
  EXPECT_EQ(c.vehicle.dt, 0.002);
  EXPECT_EQ(c.vehicle.servo_max, 0.5);
}

TEST(Config, PidChannels) {
  const SimConfig c = parse_config(R"({"pid": {"pitch": {"p": 3, "i": 0, "d": 0.2}, "integral_limit": 2}})");
  EXPECT_EQ(c.pid[kPitch].p, 3.0);
  EXPECT_EQ(c.pid[kPitch].i, 0.0);
  EXPECT_EQ(c.pid.integral_limit, 2.0);
}

TEST(Config, NmpcKeys) {
  const SimConfig c =
      parse_config(R"({"nmpc": {"horizon": 10, "period": 0.02, "r_c": 0.2, "q_yaw": 1, "max_iters": 20}})");
  EXPECT_EQ(c.nmpc.horizon, 10);
  EXPECT_EQ(c.nmpc.period, 0.02);
  EXPECT_EQ(c.nmpc.r[0], 0.2);
  EXPECT_EQ(c.nmpc.q[3], 1.0);
}

TEST(Config, UnknownKeyNamesThePath) {
  EXPECT_EQ(where_of([] { parse_config(R"({"nmpc": {"horizn": 10}})"); }), "nmpc.horizn");
  EXPECT_EQ(where_of([] { parse_config(R"({"pid": {"z": {"kp": 1}}})"); }), "pid.z.kp");
  EXPECT_EQ(where_of([] { parse_config(R"({"extra": 1})"); }), "extra");
}

TEST(Config, WrongTypeNamesThePath) {
  EXPECT_EQ(where_of([] { parse_config(R"({"vehicle": {"mass": "heavy"}})"); }), "vehicle.mass");
  EXPECT_EQ(where_of([] { parse_config(R"({"nmpc": {"horizon": 2.5}})"); }), "nmpc.horizon");
}

TEST(Config, SyntaxErrorNamesTheLine) {
  EXPECT_EQ(where_of([] { parse_config("{\n  \"vehicle\": {\n    \"mass\": ,\n  }\n}", "cfg.json"); }),
            "cfg.json:3");
}

TEST(Config, InvalidValuesRejected) {
  EXPECT_THROW(parse_config(R"({"vehicle": {"mass": -1}})"), ParseError);
  EXPECT_THROW(parse_config(R"({"nmpc": {"horizon": 1}})"), ParseError);
  EXPECT_THROW(parse_config(R"({"sim": {"controller_period": 0.0123}})"), ParseError);
}

TEST(Config, MissingFileNamesThePath) {
  EXPECT_EQ(where_of([] { load_config("/nonexistent/cyclo.json"); }), "/nonexistent/cyclo.json");
}

TEST(MissionFile, RoundTripBuiltin) {
  const Mission m = builtin_mission();
  const Mission back = mission_from_json(mission_to_json(m));
  ASSERT_EQ(back.segments.size(), m.segments.size());
  for (std::size_t i = 0; i < m.segments.size(); ++i) {
    EXPECT_EQ(back.segments[i].medium, m.segments[i].medium);
    EXPECT_EQ(back.segments[i].action, m.segments[i].action);
    EXPECT_EQ(back.segments[i].target, m.segments[i].target);
    EXPECT_EQ(back.segments[i].hold, m.segments[i].hold);
  }
}

TEST(MissionFile, HoverHoldDefault) {
  const Mission m = parse_mission(R"({"start": {"position": [100, 0, 0], "medium": "Aerial"},
      "segments": [{"medium": "aerial", "action": "takeoff", "target": [100, 0, 5]},
                   {"medium": "aerial", "action": "hover", "target": [100, 0, 5]}]})");
  EXPECT_EQ(m.start_medium, Medium::kAerial);
  EXPECT_EQ(m.segments[0].hold, 0.0);
  EXPECT_EQ(m.segments[1].hold, kDefaultHoverHold);
}

TEST(MissionFile, Errors) {
  EXPECT_EQ(where_of([] { parse_mission(R"({"segments": [{"medium": "air", "action": "hover", "target": [0,0,0]}]})"); }),
            "segments[0].medium");
  EXPECT_EQ(where_of([] { parse_mission(R"({"segments": [{"medium": "aerial", "action": "hover"}]})"); }),
            "segments[0].target");
  EXPECT_EQ(where_of([] { parse_mission(R"({"segments": [{"medium": "aerial", "action": "hover", "target": [0,0]}]})"); }),
            "segments[0].target");
}

TEST(Io, LogCsvHeaderAndShape) {
  const RunLog log = run(SimConfig{}, Mission{}, ControllerKind::kPid);
  const std::string csv = log_csv(log);
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header,
            "t,medium,substate,px,py,pz,vx,vy,vz,qw,qx,qy,qz,wx,wy,wz,ref_x,ref_y,ref_z,ref_yaw,c,tau_x,tau_y,tau_z,"
            "w1,w2,w3,w4,servo,cost,iters");
  const std::string row = csv.substr(header.size() + 1);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
  EXPECT_EQ(row.rfind("0,Terrestrial,Static,", 0), 0u);
}

TEST(Io, AtomicWriteLeavesNoTemp) {
  const auto dir = std::filesystem::temp_directory_path() / "cyclo_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "a.txt";
  write_atomic(path, "first");
  write_atomic(path, "second");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  EXPECT_EQ(s, "second");
  EXPECT_FALSE(std::filesystem::exists(dir / "a.txt.tmp"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace cyclo
