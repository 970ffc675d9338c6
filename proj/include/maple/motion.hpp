#pragma once

// Keyframe gestures: motion file parsing, compilation into grouped
// multi-motor command timelines, and a simulated motor bus that records the
// torque/write/close lifecycle.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "maple/assets.hpp"
#include "maple/errors.hpp"
#include "maple/json_document.hpp"

namespace maple {

using MotorId = int;
using Pose = std::map<MotorId, double>;  // motor -> joint target, degrees

inline constexpr double kJointLimitDeg = 180.0;

struct Keyframe {
  Pose pose;
  TimeMs hold_ms = 0;

  friend bool operator==(const Keyframe&, const Keyframe&) = default;
};

struct MotionFile {
  std::string name;
  std::vector<MotorId> motor_ids;
  std::vector<Keyframe> keyframes;

  friend bool operator==(const MotionFile&, const MotionFile&) = default;
};

struct GroupCommand {
  TimeMs at_ms = 0;
  Pose targets;

  friend bool operator==(const GroupCommand&, const GroupCommand&) = default;
};

struct MotionTimeline {
  std::string motion;
  std::vector<GroupCommand> commands;
  TimeMs total_duration_ms = 0;

  friend bool operator==(const MotionTimeline&, const MotionTimeline&) = default;
};

// Parses a motion document:
//   {"name": "wave", "motors": [1, 2],
//    "keyframes": [{"pose": {"1": 10.0, "2": -5.0}, "hold_ms": 300}, ...]}
// Every pose must cover exactly the declared motors. Only the final keyframe
// may have a zero hold, so command times stay strictly increasing.
inline MotionFile parse_motion(std::string_view document) {
  auto doc = JsonDocument::parse(document);
  auto root = FieldReader::root(doc);
  root.expect_object();
  root.reject_unknown({"name", "motors", "keyframes"});

  MotionFile m;
  m.name = root.field("name").as_string();
  if (m.name.empty()) root.field("name").fail("BAD_VALUE", "motion name must not be empty");

  auto motors = root.field("motors");
  std::set<MotorId> declared;
  for (std::size_t i = 0, n = motors.array_size(); i < n; ++i) {
    auto id = motors.element(i).as_int();
    if (id < 0 || id > 253) motors.element(i).fail("BAD_VALUE", "motor id out of range");
    if (!declared.insert(static_cast<MotorId>(id)).second)
      motors.element(i).fail("DUPLICATE_MOTOR", "motor listed twice");
    m.motor_ids.push_back(static_cast<MotorId>(id));
  }
  if (m.motor_ids.empty()) motors.fail("BAD_VALUE", "at least one motor is required");

  auto frames = root.field("keyframes");
  const std::size_t count = frames.array_size();
  if (count == 0) frames.fail("EMPTY_KEYFRAMES", "at least one keyframe is required");
  for (std::size_t k = 0; k < count; ++k) {
    auto frame = frames.element(k);
    frame.expect_object();
    frame.reject_unknown({"pose", "hold_ms"});
    Keyframe kf;
    auto hold = frame.field("hold_ms");
    kf.hold_ms = hold.as_int();
    if (kf.hold_ms < 0) hold.fail("NEGATIVE_HOLD", "hold_ms must be >= 0");
    if (kf.hold_ms == 0 && k + 1 != count)
      hold.fail("ZERO_HOLD_NOT_LAST", "only the final keyframe may have hold_ms 0");

    auto pose = frame.field("pose");
    pose.expect_object();
    for (auto it = pose.node().begin(); it != pose.node().end(); ++it) {
      auto target = pose.field(it.key());
      MotorId id = -1;
      try {
        std::size_t used = 0;
        id = std::stoi(it.key(), &used);
        if (used != it.key().size()) id = -1;
      } catch (const std::exception&) {
        id = -1;
      }
      if (id < 0 || !declared.count(id))
        target.fail("POSE_UNKNOWN_MOTOR", "pose names undeclared motor '" + it.key() + "'");
      const double deg = target.as_number();
      if (!(deg >= -kJointLimitDeg && deg <= kJointLimitDeg))
        target.fail("JOINT_OUT_OF_RANGE", "joint target outside [-180, 180] degrees");
      kf.pose[id] = deg;
    }
    for (MotorId id : m.motor_ids) {
      if (!kf.pose.count(id))
        pose.fail("POSE_INCOMPLETE", "pose omits motor " + std::to_string(id));
    }
    m.keyframes.push_back(std::move(kf));
  }
  return m;
}

inline Json to_json(const MotionFile& m) {
  Json j = Json::object();
  j["name"] = m.name;
  j["motors"] = m.motor_ids;
  Json frames = Json::array();
  for (const auto& kf : m.keyframes) {
    Json pose = Json::object();
    for (const auto& [id, deg] : kf.pose) pose[std::to_string(id)] = deg;
    frames.push_back(Json{{"pose", pose}, {"hold_ms", kf.hold_ms}});
  }
  j["keyframes"] = frames;
  return j;
}

// One grouped command per keyframe, issued at the start of its hold:
// command k fires at start_ms + sum(hold_ms of keyframes 0..k-1).
inline MotionTimeline compile_motion(const MotionFile& motion, TimeMs start_ms) {
  MotionTimeline timeline;
  timeline.motion = motion.name;
  TimeMs t = start_ms;
  for (const auto& kf : motion.keyframes) {
    timeline.commands.push_back(GroupCommand{t, kf.pose});
    t += kf.hold_ms;
  }
  timeline.total_duration_ms = t - start_ms;
  return timeline;
}

inline Json to_json(const GroupCommand& c) {
  Json targets = Json::object();
  for (const auto& [id, deg] : c.targets) targets[std::to_string(id)] = deg;
  return Json{{"at_ms", c.at_ms}, {"targets", targets}};
}

inline Json to_json(const MotionTimeline& t) {
  Json cmds = Json::array();
  for (const auto& c : t.commands) cmds.push_back(to_json(c));
  return Json{{"motion", t.motion}, {"commands", cmds}, {"total_duration_ms", t.total_duration_ms}};
}

struct TorqueOn {
  std::vector<MotorId> motors;
  friend bool operator==(const TorqueOn&, const TorqueOn&) = default;
};
struct GroupWrite {
  GroupCommand command;
  friend bool operator==(const GroupWrite&, const GroupWrite&) = default;
};
struct TorqueOff {
  std::vector<MotorId> motors;
  friend bool operator==(const TorqueOff&, const TorqueOff&) = default;
};
struct BusClose {
  friend bool operator==(const BusClose&, const BusClose&) = default;
};

using BusEvent = std::variant<TorqueOn, GroupWrite, TorqueOff, BusClose>;
using BusTrace = std::vector<BusEvent>;

inline Json to_json(const BusEvent& e) {
  return std::visit(
      [](const auto& ev) -> Json {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, TorqueOn>)
          return Json{{"event", "torque_on"}, {"motors", ev.motors}};
        else if constexpr (std::is_same_v<T, GroupWrite>)
          return Json{{"event", "group_write"}, {"command", to_json(ev.command)}};
        else if constexpr (std::is_same_v<T, TorqueOff>)
          return Json{{"event", "torque_off"}, {"motors", ev.motors}};
        else
          return Json{{"event", "close"}};
      },
      e);
}

// Stand-in for the serial servo bus. Construction enables torque; close()
// (or destruction) disables torque and closes the port, exactly once.
class SimulatedBus {
 public:
  explicit SimulatedBus(std::set<MotorId> motors) : motors_(std::move(motors)) {
    trace_.push_back(TorqueOn{{motors_.begin(), motors_.end()}});
  }
  SimulatedBus(const SimulatedBus&) = delete;
  SimulatedBus& operator=(const SimulatedBus&) = delete;
  ~SimulatedBus() { close(); }

  void write(const GroupCommand& command) {
    if (closed_) throw Error("BUS_CLOSED", "write after close");
    for (const auto& [id, deg] : command.targets) {
      (void)deg;
      if (!motors_.count(id))
        throw Error("UNKNOWN_MOTOR", "motor " + std::to_string(id) + " is not on the bus");
    }
    trace_.push_back(GroupWrite{command});
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    trace_.push_back(TorqueOff{{motors_.begin(), motors_.end()}});
    trace_.push_back(BusClose{});
  }

  const BusTrace& trace() const { return trace_; }

 private:
  std::set<MotorId> motors_;
  BusTrace trace_;
  bool closed_ = false;
};

// Replays timelines onto a fresh bus in global time order (ties keep the
// order of `timelines`). Throws OverlapError when one motor receives two
// commands with the same timestamp.
inline BusTrace simulate_bus(const std::vector<MotionTimeline>& timelines,
                             const std::set<MotorId>& motor_ids) {
  struct Ref {
    TimeMs at;
    const GroupCommand* cmd;
  };
  std::vector<Ref> merged;
  for (const auto& tl : timelines)
    for (const auto& c : tl.commands) merged.push_back({c.at_ms, &c});
  std::stable_sort(merged.begin(), merged.end(),
                   [](const Ref& a, const Ref& b) { return a.at < b.at; });

  std::map<std::pair<TimeMs, MotorId>, bool> used;
  for (const auto& r : merged)
    for (const auto& [id, deg] : r.cmd->targets) {
      (void)deg;
      if (!used.emplace(std::make_pair(r.at, id), true).second) throw OverlapError(id, r.at);
    }

  SimulatedBus bus(motor_ids);
  for (const auto& r : merged) bus.write(*r.cmd);
  bus.close();
  return bus.trace();
}

// Motion files by name.
class MotionLibrary {
 public:
  void add(MotionFile m) { motions_.insert_or_assign(m.name, std::move(m)); }

  const MotionFile* find(const std::string& name) const {
    auto it = motions_.find(name);
    return it == motions_.end() ? nullptr : &it->second;
  }

  const MotionFile& at(const std::string& name) const {
    const auto* m = find(name);
    if (m == nullptr) throw UnknownMotion(name);
    return *m;
  }

  bool contains(const std::string& name) const { return motions_.count(name) != 0; }

  std::set<MotorId> motor_ids() const {
    std::set<MotorId> ids;
    for (const auto& [name, m] : motions_) ids.insert(m.motor_ids.begin(), m.motor_ids.end());
    return ids;
  }

  const std::map<std::string, MotionFile>& entries() const { return motions_; }

  // Loads every *.json file in `dir`, keyed by the file's "name".
  static MotionLibrary load_directory(const std::filesystem::path& dir) {
    MotionLibrary lib;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      try {
        lib.add(parse_motion(ss.str()));
      } catch (const ParseError& e) {
        throw ParseError(e.code(), f.filename().string() + ":" + e.field_path(),
                         e.byte_offset(), e.what());
      }
    }
    return lib;
  }

 private:
  std::map<std::string, MotionFile> motions_;
};

}  // namespace maple
