#pragma once

#include <array>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "utv/common.hpp"
#include "utv/kinematics.hpp"

namespace utv {

/// One 2D body landmark in normalized image coordinates (y grows downward).
struct Landmark {
  double x{0.0};
  double y{0.0};
  double visibility{0.0};
};

/// A full 33-landmark body frame with its capture timestamp.
struct LandmarkFrame {
  double timestamp{0.0};
  std::array<Landmark, 33> points{};
};

namespace landmarks {
inline constexpr int kLeftShoulder = 11;
inline constexpr int kRightShoulder = 12;
inline constexpr int kLeftWrist = 15;
inline constexpr int kRightWrist = 16;
inline constexpr int kLeftHip = 23;
inline constexpr int kRightHip = 24;
inline constexpr int kLeftAnkle = 27;
inline constexpr int kRightAnkle = 28;
// classification requires this contiguous subset to be visible
inline constexpr int kRequiredFirst = 11;
inline constexpr int kRequiredLast = 30;
}  // namespace landmarks

enum class LeaderPose { upright, crouch, crouch_right_hand, crouch_left_hand, unknown };

inline const char* to_string(LeaderPose p) {
  switch (p) {
    case LeaderPose::upright: return "upright";
    case LeaderPose::crouch: return "crouch";
    case LeaderPose::crouch_right_hand: return "crouch-right-hand";
    case LeaderPose::crouch_left_hand: return "crouch-left-hand";
    default: return "unknown";
  }
}

struct ClassifierConfig {
  /// crouch iff (hip-to-ankle extent) / (shoulder-to-ankle extent) < this
  double crouch_ratio{0.55};
  double min_visibility{0.5};
};

/// Deterministic pose classification from landmark geometry.
///
/// Rules: the stance ratio (hip-to-ankle vertical extent over
/// shoulder-to-ankle vertical extent, averaged over both sides) below the
/// crouch threshold means crouching; a wrist above its shoulder flags the
/// raised hand. A frame with missing/implausible required landmarks is
/// unknown. Both hands raised is treated as a plain crouch (stop).
inline LeaderPose classify_pose(const LandmarkFrame& frame, const ClassifierConfig& cfg = {}) {
  namespace lm = landmarks;
  for (int i = lm::kRequiredFirst; i <= lm::kRequiredLast; ++i) {
    const Landmark& p = frame.points[static_cast<std::size_t>(i)];
    if (p.visibility < cfg.min_visibility) return LeaderPose::unknown;
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) return LeaderPose::unknown;
  }
  const auto& pts = frame.points;
  const double shoulder_to_ankle =
      0.5 * ((pts[lm::kLeftAnkle].y - pts[lm::kLeftShoulder].y) +
             (pts[lm::kRightAnkle].y - pts[lm::kRightShoulder].y));
  const double hip_to_ankle = 0.5 * ((pts[lm::kLeftAnkle].y - pts[lm::kLeftHip].y) +
                                     (pts[lm::kRightAnkle].y - pts[lm::kRightHip].y));
  if (shoulder_to_ankle <= 0.0) return LeaderPose::unknown;
  const double ratio = hip_to_ankle / shoulder_to_ankle;
  if (ratio >= cfg.crouch_ratio) return LeaderPose::upright;

  const bool right_raised = pts[lm::kRightWrist].y < pts[lm::kRightShoulder].y;
  const bool left_raised = pts[lm::kLeftWrist].y < pts[lm::kLeftShoulder].y;
  if (right_raised && !left_raised) return LeaderPose::crouch_right_hand;
  if (left_raised && !right_raised) return LeaderPose::crouch_left_hand;
  return LeaderPose::crouch;
}

/// Horizontal mirror of a frame: reflects x and swaps the left/right
/// landmark labels (a mirrored image swaps the person's sides).
inline LandmarkFrame mirror_frame(const LandmarkFrame& frame) {
  LandmarkFrame out = frame;
  for (auto& p : out.points) p.x = 1.0 - p.x;
  constexpr std::array<std::pair<int, int>, 16> kPairs{{{1, 4},
                                                        {2, 5},
                                                        {3, 6},
                                                        {7, 8},
                                                        {9, 10},
                                                        {11, 12},
                                                        {13, 14},
                                                        {15, 16},
                                                        {17, 18},
                                                        {19, 20},
                                                        {21, 22},
                                                        {23, 24},
                                                        {25, 26},
                                                        {27, 28},
                                                        {29, 30},
                                                        {31, 32}}};
  for (const auto& [a, b] : kPairs) {
    std::swap(out.points[static_cast<std::size_t>(a)], out.points[static_cast<std::size_t>(b)]);
  }
  return out;
}

using WheelCommand = WheelSpeeds;

/// Maps the debounced leader pose plus the controller outputs to wheel
/// commands:
///   upright            -> inverse kinematics of (v, saturated thetadot)
///   crouch             -> stop
///   crouch-right-hand  -> forward at v_fix, zero turn rate
///   crouch-left-hand   -> backward at v_fix, zero turn rate
///   unknown            -> hold the previous command for up to
///                         `unknown_hold` ticks, then stop
///
/// A pose must persist `debounce_frames` consecutive ticks before it
/// becomes active, which suppresses command chattering on classifier
/// flicker. The selector starts stopped until the first pose debounces in.
class CommandSelector {
 public:
  explicit CommandSelector(const VehicleParams& params, double v_fix = 0.5,
                           int debounce_frames = 3, int unknown_hold = 3)
      : params_(params), v_fix_(v_fix), debounce_(debounce_frames), unknown_hold_(unknown_hold) {
    validate(params);
    detail::require(v_fix > 0.0, "v_fix must be > 0");
    detail::require(debounce_frames >= 1, "debounce_frames must be >= 1");
    detail::require(unknown_hold >= 0, "unknown_hold must be >= 0");
  }

  WheelCommand select(LeaderPose observed, double thetadot_cmd, double v_cmd) {
    if (observed == LeaderPose::unknown) {
      if (++unknown_run_ > unknown_hold_) {
        active_ = LeaderPose::unknown;
        last_ = WheelCommand{0.0, 0.0};
      }
      return last_;
    }
    unknown_run_ = 0;
    if (observed == active_) {
      candidate_run_ = 0;
    } else if (observed == candidate_) {
      if (++candidate_run_ >= debounce_) {
        active_ = observed;
        candidate_run_ = 0;
      }
    } else {
      candidate_ = observed;
      candidate_run_ = 1;
      if (candidate_run_ >= debounce_) {
        active_ = observed;
        candidate_run_ = 0;
      }
    }

    WheelCommand cmd{0.0, 0.0};
    switch (active_) {
      case LeaderPose::upright:
        cmd = inverse_kinematics(Twist{v_cmd, saturate(thetadot_cmd, params_.thetadot_max)},
                                 params_);
        break;
      case LeaderPose::crouch_right_hand:
        cmd = inverse_kinematics(Twist{v_fix_, 0.0}, params_);
        break;
      case LeaderPose::crouch_left_hand:
        cmd = inverse_kinematics(Twist{-v_fix_, 0.0}, params_);
        break;
      case LeaderPose::crouch:
      case LeaderPose::unknown:
        break;  // stop
    }
    last_ = cmd;
    return cmd;
  }

  LeaderPose active_pose() const { return active_; }

  void reset() {
    active_ = LeaderPose::unknown;
    candidate_ = LeaderPose::unknown;
    candidate_run_ = 0;
    unknown_run_ = 0;
    last_ = WheelCommand{0.0, 0.0};
  }

 private:
  VehicleParams params_;
  double v_fix_;
  int debounce_;
  int unknown_hold_;
  LeaderPose active_{LeaderPose::unknown};
  LeaderPose candidate_{LeaderPose::unknown};
  int candidate_run_{0};
  int unknown_run_{0};
  WheelCommand last_{0.0, 0.0};
};

/// Parses a landmark replay stream: one frame per line, timestamp followed
/// by 33 (x, y, visibility) triples, whitespace separated. Blank lines and
/// lines starting with '#' are skipped.
inline std::vector<LandmarkFrame> parse_landmark_stream(std::istream& in) {
  std::vector<LandmarkFrame> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    LandmarkFrame frame;
    if (!(fields >> frame.timestamp)) {
      throw std::invalid_argument("landmark file: bad timestamp at line " +
                                  std::to_string(line_no));
    }
    for (auto& p : frame.points) {
      if (!(fields >> p.x >> p.y >> p.visibility)) {
        throw std::invalid_argument("landmark file: expected 33 (x, y, visibility) triples at line " +
                                    std::to_string(line_no));
      }
    }
    double extra = 0.0;
    if (fields >> extra) {
      throw std::invalid_argument("landmark file: trailing fields at line " +
                                  std::to_string(line_no));
    }
    frames.push_back(frame);
  }
  return frames;
}

inline std::vector<LandmarkFrame> load_landmark_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open landmark file: " + path);
  return parse_landmark_stream(in);
}

}  // namespace utv
