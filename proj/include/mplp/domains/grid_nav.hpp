#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mplp/domain.hpp"

namespace mplp {

/// 2D occupancy grid, row-major with y growing downward in the file.
class OccupancyGrid {
 public:
  OccupancyGrid(int width, int height, double resolution, std::vector<std::uint8_t> blocked);

  int width() const { return width_; }
  int height() const { return height_; }
  /// Cell edge length in meters.
  double resolution() const { return resolution_; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool blocked(int x, int y) const { return blocked_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  /// Off-map cells count as blocked.
  bool free(int x, int y) const { return in_bounds(x, y) && !blocked(x, y); }
  std::size_t blocked_count() const;
  std::size_t free_count() const { return static_cast<std::size_t>(width_) * height_ - blocked_count(); }

 private:
  int width_;
  int height_;
  double resolution_;
  std::vector<std::uint8_t> blocked_;
};

/// Map file format: first line "width height resolution", then `height` lines
/// of exactly `width` characters, '.' free and '#' blocked.
/// Throws ParseError (with line number) or DimensionMismatch.
OccupancyGrid parse_map(std::istream& in);
OccupancyGrid load_map(const std::filesystem::path& path);
std::string format_map(const OccupancyGrid& grid);

/// I.i.d. blocked cells with the given density.
OccupancyGrid random_map(int width, int height, double density, std::uint64_t seed, double resolution = 0.05);

/// A motion primitive in the robot frame, in cells and heading bins.
struct MotionPrimitive {
  std::string name;
  double forward = 0;
  double lateral = 0;  // positive to the left
  int turn = 0;        // heading bins, positive counter-clockwise
};

/// The 18 default primitives: forward 1-4 cells, backward 1-2, sidesteps of
/// 1 and 2 cells each way, four diagonals, two forward arcs and turn-in-place
/// by one bin either way.
std::vector<MotionPrimitive> default_primitives();

struct GridPose {
  int x = 0;
  int y = 0;
  int theta = 0;  // heading bin

  friend bool operator==(const GridPose&, const GridPose&) = default;
};

struct GridNavParams {
  double d_cc = 0.0125;       // meters between collision-checked poses
  int theta_bins = 16;
  double eval_delay_s = 0.0;  // simulated cost of each collision check
};

/// (x, y, theta) lattice navigation over an occupancy grid.
///
/// The lazy successor only checks the end pose of a primitive. The true
/// evaluation checks poses interpolated every d_cc along it (linear in x, y;
/// shortest arc in theta), endpoints included, and sleeps eval_delay_s per
/// check. Feasible edges cost their translation length in meters, so both
/// evaluators agree whenever the primitive is collision-free. The heuristic is
/// the Euclidean distance to the goal cell; any heading in the goal cell
/// satisfies the goal.
class GridNavDomain final : public Domain {
 public:
  GridNavDomain(OccupancyGrid grid, GridPose start, int goal_x, int goal_y, GridNavParams params = {},
                std::vector<MotionPrimitive> primitives = default_primitives());

  StatePayload start() const override { return encode(start_); }
  bool is_goal(StatePayload s) const override;
  Cost heuristic(StatePayload s) const override;
  std::size_t action_count(StatePayload) const override { return primitives_.size(); }
  Transition lazy_successor(StatePayload s, ActionId a) const override;
  Transition true_evaluate(StatePayload s, ActionId a) const override;
  std::optional<std::size_t> state_space_bound() const override;

  Transition grid_lazy_successor(const GridPose& pose, std::size_t primitive) const;
  /// `checks`, when given, receives the number of poses checked.
  Transition grid_true_evaluate(const GridPose& pose, std::size_t primitive, std::size_t* checks = nullptr) const;
  /// Number of interpolated poses checked for this primitive: one for a pure
  /// rotation, otherwise ceil(length / d_cc) + 1.
  std::size_t collision_checks(const GridPose& pose, std::size_t primitive) const;
  /// Translation length of the primitive from this heading, in meters.
  double primitive_length(int theta, std::size_t primitive) const;
  GridPose primitive_end(const GridPose& pose, std::size_t primitive) const;

  static StatePayload encode(const GridPose& p);
  static GridPose decode(StatePayload s);

  const OccupancyGrid& grid() const { return grid_; }
  const GridNavParams& params() const { return params_; }
  const std::vector<MotionPrimitive>& primitives() const { return primitives_; }
  GridPose start_pose() const { return start_; }
  int goal_x() const { return goal_x_; }
  int goal_y() const { return goal_y_; }

  /// Same problem with a different collision-check spacing and delay.
  GridNavDomain with_params(GridNavParams params) const;

 private:
  struct Step {
    int dx;
    int dy;
    int dtheta;
    double length;
  };

  const Step& step(int theta, std::size_t primitive) const {
    return steps_[static_cast<std::size_t>(theta) * primitives_.size() + primitive];
  }

  OccupancyGrid grid_;
  GridPose start_;
  int goal_x_;
  int goal_y_;
  GridNavParams params_;
  std::vector<MotionPrimitive> primitives_;
  std::vector<Step> steps_;  // per heading bin, per primitive
};

}  // namespace mplp
