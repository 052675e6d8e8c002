#include "mplp/domains/grid_nav.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string_view>
#include <thread>

#include "mplp/errors.hpp"

namespace mplp {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, std::vector<std::uint8_t> blocked)
    : width_(width), height_(height), resolution_(resolution), blocked_(std::move(blocked)) {
  if (width <= 0 || height <= 0) throw DimensionMismatch("grid dimensions must be positive");
  if (!(resolution > 0) || !std::isfinite(resolution)) throw DimensionMismatch("grid resolution must be positive");
  if (blocked_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionMismatch("occupancy data has " + std::to_string(blocked_.size()) + " cells, expected " +
                            std::to_string(static_cast<std::size_t>(width) * height));
  }
}

std::size_t OccupancyGrid::blocked_count() const {
  std::size_t n = 0;
  for (auto b : blocked_) n += b != 0;
  return n;
}

OccupancyGrid parse_map(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw ParseError(1, "missing header 'width height resolution'");
  std::istringstream hs(line);
  long long w = 0;
  long long h = 0;
  double res = 0;
  std::string extra;
  if (!(hs >> w >> h >> res) || (hs >> extra)) throw ParseError(lineno, "expected 'width height resolution'");
  if (w <= 0 || h <= 0 || w > (1 << 20) || h > (1 << 20)) throw ParseError(lineno, "invalid map dimensions");
  if (!(res > 0) || !std::isfinite(res)) throw ParseError(lineno, "resolution must be positive");

  std::vector<std::uint8_t> cells;
  cells.reserve(static_cast<std::size_t>(w * h));
  for (long long y = 0; y < h; ++y) {
    if (!next_line()) {
      throw DimensionMismatch("map has " + std::to_string(y) + " rows, header declares " + std::to_string(h));
    }
    if (static_cast<long long>(line.size()) != w) {
      throw ParseError(lineno, "row has " + std::to_string(line.size()) + " cells, expected " + std::to_string(w));
    }
    for (char c : line) {
      if (c == '.') {
        cells.push_back(0);
      } else if (c == '#') {
        cells.push_back(1);
      } else {
        throw ParseError(lineno, std::string("unexpected character '") + c + "'");
      }
    }
  }
  while (next_line()) {
    if (line.find_first_not_of(" \t") != std::string::npos) {
      throw DimensionMismatch("map has more rows than the header declares");
    }
  }
  return OccupancyGrid(static_cast<int>(w), static_cast<int>(h), res, std::move(cells));
}

OccupancyGrid load_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open map file " + path.string());
  return parse_map(in);
}

std::string format_map(const OccupancyGrid& grid) {
  char res[32];
  std::ostringstream os;
  os << grid.width() << ' ' << grid.height() << ' '
     << std::string_view(res, std::to_chars(res, res + sizeof(res), grid.resolution()).ptr) << '\n';
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) os << (grid.blocked(x, y) ? '#' : '.');
    os << '\n';
  }
  return os.str();
}

OccupancyGrid random_map(int width, int height, double density, std::uint64_t seed, double resolution) {
  if (width <= 0 || height <= 0) throw DimensionMismatch("grid dimensions must be positive");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution blocked(density);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(width) * height);
  for (auto& c : cells) c = blocked(rng) ? 1 : 0;
  return OccupancyGrid(width, height, resolution, std::move(cells));
}

std::vector<MotionPrimitive> default_primitives() {
  return {
      {"forward_1", 1, 0, 0},       {"forward_2", 2, 0, 0},        {"forward_3", 3, 0, 0},
      {"forward_4", 4, 0, 0},       {"backward_1", -1, 0, 0},      {"backward_2", -2, 0, 0},
      {"left_1", 0, 1, 0},          {"left_2", 0, 2, 0},           {"right_1", 0, -1, 0},
      {"right_2", 0, -2, 0},        {"diag_fl", 1, 1, 0},          {"diag_fr", 1, -1, 0},
      {"diag_bl", -1, 1, 0},        {"diag_br", -1, -1, 0},        {"arc_left", 2, 1, 1},
      {"arc_right", 2, -1, -1},     {"turn_ccw", 0, 0, 1},         {"turn_cw", 0, 0, -1},
  };
}

namespace {

constexpr int kCoordBits = 24;
constexpr StatePayload kCoordMask = (StatePayload{1} << kCoordBits) - 1;

}  // namespace

StatePayload GridNavDomain::encode(const GridPose& p) {
  return (static_cast<StatePayload>(static_cast<std::uint32_t>(p.x)) & kCoordMask) |
         ((static_cast<StatePayload>(static_cast<std::uint32_t>(p.y)) & kCoordMask) << kCoordBits) |
         (static_cast<StatePayload>(static_cast<std::uint32_t>(p.theta)) << (2 * kCoordBits));
}

GridPose GridNavDomain::decode(StatePayload s) {
  return {static_cast<int>(s & kCoordMask), static_cast<int>((s >> kCoordBits) & kCoordMask),
          static_cast<int>(s >> (2 * kCoordBits))};
}

GridNavDomain::GridNavDomain(OccupancyGrid grid, GridPose start, int goal_x, int goal_y, GridNavParams params,
                             std::vector<MotionPrimitive> primitives)
    : grid_(std::move(grid)),
      start_(start),
      goal_x_(goal_x),
      goal_y_(goal_y),
      params_(params),
      primitives_(std::move(primitives)) {
  if (!(params_.d_cc > 0)) throw ConfigError("d_cc must be positive");
  if (params_.theta_bins <= 0 || params_.theta_bins > 65535) throw ConfigError("theta_bins out of range");
  if (params_.eval_delay_s < 0) throw ConfigError("eval_delay must be non-negative");
  if (primitives_.empty()) throw ConfigError("no motion primitives");
  if (grid_.width() > static_cast<int>(kCoordMask) || grid_.height() > static_cast<int>(kCoordMask)) {
    throw DimensionMismatch("grid too large for pose encoding");
  }
  if (!grid_.free(start.x, start.y) || start.theta < 0 || start.theta >= params_.theta_bins) {
    throw ContractViolation("start pose is not a free lattice pose");
  }
  if (!grid_.in_bounds(goal_x, goal_y)) throw ContractViolation("goal cell is off the map");

  const int bins = params_.theta_bins;
  steps_.reserve(static_cast<std::size_t>(bins) * primitives_.size());
  for (int t = 0; t < bins; ++t) {
    const double a = 2.0 * std::numbers::pi * t / bins;
    const double c = std::cos(a);
    const double s = std::sin(a);
    for (const auto& p : primitives_) {
      const int dx = static_cast<int>(std::lround(p.forward * c - p.lateral * s));
      const int dy = static_cast<int>(std::lround(p.forward * s + p.lateral * c));
      steps_.push_back({dx, dy, p.turn, grid_.resolution() * std::hypot(dx, dy)});
    }
  }
}

bool GridNavDomain::is_goal(StatePayload s) const {
  const GridPose p = decode(s);
  return p.x == goal_x_ && p.y == goal_y_;
}

Cost GridNavDomain::heuristic(StatePayload s) const {
  const GridPose p = decode(s);
  return grid_.resolution() * std::hypot(p.x - goal_x_, p.y - goal_y_);
}

Transition GridNavDomain::lazy_successor(StatePayload s, ActionId a) const {
  return grid_lazy_successor(decode(s), index(a));
}

Transition GridNavDomain::true_evaluate(StatePayload s, ActionId a) const {
  return grid_true_evaluate(decode(s), index(a));
}

std::optional<std::size_t> GridNavDomain::state_space_bound() const {
  return static_cast<std::size_t>(grid_.width()) * grid_.height() * params_.theta_bins;
}

GridPose GridNavDomain::primitive_end(const GridPose& pose, std::size_t primitive) const {
  const Step& st = step(pose.theta, primitive);
  const int bins = params_.theta_bins;
  return {pose.x + st.dx, pose.y + st.dy, ((pose.theta + st.dtheta) % bins + bins) % bins};
}

double GridNavDomain::primitive_length(int theta, std::size_t primitive) const {
  return step(theta, primitive).length;
}

std::size_t GridNavDomain::collision_checks(const GridPose& pose, std::size_t primitive) const {
  const double len = step(pose.theta, primitive).length;
  if (len == 0) return 1;
  // Guard against lengths that are exact multiples of d_cc up to rounding.
  return static_cast<std::size_t>(std::ceil(len / params_.d_cc - 1e-9)) + 1;
}

Transition GridNavDomain::grid_lazy_successor(const GridPose& pose, std::size_t primitive) const {
  const GridPose end = primitive_end(pose, primitive);
  if (!grid_.in_bounds(end.x, end.y)) return {};
  const Cost cost = grid_.blocked(end.x, end.y) ? kInfiniteCost : step(pose.theta, primitive).length;
  return {encode(end), cost};
}

Transition GridNavDomain::grid_true_evaluate(const GridPose& pose, std::size_t primitive, std::size_t* checks) const {
  const GridPose end = primitive_end(pose, primitive);
  const Step& st = step(pose.theta, primitive);
  const std::size_t n = collision_checks(pose, primitive);
  if (checks) *checks = n;
  if (params_.eval_delay_s > 0) {
    std::this_thread::sleep_for(std::chrono::duration<double>(params_.eval_delay_s * static_cast<double>(n)));
  }
  if (!grid_.in_bounds(end.x, end.y)) return {};
  // Headings are irrelevant for a point robot, so only (x, y) is checked.
  bool free = true;
  for (std::size_t i = 0; i < n && free; ++i) {
    const double f = n == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    const int x = pose.x + static_cast<int>(std::lround(f * st.dx));
    const int y = pose.y + static_cast<int>(std::lround(f * st.dy));
    free = grid_.free(x, y);
  }
  return {encode(end), free ? st.length : kInfiniteCost};
}

GridNavDomain GridNavDomain::with_params(GridNavParams params) const {
  return GridNavDomain(grid_, start_, goal_x_, goal_y_, params, primitives_);
}

}  // namespace mplp
