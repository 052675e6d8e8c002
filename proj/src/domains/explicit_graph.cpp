#include "mplp/domains/explicit_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <queue>
#include <random>
#include <sstream>
#include <thread>

#include "mplp/errors.hpp"

namespace mplp {

ExplicitGraphDomain::ExplicitGraphDomain(std::size_t num_vertices, std::uint32_t start,
                                         std::vector<std::uint32_t> goals, std::vector<GraphEdgeSpec> edges,
                                         std::vector<Cost> heuristic)
    : num_vertices_(num_vertices),
      start_(start),
      goals_(std::move(goals)),
      is_goal_(num_vertices, false),
      edges_(std::move(edges)),
      out_(num_vertices),
      heuristic_(std::move(heuristic)) {
  if (num_vertices == 0) throw ContractViolation("graph has no vertices");
  if (start >= num_vertices) throw ContractViolation("start vertex out of range");
  for (std::uint32_t g : goals_) {
    if (g >= num_vertices) throw ContractViolation("goal vertex out of range");
    is_goal_[g] = true;
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const GraphEdgeSpec& e = edges_[i];
    if (e.from >= num_vertices || e.to >= num_vertices) {
      throw ContractViolation("edge " + std::to_string(i) + " references a vertex out of range");
    }
    if (!(e.lazy_cost >= 0) || !(e.true_cost >= 0)) {
      throw ContractViolation("edge " + std::to_string(i) + " has a negative cost");
    }
    if (e.lazy_cost > e.true_cost) {
      throw ContractViolation("edge " + std::to_string(i) + " has lazy cost above true cost");
    }
    out_[e.from].push_back(i);
  }
  if (heuristic_.empty()) heuristic_.assign(num_vertices, 0.0);
  if (heuristic_.size() != num_vertices) throw ContractViolation("heuristic size does not match vertex count");
}

bool ExplicitGraphDomain::is_goal(StatePayload s) const { return s < num_vertices_ && is_goal_[s]; }

Cost ExplicitGraphDomain::heuristic(StatePayload s) const { return heuristic_[s]; }

std::size_t ExplicitGraphDomain::action_count(StatePayload s) const { return out_[s].size(); }

Transition ExplicitGraphDomain::lazy_successor(StatePayload s, ActionId a) const {
  const GraphEdgeSpec& e = edge_for(static_cast<std::uint32_t>(s), a);
  return {e.to, e.lazy_cost};
}

Transition ExplicitGraphDomain::true_evaluate(StatePayload s, ActionId a) const {
  const GraphEdgeSpec& e = edge_for(static_cast<std::uint32_t>(s), a);
  if (e.eval_delay_ms > 0) std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(e.eval_delay_ms));
  return {e.to, e.true_cost};
}

ExplicitGraphDomain ExplicitGraphDomain::without_delay() const {
  std::vector<GraphEdgeSpec> edges = edges_;
  for (auto& e : edges) e.eval_delay_ms = 0;
  return ExplicitGraphDomain(num_vertices_, start_, goals_, std::move(edges), heuristic_);
}

namespace {

double parse_number(const std::string& tok, std::size_t line, const char* what) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || std::isnan(v)) {
    throw ParseError(line, std::string("invalid ") + what + " '" + tok + "'");
  }
  return v;
}

std::uint32_t parse_vertex(const std::string& tok, std::size_t line) {
  const double v = parse_number(tok, line, "vertex id");
  if (v < 0 || v != std::floor(v) || v > 4294967295.0) throw ParseError(line, "invalid vertex id '" + tok + "'");
  return static_cast<std::uint32_t>(v);
}

std::string format_cost(Cost c) {
  if (!is_finite(c)) return "inf";
  char buf[32];
  return std::string(buf, std::to_chars(buf, buf + sizeof(buf), c).ptr);
}

}  // namespace

ExplicitGraphDomain parse_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t n = 0;
  std::uint32_t start = 0;
  std::vector<std::uint32_t> goals;
  std::vector<GraphEdgeSpec> edges;
  std::vector<std::size_t> edge_lines;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);

    if (!have_header) {
      if (tok.size() != 3) throw ParseError(lineno, "expected 'num_vertices start_id goal_id[,goal_id...]'");
      const double nv = parse_number(tok[0], lineno, "vertex count");
      if (nv < 1 || nv != std::floor(nv)) throw ParseError(lineno, "vertex count must be a positive integer");
      n = static_cast<std::size_t>(nv);
      start = parse_vertex(tok[1], lineno);
      std::istringstream gs(tok[2]);
      for (std::string g; std::getline(gs, g, ',');) goals.push_back(parse_vertex(g, lineno));
      if (goals.empty()) throw ParseError(lineno, "no goal vertex");
      if (start >= n) throw ParseError(lineno, "start vertex out of range");
      for (auto g : goals) {
        if (g >= n) throw ParseError(lineno, "goal vertex out of range");
      }
      have_header = true;
      continue;
    }
    if (tok.size() != 5) throw ParseError(lineno, "expected 'from to lazy_cost true_cost eval_delay_ms'");
    GraphEdgeSpec e;
    e.from = parse_vertex(tok[0], lineno);
    e.to = parse_vertex(tok[1], lineno);
    e.lazy_cost = parse_number(tok[2], lineno, "lazy cost");
    e.true_cost = parse_number(tok[3], lineno, "true cost");
    e.eval_delay_ms = parse_number(tok[4], lineno, "delay");
    if (e.from >= n || e.to >= n) throw ParseError(lineno, "vertex out of range");
    if (e.lazy_cost < 0 || e.true_cost < 0 || e.eval_delay_ms < 0) throw ParseError(lineno, "negative value");
    if (e.lazy_cost > e.true_cost) {
      throw ContractViolation("line " + std::to_string(lineno) + ": lazy cost " + tok[2] + " exceeds true cost " +
                              tok[3]);
    }
    edges.push_back(e);
  }
  if (!have_header) throw ParseError(lineno, "missing header line");
  return ExplicitGraphDomain(n, start, std::move(goals), std::move(edges));
}

ExplicitGraphDomain load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file " + path.string());
  return parse_graph(in);
}

std::string format_graph(const ExplicitGraphDomain& graph) {
  std::ostringstream os;
  os << graph.vertex_count() << ' ' << graph.start() << ' ';
  for (std::size_t i = 0; i < graph.goals().size(); ++i) os << (i ? "," : "") << graph.goals()[i];
  os << '\n';
  for (const auto& e : graph.edges()) {
    os << e.from << ' ' << e.to << ' ' << format_cost(e.lazy_cost) << ' ' << format_cost(e.true_cost) << ' '
       << e.eval_delay_ms << '\n';
  }
  return os.str();
}

std::vector<Cost> lazy_distance_to_goal(std::size_t num_vertices, const std::vector<GraphEdgeSpec>& edges,
                                        const std::vector<std::uint32_t>& goals) {
  std::vector<std::vector<std::pair<std::uint32_t, Cost>>> in(num_vertices);
  for (const auto& e : edges) in[e.to].push_back({e.from, e.lazy_cost});
  std::vector<Cost> dist(num_vertices, kInfiniteCost);
  using Item = std::pair<Cost, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto g : goals) {
    dist[g] = 0;
    pq.push({0, g});
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (auto [u, c] : in[v]) {
      if (d + c < dist[u]) {
        dist[u] = d + c;
        pq.push({dist[u], u});
      }
    }
  }
  return dist;
}

ExplicitGraphDomain random_graph(const RandomGraphParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> n_dist(p.min_vertices, p.max_vertices);
  const std::size_t n = n_dist(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> cost_dist(p.min_true_cost, p.max_true_cost);
  std::uniform_real_distribution<double> lazy_factor(p.lazy_low, p.lazy_high);

  std::vector<GraphEdgeSpec> edges;
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = 0; v < n; ++v) {
      if (u == v || unit(rng) >= p.edge_density) continue;
      const Cost base = cost_dist(rng);
      const Cost lazy = base * lazy_factor(rng);
      const bool infeasible = unit(rng) < p.infeasible_fraction;
      edges.push_back({u, v, lazy, infeasible ? kInfiniteCost : base, 0.0});
    }
  }
  const std::uint32_t goal = static_cast<std::uint32_t>(n - 1);
  std::vector<Cost> h;
  if (p.use_heuristic) {
    const double scale = std::uniform_real_distribution<double>(p.heuristic_scale_low, 1.0)(rng);
    h = lazy_distance_to_goal(n, edges, {goal});
    for (auto& x : h) x *= scale;
  }
  return ExplicitGraphDomain(n, 0, {goal}, std::move(edges), std::move(h));
}

}  // namespace mplp
