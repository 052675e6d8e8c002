#include "mplp/planners.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <functional>
#include <mutex>
#include <queue>
#include <stop_token>
#include <thread>
#include <unordered_map>

#include "mplp/errors.hpp"
#include "mplp/evaluator.hpp"
#include "mplp/lazy_graph.hpp"
#include "mplp/search.hpp"

namespace mplp {

namespace {

using Clock = std::chrono::steady_clock;

Clock::time_point deadline_after(Clock::time_point t0, double seconds) {
  if (!(seconds < 1e9)) return Clock::time_point::max();
  return t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

PlanResult trivial_solution(const Domain& domain, Clock::time_point t0) {
  PlanResult r;
  r.outcome = PlanOutcome::Solved;
  r.path = {domain.start()};
  r.true_cost = 0;
  r.stats.fully_evaluated = true;
  r.stats.wall_time_s = seconds_since(t0);
  return r;
}

/// Requests stop on `target` once `deadline` passes.
class DeadlineTimer {
 public:
  DeadlineTimer(Clock::time_point deadline, std::stop_source target) {
    if (deadline == Clock::time_point::max()) return;
    thread_ = std::jthread([deadline, target](std::stop_token st) mutable {
      std::mutex m;
      std::condition_variable_any cv;
      std::unique_lock lock(m);
      cv.wait_until(lock, st, deadline, [] { return false; });
      if (!st.stop_requested()) target.request_stop();
    });
  }

 private:
  std::jthread thread_;
};

void fill_lifecycle_stats(const LazyGraph& graph, PlanStats& stats) {
  std::uint32_t max_writes = 0;
  for (std::size_t i = 0; i < graph.edge_count(); ++i) {
    max_writes = std::max(max_writes, graph.edge(EdgeId{static_cast<std::uint32_t>(i)}).true_cost_writes());
  }
  const LifecycleCounts c = graph.counts();
  stats.max_evaluations_per_edge = max_writes;
  stats.lifecycle_consistent = graph.lifecycle_consistent();
  stats.fully_evaluated = c.open == 0 && c.eval == 0;
  stats.priority_inversions = graph.priority_inversions();
  stats.edges_discovered = c.pushed;
}

void fill_path(const LazyGraph& graph, const std::vector<EdgeId>& edges, StatePayload start, PlanResult& r) {
  r.path = {start};
  r.actions.clear();
  for (EdgeId e : edges) {
    const EdgeRecord& rec = graph.edge(e);
    r.actions.push_back(rec.key().action);
    r.path.push_back(graph.payload(rec.successor()));
  }
}

}  // namespace

void validate(const PlannerConfig& c) {
  if (!(c.eps_h >= 1.0) || !std::isfinite(c.eps_h)) throw ConfigError("eps_h must be finite and >= 1");
  if (c.n_threads < 3) throw ConfigError("MPLP needs a thread budget of at least 3");
  if (!(c.kappa >= 1.0)) throw ConfigError("kappa must be >= 1 or inf");
  if (!(c.time_limit_s > 0)) throw ConfigError("time limit must be positive");
}

std::size_t worker_count_for(int n_threads) {
  return static_cast<std::size_t>(std::max(1, n_threads - 3));
}

const char* to_string(PlanOutcome o) {
  switch (o) {
    case PlanOutcome::Solved: return "Solved";
    case PlanOutcome::NoPath: return "NoPath";
    case PlanOutcome::Timeout: return "Timeout";
  }
  return "?";
}

PlanResult plan_mplp(const Domain& domain, const PlannerConfig& config) {
  validate(config);
  const auto t0 = Clock::now();
  const auto deadline = deadline_after(t0, config.time_limit_s);
  if (domain.is_goal(domain.start())) return trivial_solution(domain, t0);

  PlanResult result;
  PlanStats& stats = result.stats;
  LazyGraph graph;
  LazySearch search(domain, graph, config.eps_h);
  PathMonitor monitor(domain, graph, MonitorOptions{config.mode, config.kappa});
  EdgeEvaluator evaluator(domain, graph, worker_count_for(config.n_threads));

  std::stop_source halt;
  const std::stop_callback on_solution(monitor.solution_token(), [&halt] { halt.request_stop(); });
  const std::stop_token stop = halt.get_token();

  bool no_path = false;
  {
    const DeadlineTimer timer(deadline, halt);
    evaluator.start();
    monitor.start();

    std::optional<std::uint64_t> searched_epoch;  // true-cost epoch of the last certifying pass
    std::optional<SearchOutcome> exhausted;        // last certifying pass, if it found no path
    while (!stop.stop_requested() && !evaluator.contract_violation()) {
      const std::uint64_t seen = graph.change_epoch();
      bool proposed = false;

      const std::uint64_t true_epoch = graph.true_change_epoch();
      if (searched_epoch != true_epoch) {
        searched_epoch = true_epoch;
        graph.drain_updates();
        SearchOutcome out = search.compute_path(CostView::Underestimate, stop);
        ++stats.searches;
        if (out.kind == SearchOutcome::Kind::Interrupted) break;
        if (out.reached()) {
          exhausted.reset();
          stats.goal_g_trace.push_back(out.path.goal_g);
          monitor.register_path(out.path.edges, out.path.goal_g, true);
        } else {
          exhausted = std::move(out);
        }
      }

      if (exhausted) {
        // E^update may hold diversification entries only; true-cost changes
        // also move the epoch and force another pass.
        graph.drain_updates();
        if (check_termination_failure(graph, *exhausted) && graph.true_change_epoch() == *searched_epoch) {
          no_path = true;
          break;
        }
      } else if (config.mode == MonitorMode::Diversify) {
        SearchOutcome out = search.compute_path(CostView::Current, stop);
        ++stats.searches;
        if (out.kind == SearchOutcome::Kind::Interrupted) break;
        if (out.reached()) proposed = monitor.register_path(out.path.edges, out.path.goal_g, false);
      }

      if (!proposed && graph.true_change_epoch() == *searched_epoch) graph.wait_for_change(seen, stop, deadline);
    }

    if (config.evaluate_all && monitor.solution()) {
      for (;;) {
        const std::uint64_t seen = graph.change_epoch();
        const LifecycleCounts c = graph.counts();
        if ((c.open == 0 && c.eval == 0) || evaluator.contract_violation()) break;
        if (!graph.wait_for_change(seen, std::stop_token{}, deadline) && Clock::now() >= deadline) break;
      }
    }
    evaluator.stop();
    monitor.stop();
  }

  if (auto violation = evaluator.contract_violation()) throw DomainContractViolation(*violation);

  std::optional<Solution> solution = monitor.solution();
  if (!solution && !no_path) solution = monitor.poll().solution;
  if (solution) {
    result.outcome = PlanOutcome::Solved;
    result.true_cost = solution->true_cost;
    fill_path(graph, solution->path.edges, domain.start(), result);
  } else {
    result.outcome = no_path ? PlanOutcome::NoPath : PlanOutcome::Timeout;
  }

  const EvaluatorStats ev = evaluator.stats();
  stats.edges_evaluated = ev.evaluations;
  stats.evaluation_failures = ev.failures;
  stats.expansions = search.total_expansions();
  stats.paths_registered = monitor.registrations();
  fill_lifecycle_stats(graph, stats);
  stats.wall_time_s = seconds_since(t0);
  return result;
}

namespace {

/// Search node of the sequential baselines, keyed by state payload.
struct Node {
  StatePayload payload = 0;
  Cost g = kInfiniteCost;
  Cost h = -1;
  bool closed = false;
  std::size_t parent = SIZE_MAX;
  ActionId action{};
};

class NodeTable {
 public:
  explicit NodeTable(const Domain& domain) : domain_(domain) {}

  std::size_t get(StatePayload p) {
    auto [it, inserted] = index_.try_emplace(p, nodes_.size());
    if (inserted) {
      Node n;
      n.payload = p;
      nodes_.push_back(n);
    }
    return it->second;
  }
  Node& operator[](std::size_t i) { return nodes_[i]; }
  Cost h(std::size_t i) {
    if (nodes_[i].h < 0) nodes_[i].h = domain_.heuristic(nodes_[i].payload);
    return nodes_[i].h;
  }
  std::size_t size() const { return nodes_.size(); }

  void backtrack(std::size_t goal, PlanResult& r) {
    r.path.clear();
    r.actions.clear();
    for (std::size_t i = goal; i != SIZE_MAX; i = nodes_[i].parent) {
      r.path.push_back(nodes_[i].payload);
      if (nodes_[i].parent != SIZE_MAX) r.actions.push_back(nodes_[i].action);
    }
    std::reverse(r.path.begin(), r.path.end());
    std::reverse(r.actions.begin(), r.actions.end());
  }

 private:
  const Domain& domain_;
  std::unordered_map<StatePayload, std::size_t> index_;
  std::vector<Node> nodes_;
};

struct QueueItem {
  Cost f;
  Cost g;
  std::uint64_t seq;
  std::size_t node;

  bool operator>(const QueueItem& o) const {
    if (f != o.f) return f > o.f;
    if (g != o.g) return g > o.g;
    return seq > o.seq;
  }
};

using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

/// Persistent worker threads running one batch of indexed tasks at a time.
class ForkJoinPool {
 public:
  explicit ForkJoinPool(std::size_t n) {
    threads_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) threads_.emplace_back([this](std::stop_token st) { loop(st); });
  }
  ~ForkJoinPool() {
    for (auto& t : threads_) t.request_stop();
    cv_.notify_all();
  }

  void run(std::size_t tasks, const std::function<void(std::size_t)>& fn) {
    if (tasks == 0) return;
    std::unique_lock lock(mutex_);
    job_ = &fn;
    tasks_ = tasks;
    next_ = 0;
    done_ = 0;
    error_ = nullptr;
    cv_.notify_all();
    done_cv_.wait(lock, [&] { return done_ == tasks_; });
    job_ = nullptr;
    if (error_) std::rethrow_exception(error_);
  }

 private:
  void loop(std::stop_token st) {
    std::unique_lock lock(mutex_);
    for (;;) {
      if (!cv_.wait(lock, st, [&] { return job_ != nullptr && next_ < tasks_; })) return;
      const std::size_t i = next_++;
      const auto* fn = job_;
      lock.unlock();
      std::exception_ptr err;
      try {
        (*fn)(i);
      } catch (...) {
        err = std::current_exception();
      }
      lock.lock();
      if (err && !error_) error_ = err;
      if (++done_ == tasks_) done_cv_.notify_all();
    }
  }

  std::mutex mutex_;
  std::condition_variable_any cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t tasks_ = 0;
  std::size_t next_ = 0;
  std::size_t done_ = 0;
  std::exception_ptr error_;
  std::vector<std::jthread> threads_;
};

/// Weighted A* over true costs. `evaluate` receives the expanded payload and
/// the actions to evaluate and returns their true transitions.
template <class EvaluateBatch>
PlanResult wastar_impl(const Domain& domain, double w, double time_limit_s, EvaluateBatch&& evaluate) {
  if (!(w >= 1.0) || !std::isfinite(w)) throw ConfigError("heuristic weight must be finite and >= 1");
  const auto t0 = Clock::now();
  const auto deadline = deadline_after(t0, time_limit_s);
  PlanResult r;
  NodeTable nodes(domain);
  MinQueue open;
  std::uint64_t seq = 0;

  const std::size_t s0 = nodes.get(domain.start());
  nodes[s0].g = 0;
  open.push({w * nodes.h(s0), 0, seq++, s0});
  r.stats.searches = 1;

  std::vector<ActionId> batch;
  std::vector<std::size_t> targets;
  while (!open.empty()) {
    const QueueItem top = open.top();
    open.pop();
    Node& n = nodes[top.node];
    if (n.closed || top.g != n.g) continue;
    n.closed = true;
    ++r.stats.expansions;
    if (domain.is_goal(n.payload)) {
      r.outcome = PlanOutcome::Solved;
      r.true_cost = n.g;
      nodes.backtrack(top.node, r);
      r.stats.goal_g_trace.push_back(n.g);
      r.stats.wall_time_s = seconds_since(t0);
      return r;
    }
    if (Clock::now() >= deadline) {
      r.outcome = PlanOutcome::Timeout;
      r.stats.wall_time_s = seconds_since(t0);
      return r;
    }

    const StatePayload p = n.payload;
    const std::size_t parent = top.node;
    batch.clear();
    targets.clear();
    const std::size_t actions = domain.action_count(p);
    for (std::size_t a = 0; a < actions; ++a) {
      const Transition lazy = domain.lazy_successor(p, ActionId{static_cast<std::uint32_t>(a)});
      if (!lazy.successor || !is_finite(lazy.cost)) continue;
      const std::size_t succ = nodes.get(*lazy.successor);
      if (nodes[succ].closed) continue;
      batch.push_back(ActionId{static_cast<std::uint32_t>(a)});
      targets.push_back(succ);
    }
    r.stats.edges_discovered += batch.size();
    r.stats.edges_evaluated += batch.size();
    const std::vector<Transition> results = evaluate(p, batch);

    const Cost g = nodes[parent].g;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const Transition& t = results[i];
      if (!t.successor || !is_finite(t.cost)) continue;
      if (*t.successor != nodes[targets[i]].payload) {
        throw SuccessorMismatch("true evaluator disagrees with the lazy successor");
      }
      Node& s = nodes[targets[i]];
      const Cost cand = g + t.cost;
      if (cand < s.g) {
        s.g = cand;
        s.parent = parent;
        s.action = batch[i];
        open.push({cand + w * nodes.h(targets[i]), cand, seq++, targets[i]});
      }
    }
  }
  r.outcome = PlanOutcome::NoPath;
  r.stats.wall_time_s = seconds_since(t0);
  return r;
}

}  // namespace

PlanResult plan_wastar(const Domain& domain, double w, double time_limit_s) {
  return wastar_impl(domain, w, time_limit_s, [&](StatePayload p, const std::vector<ActionId>& actions) {
    std::vector<Transition> out;
    out.reserve(actions.size());
    for (ActionId a : actions) out.push_back(domain.true_evaluate(p, a));
    return out;
  });
}

PlanResult plan_pwastar(const Domain& domain, double w, std::size_t n_workers, double time_limit_s) {
  if (n_workers == 0) throw ConfigError("PWA* needs at least one worker");
  ForkJoinPool pool(n_workers);
  return wastar_impl(domain, w, time_limit_s, [&](StatePayload p, const std::vector<ActionId>& actions) {
    std::vector<Transition> out(actions.size());
    pool.run(actions.size(), [&](std::size_t i) { out[i] = domain.true_evaluate(p, actions[i]); });
    return out;
  });
}

PlanResult plan_lwastar(const Domain& domain, double w, double time_limit_s) {
  if (!(w >= 1.0) || !std::isfinite(w)) throw ConfigError("heuristic weight must be finite and >= 1");
  const auto t0 = Clock::now();
  const auto deadline = deadline_after(t0, time_limit_s);
  PlanResult r;
  r.stats.searches = 1;
  if (domain.is_goal(domain.start())) return trivial_solution(domain, t0);

  // A queue entry proposes `parent --action--> node` at cost g. Unevaluated
  // entries carry the lazy edge cost; popping one evaluates the edge and
  // re-queues the proposal at its true cost.
  struct Candidate {
    std::size_t node;
    std::size_t parent;
    ActionId action;
    Cost g;
    bool evaluated;
  };
  std::vector<Candidate> candidates;
  NodeTable nodes(domain);
  std::vector<Cost> best_true;  // lowest evaluated g proposed per node
  auto node = [&](StatePayload p) {
    const std::size_t i = nodes.get(p);
    if (best_true.size() < nodes.size()) best_true.resize(nodes.size(), kInfiniteCost);
    return i;
  };
  MinQueue open;
  std::uint64_t seq = 0;
  auto push = [&](Candidate c) {
    candidates.push_back(c);
    open.push({c.g + w * nodes.h(c.node), c.g, seq++, candidates.size() - 1});
  };

  const std::size_t s0 = node(domain.start());
  best_true[s0] = 0;
  push({s0, SIZE_MAX, ActionId{0}, 0, true});

  while (!open.empty()) {
    const Candidate c = candidates[open.top().node];
    open.pop();
    if (nodes[c.node].closed) continue;
    if (Clock::now() >= deadline) {
      r.outcome = PlanOutcome::Timeout;
      r.stats.wall_time_s = seconds_since(t0);
      return r;
    }

    if (!c.evaluated) {
      const Transition t = domain.true_evaluate(nodes[c.parent].payload, c.action);
      ++r.stats.edges_evaluated;
      if (!t.successor || !is_finite(t.cost)) continue;
      if (*t.successor != nodes[c.node].payload) {
        throw SuccessorMismatch("true evaluator disagrees with the lazy successor");
      }
      const Cost g = nodes[c.parent].g + t.cost;
      if (g < best_true[c.node]) {
        best_true[c.node] = g;
        push({c.node, c.parent, c.action, g, true});
      }
      continue;
    }
    if (c.g != best_true[c.node]) continue;

    Node& n = nodes[c.node];
    n.closed = true;
    n.g = c.g;
    n.parent = c.parent;
    n.action = c.action;
    ++r.stats.expansions;
    if (domain.is_goal(n.payload)) {
      r.outcome = PlanOutcome::Solved;
      r.true_cost = c.g;
      nodes.backtrack(c.node, r);
      r.stats.goal_g_trace.push_back(c.g);
      r.stats.wall_time_s = seconds_since(t0);
      return r;
    }

    const StatePayload p = n.payload;
    const std::size_t actions = domain.action_count(p);
    for (std::size_t a = 0; a < actions; ++a) {
      const ActionId act{static_cast<std::uint32_t>(a)};
      const Transition lazy = domain.lazy_successor(p, act);
      if (!lazy.successor || !is_finite(lazy.cost)) continue;
      const std::size_t succ = node(*lazy.successor);
      if (nodes[succ].closed) continue;
      const Cost g = c.g + lazy.cost;
      if (!(g < best_true[succ])) continue;
      ++r.stats.edges_discovered;
      push({succ, c.node, act, g, false});
    }
  }
  r.outcome = PlanOutcome::NoPath;
  r.stats.wall_time_s = seconds_since(t0);
  return r;
}

PlanResult plan_lsp(const Domain& domain, double w, double time_limit_s) {
  const auto t0 = Clock::now();
  const auto deadline = deadline_after(t0, time_limit_s);
  if (domain.is_goal(domain.start())) return trivial_solution(domain, t0);

  PlanResult r;
  LazyGraph graph;
  LazySearch search(domain, graph, w);
  for (;;) {
    if (Clock::now() >= deadline) {
      r.outcome = PlanOutcome::Timeout;
      break;
    }
    const SearchOutcome out = search.compute_path(CostView::Underestimate);
    ++r.stats.searches;
    if (!out.reached()) {
      r.outcome = PlanOutcome::NoPath;
      break;
    }
    r.stats.goal_g_trace.push_back(out.path.goal_g);
    bool evaluated_any = false;
    for (EdgeId e : out.path.edges) {
      if (graph.edge(e).status() == EdgeStatus::Closed) continue;
      graph.take_for_evaluation(e);
      const Evaluation ev = evaluate_one(e, domain, graph);
      apply_evaluation(e, ev.true_cost, graph);
      ++r.stats.edges_evaluated;
      evaluated_any = true;
    }
    graph.drain_updates();
    if (!evaluated_any) {
      r.outcome = PlanOutcome::Solved;
      r.true_cost = out.path.goal_g;
      fill_path(graph, out.path.edges, domain.start(), r);
      break;
    }
  }
  r.stats.expansions = search.total_expansions();
  fill_lifecycle_stats(graph, r.stats);
  r.stats.wall_time_s = seconds_since(t0);
  return r;
}

Cost optimal_cost_oracle(const Domain& domain, std::size_t state_cap) {
  if (const auto bound = domain.state_space_bound(); bound && *bound > state_cap) {
    throw GraphTooLarge("state space bound " + std::to_string(*bound) + " exceeds oracle cap " +
                        std::to_string(state_cap));
  }
  std::unordered_map<StatePayload, Cost> dist;
  using Item = std::pair<Cost, StatePayload>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[domain.start()] = 0;
  pq.push({0, domain.start()});
  while (!pq.empty()) {
    const auto [d, s] = pq.top();
    pq.pop();
    if (d > dist[s]) continue;
    if (domain.is_goal(s)) return d;
    const std::size_t actions = domain.action_count(s);
    for (std::size_t a = 0; a < actions; ++a) {
      const Transition t = domain.true_evaluate(s, ActionId{static_cast<std::uint32_t>(a)});
      if (!t.successor || !is_finite(t.cost)) continue;
      auto [it, inserted] = dist.try_emplace(*t.successor, kInfiniteCost);
      if (inserted && dist.size() > state_cap) {
        throw GraphTooLarge("oracle reached more than " + std::to_string(state_cap) + " states");
      }
      if (d + t.cost < it->second) {
        it->second = d + t.cost;
        pq.push({it->second, *t.successor});
      }
    }
  }
  return kInfiniteCost;
}

Cost path_true_cost(const Domain& domain, const std::vector<ActionId>& actions) {
  StatePayload s = domain.start();
  Cost total = 0;
  for (ActionId a : actions) {
    const Transition t = domain.true_evaluate(s, a);
    if (!t.successor || !is_finite(t.cost)) return kInfiniteCost;
    total += t.cost;
    s = *t.successor;
  }
  return total;
}

}  // namespace mplp
