#include "mplp/search.hpp"

#include <algorithm>
#include <cmath>

#include "mplp/errors.hpp"

namespace mplp {

SearchKey key(const StateRecord& state, double weight) {
  return {state.g_val + weight * state.h_val, state.g_val};
}

std::uint32_t edge_base_priority(EdgeId) { return 1; }

LazySearch::LazySearch(const Domain& domain, LazyGraph& graph, double weight)
    : domain_(domain), graph_(graph), weight_(weight) {
  if (!(weight >= 1.0) || !std::isfinite(weight)) throw ConfigError("heuristic weight must be finite and >= 1");
  start_ = graph_.intern_state(domain_.start());
}

StateRecord& LazySearch::touch(StateId s) {
  const std::size_t i = index(s);
  if (i >= records_.size()) {
    const std::size_t n = std::max(i + 1, records_.size() * 2);
    records_.resize(n);
    record_pass_.resize(n, 0);
  }
  StateRecord& r = records_[i];
  if (record_pass_[i] != pass_) {
    record_pass_[i] = pass_;
    r = StateRecord{};
    r.id = s;
    r.h_val = heuristic(s);
  }
  return r;
}

const StateRecord& LazySearch::record(StateId s) { return touch(s); }

Cost LazySearch::heuristic(StateId s) {
  const std::size_t i = index(s);
  if (i >= h_cache_.size()) h_cache_.resize(std::max(i + 1, h_cache_.size() * 2), -1.0);
  if (h_cache_[i] < 0) h_cache_[i] = domain_.heuristic(graph_.payload(s));
  return h_cache_[i];
}

Cost LazySearch::read_cost(EdgeId e) const {
  return view_ == CostView::Underestimate ? graph_.underestimate_cost(e) : graph_.current_cost(e);
}

void LazySearch::begin_pass(CostView view) {
  view_ = view;
  ++pass_;
  ++passes_;
  open_ = {};
  stats_ = {};
  StateRecord& s0 = touch(start_);
  s0.g_val = 0;
  s0.in_open = true;
  open_.push({key(s0, weight_), seq_++, start_});
}

void LazySearch::update_state(StateId s, EdgeId via, Cost via_cost) {
  if (s == start_) return;
  const Cost candidate = touch(graph_.edge(via).key().state).v_val + via_cost;
  StateRecord& r = touch(s);
  if (r.v_val < kInfiniteCost) return;  // expanded this pass; no re-expansion
  if (!(candidate < r.g_val)) return;
  r.g_val = candidate;
  r.parent_edge = via;
  r.parent_cost = via_cost;
  if (r.v_val != r.g_val) {
    r.in_open = true;
    open_.push({key(r, weight_), seq_++, s});
  } else {
    r.in_open = false;
  }
}

void LazySearch::expand(StateId s) {
  StateRecord& r = touch(s);
  r.v_val = r.g_val;
  r.in_open = false;
  ++stats_.expansions;
  ++total_expansions_;

  const StatePayload p = graph_.payload(s);
  const std::size_t n = domain_.action_count(p);
  for (std::size_t a = 0; a < n; ++a) {
    const EdgeKey k{s, ActionId{static_cast<std::uint32_t>(a)}};
    EdgeId e;
    if (auto cached = graph_.find_edge(k)) {
      e = *cached;
      ++stats_.cache_hits;
    } else {
      const Transition t = domain_.lazy_successor(p, k.action);
      const StateId succ = t.successor ? graph_.intern_state(*t.successor) : kNoState;
      const Cost lazy = succ == kNoState ? kInfiniteCost : t.cost;
      e = graph_.cache_lazy_successor(k, succ, lazy);
      if (is_finite(lazy)) graph_.open_push(e, edge_base_priority(e));
      ++stats_.new_edges;
    }
    const StateId succ = graph_.edge(e).successor();
    if (succ == kNoState) continue;
    const Cost c = read_cost(e);
    if (!is_finite(c)) continue;
    update_state(succ, e, c);
  }
}

GoalPath LazySearch::backtrack(StateId goal) {
  GoalPath path;
  path.goal = goal;
  path.goal_g = touch(goal).g_val;
  StateId s = goal;
  while (s != start_) {
    const StateRecord& r = touch(s);
    path.edges.push_back(*r.parent_edge);
    s = graph_.edge(*r.parent_edge).key().state;
  }
  std::reverse(path.edges.begin(), path.edges.end());
  return path;
}

SearchOutcome LazySearch::compute_path(CostView view, std::stop_token stop) {
  begin_pass(view);
  SearchOutcome out;
  while (!open_.empty()) {
    if (stop.stop_requested()) {
      out.kind = SearchOutcome::Kind::Interrupted;
      out.stats = stats_;
      return out;
    }
    const OpenItem top = open_.top();
    StateRecord& r = touch(top.state);
    if (!r.in_open || top.key.secondary != r.g_val) {
      open_.pop();  // stale entry
      continue;
    }
    if (domain_.is_goal(graph_.payload(top.state)) && r.v_val >= r.g_val) {
      out.kind = SearchOutcome::Kind::GoalReached;
      out.path = backtrack(top.state);
      out.stats = stats_;
      return out;
    }
    open_.pop();
    expand(top.state);
  }
  out.kind = SearchOutcome::Kind::Exhausted;
  out.stats = stats_;
  return out;
}

}  // namespace mplp
