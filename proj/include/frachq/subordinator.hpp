#pragma once

// Bochner-Phillips subordination of a Hamiltonian trajectory s -> Phi_s(A):
//   Phi^(alpha)_t A = int_0^inf f_alpha(t, s) Phi_s(A) ds.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "frachq/error.hpp"
#include "frachq/kernel.hpp"
#include "frachq/kernel_average.hpp"

namespace frachq {

/// A trajectory s -> value for s >= 0. V is double, std::complex<double> or
/// Eigen::MatrixXcd. evaluate must be safe to call concurrently.
template <class V>
struct Trajectory {
  std::function<V(double)> evaluate;
  /// sup_s |traj(s)| (max-norm over entries). Absent: potentially unbounded.
  std::optional<double> bound_hint;
  /// Longest period among the oscillations of the trajectory.
  std::optional<double> period_hint;
};

template <class V>
struct SubordinationResult {
  V value;
  double err_estimate = 0.0;
  std::optional<double> truncation_point;
  /// t was below 1e-12 and the identity Phi_0 was returned.
  bool point_mass = false;
};

/// Result of one grid point of subordinate_series: either a value or the
/// error that stopped it.
template <class V>
struct SeriesEntry {
  double t = 0.0;
  std::optional<SubordinationResult<V>> result;
  std::optional<ErrorCode> error_code;
  std::string error_message;
};

template <class V>
SubordinationResult<V> subordinate(const FractionalOrder& order, double t,
                                   const Trajectory<V>& traj,
                                   const KernelConfig& cfg = {},
                                   std::optional<double> truncate_at = std::nullopt) {
  cfg.validate();
  if (!(t > 0.0)) throw Error(ErrorCode::domain, "subordination time t must be > 0");
  if (!traj.evaluate) throw Error(ErrorCode::domain, "trajectory has no evaluator");

  SubordinationResult<V> out;
  if (order.is_classical()) {
    out.value = traj.evaluate(t);
    return out;
  }
  if (t < 1e-12) {
    out.value = traj.evaluate(0.0);
    out.point_mass = true;
    return out;
  }
  if (!traj.bound_hint && !truncate_at) {
    throw Error(ErrorCode::divergence_risk,
                "trajectory has no bound hint; subordinating an unbounded "
                "trajectory against the heavy stable tail may diverge");
  }
  if (traj.period_hint && !(*traj.period_hint > 0.0)) {
    throw Error(ErrorCode::domain, "period hint must be > 0");
  }

  auto avg = detail::kernel_average(order.alpha(), t, traj.evaluate,
                                    traj.bound_hint.value_or(0.0), traj.period_hint,
                                    cfg, truncate_at);
  out.value = std::move(avg.value);
  out.err_estimate = avg.error;
  out.truncation_point = avg.truncation_point;
  return out;
}

/// Evaluates subordinate at every grid point. Grid points are distributed
/// over `threads` workers; each entry depends only on its own t, so the
/// output does not depend on the thread count.
template <class V>
std::vector<SeriesEntry<V>> subordinate_series(const FractionalOrder& order,
                                               std::span<const double> t_grid,
                                               const Trajectory<V>& traj,
                                               const KernelConfig& cfg = {},
                                               unsigned threads = 1) {
  if (t_grid.empty()) throw Error(ErrorCode::domain, "t grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw Error(ErrorCode::domain, "t grid must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
      throw Error(ErrorCode::domain, "t grid must be strictly ascending");
    }
  }

  std::vector<SeriesEntry<V>> out(t_grid.size());
  auto run = [&](std::size_t i) {
    SeriesEntry<V>& e = out[i];
    e.t = t_grid[i];
    try {
      e.result = subordinate(order, t_grid[i], traj, cfg);
    } catch (const Error& err) {
      e.error_code = err.code();
      e.error_message = err.what();
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, t_grid.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) run(i);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < t_grid.size(); i += threads) run(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

/// Wraps a trajectory so that repeated evaluations at the same s are served
/// from a cache. Useful when evaluate is an expensive matrix evolution and
/// several grid points share quadrature nodes.
template <class V>
Trajectory<V> memoize(Trajectory<V> traj) {
  struct Cache {
    std::mutex mutex;
    std::map<double, V> values;
  };
  auto cache = std::make_shared<Cache>();
  auto inner = std::move(traj.evaluate);
  traj.evaluate = [cache, inner](double s) -> V {
    {
      std::lock_guard lock(cache->mutex);
      auto it = cache->values.find(s);
      if (it != cache->values.end()) return it->second;
    }
    V v = inner(s);
    std::lock_guard lock(cache->mutex);
    cache->values.emplace(s, v);
    return v;
  };
  return traj;
}

}  // namespace frachq
