// time_domain.hpp - adaptive Dormand-Prince integration of the hierarchy through the pulse.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "diode/steady_state.hpp"

namespace diode {

// SteadyState: stationary drive (long-pulse limit). TimeDomain: adaptive integration through the
// pulse. Pulse: the same finite pulse propagated in closed form, emission counted to infinity.
enum class SolverMode { SteadyState, TimeDomain, Pulse };

inline const char* to_string(SolverMode m) {
  switch (m) {
    case SolverMode::SteadyState: return "steady";
    case SolverMode::TimeDomain: return "time";
    case SolverMode::Pulse: return "pulse";
  }
  return "steady";
}

template <typename Real = double>
struct SolverConfig {
  SolverMode mode{SolverMode::SteadyState};
  Real rel_tol{Real(1e-8)};
  Real abs_tol{Real(1e-10)};
  Real settle_margin{Real(0.25)};
  Real tail_time{0};           // integrate this long past the pulse end (in 1/gamma units of time)
  int samples{101};            // uniformly spaced output samples over [start, end]
  long max_steps{20'000'000};

  void validate() const {
    if (!(rel_tol > Real(0)) || !(abs_tol > Real(0))) throw ValidationError("solver tolerances must be positive");
    if (!(settle_margin > Real(0) && settle_margin <= Real(0.5)))
      throw ValidationError("settle_margin must lie in (0, 0.5]");
    if (!(tail_time >= Real(0))) throw ValidationError("tail_time must be nonnegative");
    if (samples < 2) throw ValidationError("at least two output samples are required");
    if (max_steps < 1) throw ValidationError("max_steps must be positive");
  }
};

class StepFailure : public std::runtime_error {
 public:
  explicit StepFailure(double time)
      : std::runtime_error("integrator could not meet tolerance at t = " + std::to_string(time)), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

template <typename Real = double>
struct TimeSeries {
  std::vector<Real> times;
  std::vector<HierarchyState<Real>> states;
  HierarchyState<Real> integrated;        // integral of every element over [start, end]
  HierarchyState<Real> integrated_pulse;  // integral over [start, pulse duration]
  Real start_time{0};  // earlier than 0 when a retarded envelope reaches the right atom first
  Real end_time{0};
  long steps{0};
};

namespace detail {

inline constexpr double kDP_c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1, 1};
inline constexpr double kDP_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double kDP_b[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
inline constexpr double kDP_bstar[7] = {5179.0 / 57600,    0,          7571.0 / 16695, 393.0 / 640,
                                        -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

template <typename Real>
void require_static(const LevelSystem<Real>& sys) {
  if (!sys.frame_applied) throw std::logic_error("time-independent level operators require the rotating frame");
  for (const auto& e : sys.entries)
    if (e.frequency != 0) throw std::logic_error("level operator keeps an explicit time dependence");
}

/// Element values before the pulse arrives: <p|O|q> = delta_pq <g|O|g>.
template <typename Real>
HierarchyState<Real> ground_state(int n_max) {
  HierarchyState<Real> s(n_max);
  for (int p = 0; p <= n_max; ++p) {
    s.at(p, p, Op::Z1) = Real(-1);
    s.at(p, p, Op::Z2) = Real(-1);
    s.at(p, p, Op::Z1Z2) = Real(1);
  }
  return s;
}

}  // namespace detail

template <typename Real>
TimeSeries<Real> solve_time_domain(const Hierarchy<Real>& h, const SolverConfig<Real>& config = {}) {
  config.validate();
  using VC = VectorXc<Real>;
  using C = Complex<Real>;

  const int L = static_cast<int>(h.levels.size());
  std::vector<LevelOperators<Real>> ops;
  std::vector<Eigen::Index> offset(L + 1, 0);
  for (int s = 0; s < L; ++s) {
    detail::require_static(h.levels[s]);
    ops.push_back(h.levels[s].operators(Real(0)));
    offset[s + 1] = offset[s] + h.levels[s].size();
  }
  const Eigen::Index n = offset[L];

  const Real T = h.pulse.duration();
  const Real end = T + config.tail_time;
  const Real mu = L > 0 ? h.levels[0].mu : Real(0);
  const Real start = -std::abs(mu);

  std::vector<Real> events;
  for (int r = -1; r <= 1; ++r)
    for (Real edge : {Real(0), T}) {
      const Real t = edge - static_cast<Real>(r) * mu;
      if (t > start && t < end) events.push_back(t);
    }
  const auto sample_time = [&](std::size_t k) {
    return start + (end - start) * static_cast<Real>(k) / static_cast<Real>(config.samples - 1);
  };
  for (int k = 1; k < config.samples; ++k) events.push_back(sample_time(static_cast<std::size_t>(k)));
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end(),
                           [&](Real a, Real b) { return std::abs(a - b) <= Real(1e-12) * std::max(Real(1), end); }),
               events.end());
  events.back() = end;

  // y = [x; integral of x]
  const HierarchyState<Real> init = detail::ground_state<Real>(h.n_max);
  VC y = VC::Zero(2 * n);
  for (int s = 0; s < L; ++s) y.segment(offset[s], h.levels[s].size()) = detail::gather(init, h.levels[s].unknowns);

  std::vector<std::vector<C>> env(L);
  auto set_envelopes = [&](Real t) {
    for (int s = 0; s < L; ++s) {
      env[s].clear();
      for (const auto& g : ops[s].couplings) env[s].push_back(h.levels[s].envelope_factor(g, t));
    }
  };
  auto rhs = [&](const VC& v, VC& dv) {
    for (int s = 0; s < L; ++s) {
      const auto x = v.segment(offset[s], h.levels[s].size());
      auto dx = dv.segment(offset[s], h.levels[s].size());
      dx.noalias() = ops[s].same * x;
      dx.noalias() += ops[s].same_conj * x.conjugate();
      dx += ops[s].source;
      if (s > 0) {
        const auto lower = v.segment(offset[s - 1], h.levels[s - 1].size());
        for (std::size_t g = 0; g < ops[s].couplings.size(); ++g) {
          if (env[s][g] == C()) continue;
          const auto& cg = ops[s].couplings[g];
          dx += env[s][g] * (cg.lower * lower + cg.lower_conj * lower.conjugate() + cg.constant);
        }
      } else {
        for (std::size_t g = 0; g < ops[s].couplings.size(); ++g) dx += env[s][g] * ops[s].couplings[g].constant;
      }
    }
    dv.tail(n) = v.head(n);
  };

  auto record = [&](TimeSeries<Real>& out, Real t, const VC& v) {
    HierarchyState<Real> st(h.n_max);
    for (int s = 0; s < L; ++s) detail::scatter(st, h.levels[s].unknowns, VC(v.segment(offset[s], h.levels[s].size())));
    out.times.push_back(t);
    out.states.push_back(std::move(st));
  };

  TimeSeries<Real> out;
  out.start_time = start;
  out.end_time = end;
  record(out, start, y);
  std::size_t next_sample = 1;
  const auto is_sample = [&](Real t) {
    return next_sample < static_cast<std::size_t>(config.samples) &&
           std::abs(t - sample_time(next_sample)) <= Real(1e-9) * std::max(Real(1), end);
  };

  std::array<VC, 7> k;
  for (auto& kk : k) kk.resize(2 * n);
  VC stage(2 * n), y5(2 * n), err(2 * n);

  VC pulse_integral = VC::Zero(n);
  Real t = start;
  Real hstep = std::min(Real(0.01) / h.params.gamma, end - start);
  std::size_t ev = 0;
  while (ev < events.size()) {
    const Real target = events[ev];
    if (out.steps >= config.max_steps) throw StepFailure(static_cast<double>(t));
    bool hit = false;
    Real step = hstep;
    if (t + step >= target - Real(1e-14) * std::max(Real(1), target)) {
      step = target - t;
      hit = true;
    }
    set_envelopes(t + step / Real(2));

    rhs(y, k[0]);
    for (int i = 1; i < 7; ++i) {
      stage = y;
      for (int j = 0; j < i; ++j)
        if (detail::kDP_a[i][j] != 0.0) stage += (step * static_cast<Real>(detail::kDP_a[i][j])) * k[j];
      rhs(stage, k[i]);
    }
    y5 = y;
    err.setZero();
    for (int i = 0; i < 7; ++i) {
      if (detail::kDP_b[i] != 0.0) y5 += (step * static_cast<Real>(detail::kDP_b[i])) * k[i];
      err += (step * static_cast<Real>(detail::kDP_b[i] - detail::kDP_bstar[i])) * k[i];
    }
    Real norm = 0;
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
      const Real scale = config.abs_tol + config.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
      norm = std::max(norm, std::abs(err(i)) / scale);
    }
    if (!std::isfinite(static_cast<double>(norm))) throw StepFailure(static_cast<double>(t));

    const Real factor = norm == Real(0) ? Real(5) : std::clamp(Real(0.9) * std::pow(norm, Real(-0.2)), Real(0.2), Real(5));
    ++out.steps;
    if (norm <= Real(1)) {
      t = hit ? target : t + step;
      y = y5;
      if (hit) {
        if (std::abs(t - T) <= Real(1e-12) * std::max(Real(1), T)) pulse_integral = y.tail(n);
        if (is_sample(t)) {
          record(out, t, y);
          ++next_sample;
        }
        ++ev;
        hstep = std::max(hstep, step * factor);
      } else {
        hstep = step * factor;
      }
    } else {
      hstep = step * factor;
      if (hstep <= Real(1e-13) * std::max(Real(1), t)) throw StepFailure(static_cast<double>(t));
    }
  }

  out.integrated = HierarchyState<Real>(h.n_max);
  out.integrated_pulse = HierarchyState<Real>(h.n_max);
  for (int s = 0; s < L; ++s) {
    detail::scatter(out.integrated, h.levels[s].unknowns, VC(y.segment(n + offset[s], h.levels[s].size())));
    detail::scatter(out.integrated_pulse, h.levels[s].unknowns, VC(pulse_integral.segment(offset[s], h.levels[s].size())));
  }
  return out;
}

/// Largest element-wise deviation between the sampled states inside [settle_margin T, T] and a steady state.
template <typename Real>
Real late_window_deviation(const TimeSeries<Real>& series, const HierarchyState<Real>& steady, Real pulse_duration,
                           Real settle_margin) {
  Real worst = 0;
  bool any = false;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const Real t = series.times[i];
    if (t < settle_margin * pulse_duration || t > pulse_duration) continue;
    any = true;
    const auto& a = series.states[i].raw();
    const auto& b = steady.raw();
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  }
  if (!any) throw ValidationError("no samples fall inside the late-time window");
  return worst;
}

}  // namespace diode
