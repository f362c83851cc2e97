#include "toa/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "toa/numerics.hpp"
#include "toa/wkb.hpp"

namespace toa {

namespace {

// Yoshida composition of three leapfrog substeps: fourth order, symplectic.
constexpr double kCubeRootTwo = 1.2599210498948731648;
constexpr double kW1 = 1.0 / (2.0 - kCubeRootTwo);
constexpr double kW0 = -kCubeRootTwo / (2.0 - kCubeRootTwo);

void leapfrog(PhaseSpacePoint& s, const SmoothPotential& potential, double h,
              double mass) {
  s.p += 0.5 * h * -potential.derivative_at(s.q);
  s.q += h * s.p / mass;
  s.p += 0.5 * h * -potential.derivative_at(s.q);
}

void yoshida4(PhaseSpacePoint& s, const SmoothPotential& potential, double h,
              double mass) {
  leapfrog(s, potential, kW1 * h, mass);
  leapfrog(s, potential, kW0 * h, mass);
  leapfrog(s, potential, kW1 * h, mass);
}

double hamiltonian(const PhaseSpacePoint& s, const SmoothPotential& potential,
                   double mass) {
  return s.p * s.p / (2.0 * mass) + potential(s.q);
}

// Root of the cubic Hermite interpolant for q(t) - x on one step.
double refine_crossing(double t0, double t1, const PhaseSpacePoint& a,
                       const PhaseSpacePoint& b, double x, double mass) {
  const double h = t1 - t0;
  const double va = a.p / mass, vb = b.p / mass;
  const auto hermite = [&](double t) {
    const double u = (t - t0) / h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * a.q + (u3 - 2 * u2 + u) * h * va +
           (-2 * u3 + 3 * u2) * b.q + (u3 - u2) * h * vb - x;
  };
  return find_root(hermite, t0, t1, 1e-13 * std::max(1.0, std::abs(t1)));
}

double auto_step(const PhaseSpacePoint& start,
                 const SmoothPotential& potential, double mass) {
  const double speed = std::max(std::abs(start.p) / mass, 1e-12);
  return 0.01 * potential.feature_width / speed;
}

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() {  // (0, 1)
    return (next() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }
};

// Box-Muller on top of SplitMix64: bit-reproducible across toolchains,
// unlike std::normal_distribution.
double standard_normal(SplitMix64& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

double Trajectory::position(double time) const {
  if (t.empty()) fail(ErrorKind::domain, "empty trajectory");
  if (time <= t.front()) return state.front().q;
  if (time >= t.back()) return state.back().q;
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const size_t i = static_cast<size_t>(it - t.begin());
  const double t0 = t[i - 1], t1 = t[i];
  const double h = t1 - t0;
  const double u = (time - t0) / h;
  const double u2 = u * u, u3 = u2 * u;
  const double va = state[i - 1].p / mass;
  const double vb = state[i].p / mass;
  return (2 * u3 - 3 * u2 + 1) * state[i - 1].q + (u3 - 2 * u2 + u) * h * va +
         (-2 * u3 + 3 * u2) * state[i].q + (u3 - u2) * h * vb;
}

Trajectory integrate(PhaseSpacePoint start, const SmoothPotential& potential,
                     double t_end, double step, const UnitsConfig& units,
                     double drift_limit) {
  units.validate();
  if (!(step > 0.0))
    fail(ErrorKind::invalid_parameter, "integration step must be > 0");
  if (!(t_end > 0.0))
    fail(ErrorKind::invalid_parameter, "t_end must be > 0");
  const double mass = units.mass;
  const int steps = static_cast<int>(std::ceil(t_end / step));
  Trajectory traj;
  traj.t.reserve(steps + 1);
  traj.state.reserve(steps + 1);
  traj.mass = mass;
  traj.energy = hamiltonian(start, potential, mass);
  const double scale = std::max(std::abs(traj.energy), 1e-30);
  PhaseSpacePoint s = start;
  traj.t.push_back(0.0);
  traj.state.push_back(s);
  for (int i = 1; i <= steps; ++i) {
    const double h = std::min(step, t_end - traj.t.back());
    yoshida4(s, potential, h, mass);
    traj.t.push_back(traj.t.back() + h);
    traj.state.push_back(s);
    const double drift =
        std::abs(hamiltonian(s, potential, mass) - traj.energy) / scale;
    traj.energy_drift = std::max(traj.energy_drift, drift);
  }
  if (traj.energy_drift > drift_limit)
    fail(ErrorKind::integration,
         "energy drift " + std::to_string(traj.energy_drift) +
             " exceeds the bound " + std::to_string(drift_limit) +
             "; reduce the step");
  return traj;
}

std::optional<double> arrival_time_trajectory(PhaseSpacePoint start,
                                              const SmoothPotential& potential,
                                              double x,
                                              const UnitsConfig& units,
                                              const TrajectoryOptions& opts) {
  units.validate();
  const double mass = units.mass;
  if (start.q == x) return 0.0;
  // Energy precheck: the path from q to x must be classically allowed.
  const double energy = hamiltonian(start, potential, mass);
  if (energy <= potential.max_on(std::min(start.q, x), std::max(start.q, x)))
    return std::nullopt;
  // Moving away from x and no force to turn around: never arrives.
  const bool needs_right = x > start.q;
  if (needs_right != (start.p > 0.0)) return std::nullopt;

  const double step = opts.step > 0.0 ? opts.step
                                      : auto_step(start, potential, mass);
  const double free_estimate =
      std::abs(mass * (x - start.q) / std::max(std::abs(start.p), 1e-12));
  const double horizon =
      opts.horizon > 0.0 ? opts.horizon : 8.0 * free_estimate + 16.0 * step;
  const double scale = std::max(std::abs(energy), 1e-30);

  PhaseSpacePoint prev = start;
  double t_prev = 0.0;
  while (t_prev < horizon) {
    PhaseSpacePoint next = prev;
    yoshida4(next, potential, step, mass);
    const double t_next = t_prev + step;
    if ((prev.q - x) * (next.q - x) <= 0.0 && next.q != prev.q) {
      const double drift =
          std::abs(hamiltonian(next, potential, mass) - energy) / scale;
      if (drift > opts.drift_limit)
        fail(ErrorKind::integration,
             "energy drift " + std::to_string(drift) +
                 " exceeds the bound; reduce the step");
      return refine_crossing(t_prev, t_next, prev, next, x, mass);
    }
    prev = next;
    t_prev = t_next;
  }
  return std::nullopt;
}

double arrival_time_hj(double E, const SmoothPotential& potential, double q0,
                       double x, const UnitsConfig& units, int points) {
  units.validate();
  const double v_max = potential.max_on(std::min(q0, x), std::max(q0, x));
  if (!(E > v_max))
    fail(ErrorKind::turning_point,
         "E does not exceed max V on the path; no classical arrival");
  return classical_time_integral(E, potential, q0, x, units, points);
}

EnsembleMean ensemble_mean_arrival(const MomentumWavePacket& packet,
                                   const SmoothPotential& potential, double x,
                                   int samples, std::uint64_t seed,
                                   const UnitsConfig& units,
                                   const TrajectoryOptions& opts) {
  units.validate();
  if (samples < 1000)
    fail(ErrorKind::invalid_parameter, "ensemble needs >= 1000 samples");
  const auto* g = packet.gaussian_params();
  if (!g)
    fail(ErrorKind::invalid_parameter,
         "ensemble sampling requires a gaussian packet");
  const double q0 = g->q0;

  std::vector<double> times(samples);
  std::vector<char> arrived(samples, 0);
  parallel_for(samples, 0, [&](int i) {
    // Independent stream per draw: reduction order cannot matter.
    SplitMix64 rng{seed ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t(i) + 1))};
    const double p = g->p0 + g->sigma_p * standard_normal(rng);
    const auto t =
        arrival_time_trajectory({q0, p}, potential, x, units, opts);
    if (t) {
      times[i] = *t;
      arrived[i] = 1;
    }
  });

  std::vector<double> kept;
  kept.reserve(samples);
  for (int i = 0; i < samples; ++i)
    if (arrived[i]) kept.push_back(times[i]);
  EnsembleMean out;
  out.samples_used = static_cast<int>(kept.size());
  out.excluded_fraction =
      1.0 - static_cast<double>(kept.size()) / static_cast<double>(samples);
  if (kept.empty())
    fail(ErrorKind::degenerate_ensemble, "every ensemble draw failed to arrive");
  const double n = static_cast<double>(kept.size());
  out.mean = pairwise_sum(kept) / n;
  std::vector<double> sq(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    const double d = kept[i] - out.mean;
    sq[i] = d * d;
  }
  const double variance = kept.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
  out.standard_error = std::sqrt(variance / n);
  return out;
}

}  // namespace toa
