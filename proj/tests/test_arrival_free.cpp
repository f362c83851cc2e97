#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "oracles.hpp"
#include "toa/arrival_free.hpp"

using namespace toa;

TEST_SUITE_BEGIN("arrival_free");

namespace {
const UnitsConfig kUnits{};
}

TEST_CASE("left channel vanishes for a packet supported on p > 0") {
  std::vector<double> grid{0.5, 1.0, 1.5, 2.0};
  std::vector<std::complex<double>> amp{{0.3, 0.0}, {1.0, 0.1},
                                        {0.6, -0.2}, {0.1, 0.0}};
  const auto packet = MomentumWavePacket::tabulated(grid, amp);
  for (double t : {-2.0, 0.0, 3.0})
    CHECK(arrival_amplitude(packet, 1.0, Mover::left, t, kUnits) ==
          std::complex<double>{0.0, 0.0});
}

TEST_CASE("density peaks within one grid step of the classical time") {
  const auto packet = gaussian_packet(-10.0, 2.0, 0.2);
  const TimeGrid grid = default_time_window(packet, 0.0, kUnits, 10.0, 501);
  const auto dist = arrival_distribution(packet, 0.0, grid, kUnits);
  const auto peak = std::max_element(dist.density.begin(), dist.density.end());
  const double t_peak = grid.at(int(peak - dist.density.begin()));
  // The true mode sits ~0.09 late of m(x-q0)/p0 = 5: the packet keeps
  // spreading while it crosses, which skews the density towards late times.
  CHECK(std::abs(t_peak - 5.0) <= grid.dt() + 1e-12);
}

TEST_CASE("translation covariance of the amplitude") {
  const double delta = 3.7;
  const auto packet = gaussian_packet(-10.0, 2.0, 0.1);
  const auto shifted = gaussian_packet(-10.0 + delta, 2.0, 0.1);
  for (double t : {2.0, 5.0, 6.5}) {
    const auto a = arrival_amplitude(packet, 0.0, Mover::right, t, kUnits);
    const auto b =
        arrival_amplitude(shifted, 0.0 + delta, Mover::right, t, kUnits);
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
  }
}

TEST_CASE("translation covariance of the whole distribution") {
  const double delta = -2.5;
  const auto packet = gaussian_packet(-10.0, 2.0, 0.1);
  const auto shifted = gaussian_packet(-10.0 + delta, 2.0, 0.1);
  const TimeGrid grid = default_time_window(packet, 0.0, kUnits);
  const auto base = arrival_distribution(packet, 0.0, grid, kUnits);
  const auto moved = arrival_distribution(shifted, delta, grid, kUnits);
  CHECK(moved.mean_time == doctest::Approx(base.mean_time).epsilon(1e-10));
  for (size_t i = 0; i < base.density.size(); i += 100)
    CHECK(moved.density[i] ==
          doctest::Approx(base.density[i]).epsilon(1e-8));
}

TEST_CASE("every normalised packet surely arrives") {
  const double params[][3] = {
      {-10.0, 2.0, 0.1}, {-6.0, 1.0, 0.15}, {-15.0, 3.0, 0.4}};
  for (const auto& [q0, p0, sigma] : params) {
    const auto packet = gaussian_packet(q0, p0, sigma);
    for (double x : {0.0, 2.0}) {
      CHECK(arrival_probability(packet, x, kUnits) ==
            doctest::Approx(1.0).epsilon(1e-3));
    }
  }
}

TEST_CASE("arrival probability is quadratic in the amplitude scale") {
  const auto base = gaussian_packet(-10.0, 2.0, 0.1);
  const auto [lo, hi] = base.support();
  const auto half =
      oracles::tabulated_copy(base, 2048, lo, hi, 1.0 / std::sqrt(2.0));
  CHECK(arrival_probability(half, 0.0, kUnits) ==
        doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("split packet divides evenly between the channels") {
  const auto packet = gaussian_packet(0.0, 0.0, 1.0);
  TimeGrid grid;
  grid.t_min = -40.0;
  grid.t_max = 40.0;
  grid.count = 4001;
  const auto channels = channel_time_integrals(packet, 0.0, grid, kUnits);
  CHECK(channels.right > 0.0);
  CHECK(channels.right / channels.total() ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("packet starting at the detector has zero mean arrival time") {
  const auto packet = gaussian_packet(0.0, 2.0, 0.2);
  const double mean = mean_arrival_time(packet, 0.0, kUnits);
  CHECK(std::abs(mean) <= 1e-3 * (kUnits.mass / 2.0));
}

TEST_CASE("mean arrival time matches the classical-average quadrature") {
  const auto packet = gaussian_packet(-10.0, 2.0, 0.1);
  const double mean = mean_arrival_time(packet, 0.0, kUnits);
  const double expected = oracles::gaussian_expectation(
      [](double p) { return 10.0 / p; }, 2.0, 0.1);
  CHECK(expected == doctest::Approx(5.0125949).epsilon(1e-6));
  CHECK(mean == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("doubling the grid density moves the mean by less than 1e-6") {
  const auto packet = gaussian_packet(-10.0, 2.0, 0.1);
  const TimeGrid grid = default_time_window(packet, 0.0, kUnits);
  TimeGrid fine = grid;
  fine.count = 2 * grid.count - 1;
  const double coarse_mean =
      arrival_distribution(packet, 0.0, grid, kUnits).mean_time;
  const double fine_mean =
      arrival_distribution(packet, 0.0, fine, kUnits).mean_time;
  CHECK(std::abs(coarse_mean - fine_mean) < 1e-6);
}

TEST_CASE("time integral equals the momentum-side identity") {
  // Both sides computed independently: time route vs |psi|^2 quadrature.
  const auto packet = gaussian_packet(-8.0, 1.5, 0.12);
  const double time_route = arrival_probability(packet, 0.0, kUnits);
  const double momentum_route = oracles::simpson(
      [&](double p) { return packet.abs2(p); }, 1.5 - 8 * 0.12, 1.5 + 8 * 0.12,
      4000);
  CHECK(time_route == doctest::Approx(momentum_route).epsilon(1e-3));
}

TEST_CASE("normalised density integrates to one and is non-negative") {
  const auto packet = gaussian_packet(-10.0, 2.0, 0.1);
  const TimeGrid grid = default_time_window(packet, 0.0, kUnits);
  const auto dist = arrival_distribution(packet, 0.0, grid, kUnits);
  for (double d : dist.density) CHECK(d >= 0.0);
  CHECK(trapezoid(dist.density, grid.dt()) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("phase-derivative route agrees with the first moment") {
  const auto packet = gaussian_packet(-10.0, 2.0, 0.1);
  const double moment = mean_arrival_time(packet, 0.0, kUnits);
  const double phase = mean_arrival_time_phase_route(packet, 0.0, kUnits);
  CHECK(moment == doctest::Approx(phase).epsilon(1e-3));
}

TEST_CASE("multiplying by exp(+i E tau) delays the mean by tau") {
  const double tau = 0.7;
  const auto base = gaussian_packet(-10.0, 2.0, 0.1);
  const auto [lo, hi] = base.support();
  const auto shifted = oracles::tabulated_copy(
      base, 4096, lo, hi, 1.0, [&](double p) { return 0.5 * p * p * tau; });
  const double mean_base = mean_arrival_time(base, 0.0, kUnits);
  const double mean_shifted = mean_arrival_time(shifted, 0.0, kUnits);
  CHECK(mean_shifted - mean_base == doctest::Approx(tau).epsilon(1e-3));
}

TEST_CASE("povm ladder is monotone and saturates at one") {
  const auto packet = gaussian_packet(-10.0, 2.0, 0.1);
  const PacketMoments m = packet_moments(packet);
  const double t_cl = 5.0;
  const double sigma_t = 1.0 * 10.0 * m.sigma_p / 4.0 + 1.0 / (2.0 * 0.1);
  std::vector<double> ladder;
  for (double f : {0.1, 0.3, 0.6, 0.9, 1.0, 1.2, 1.6, 2.0})
    ladder.push_back(f * (t_cl + 10.0 * sigma_t));
  const auto values =
      povm_completeness_ladder(packet, 0.0, ladder, kUnits);
  for (size_t i = 1; i < values.size(); ++i)
    CHECK(values[i] >= values[i - 1]);
  for (double v : values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-3);
  }
  CHECK(values.back() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("povm completeness at T_half = 0 is zero") {
  const auto packet = gaussian_packet(-10.0, 2.0, 0.1);
  CHECK(povm_completeness(packet, 0.0, 0.0, kUnits) == 0.0);
}

TEST_CASE("time eigenstates are not orthogonal") {
  const double t = 2.0, t_prime = 2.5, damping = 1e-3;
  const auto overlap = time_eigenstate_overlap(t, t_prime, damping);
  CHECK(std::abs(overlap) > 0.0);
  // Regularised closed form: |overlap| = 1 / (2 pi hypot(damping, dt)).
  const double expected =
      1.0 / (2.0 * std::numbers::pi * std::hypot(damping, t_prime - t));
  CHECK(std::abs(overlap) == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("auto window refuses slow packets") {
  const auto packet = gaussian_packet(0.0, 0.1, 0.2);
  CHECK_THROWS_AS((void)default_time_window(packet, 0.0, kUnits), Error);
}

TEST_SUITE_END();
