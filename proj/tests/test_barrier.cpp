#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "oracles.hpp"
#include "toa/barrier.hpp"

using namespace toa;
using std::numbers::pi;

TEST_SUITE_BEGIN("barrier");

namespace {
const UnitsConfig kUnits{};

double barrier_V(const SquareBarrier& b, double x) {
  return (x >= b.start && x <= b.end()) ? b.height : 0.0;
}
}  // namespace

TEST_CASE("zero height transmits perfectly at any momentum") {
  const SquareBarrier flat{0.0, 3.0, 0.0};
  for (double p : {0.3, 1.0, 4.2}) {
    const auto result = transmission(p, flat, kUnits);
    CHECK(result.T == std::complex<double>{1.0, 0.0});
    CHECK(result.R == std::complex<double>{0.0, 0.0});
    CHECK(result.wigner_phase_derivative == 0.0);
  }
}

TEST_CASE("threshold momentum is derived from height and mass") {
  const SquareBarrier barrier{0.5, 2.0, 0.0};
  CHECK(barrier.threshold_momentum(kUnits) ==
        doctest::Approx(1.0).epsilon(1e-15));
  UnitsConfig heavy;
  heavy.mass = 2.0;
  CHECK(barrier.threshold_momentum(heavy) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("transmission exactly at threshold matches the analytic limit") {
  const SquareBarrier barrier{0.5, 2.0, 0.0};
  const double p_V = barrier.threshold_momentum(kUnits);
  // Limit of the matching denominator as p' -> 0: D -> 1 - i p a / 2.
  const std::complex<double> expected =
      std::polar(1.0, -p_V * barrier.width) /
      std::complex<double>{1.0, -p_V * barrier.width / 2.0};
  const auto result = transmission(p_V, barrier, kUnits);
  CHECK(std::abs(result.T - expected) < 1e-12);
}

TEST_CASE("closed form matches the transfer-matrix solution") {
  const SquareBarrier barrier{0.5, 2.0, 0.0};
  const auto V = [&](double x) { return barrier_V(barrier, x); };
  for (double p : {0.2, 0.6, 0.9, 0.999, 1.001, 1.3, 2.0, 3.7}) {
    const auto closed = transmission(p, barrier, kUnits);
    const auto tm = oracles::transfer_matrix(p, V, 0.0, barrier.width, 64,
                                             kUnits.mass);
    CHECK(std::abs(closed.T - tm.T) <= 1e-10 * std::abs(tm.T));
    CHECK(std::abs(closed.R - tm.R) <= 1e-10 * std::max(std::abs(tm.R), 1e-3));
  }
}

TEST_CASE("unitarity holds on both sides of the threshold") {
  const SquareBarrier barrier{0.5, 2.0, 0.0};
  const double p_V = barrier.threshold_momentum(kUnits);
  for (int i = 1; i <= 200; ++i) {
    const double p = 4.0 * p_V * i / 200.0;
    const auto result = transmission(p, barrier, kUnits);
    CHECK(std::norm(result.T) + std::norm(result.R) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(result.T) <= 1.0 + 1e-12);
  }
}

TEST_CASE("transmission is continuous across the threshold") {
  const SquareBarrier barrier{0.5, 2.0, 0.0};
  const double p_V = barrier.threshold_momentum(kUnits);
  const auto at = [&](double p) { return transmission(p, barrier, kUnits).T; };
  const std::complex<double> center = at(p_V);
  // T varies smoothly (slope O(a)), so continuity means: no jump beyond the
  // linear variation when crossing from the series band (inside 1e-8 p_V)
  // to the hyperbolic/oscillatory branches just outside it.
  const double slope =
      std::abs(at(p_V * (1.0 + 1e-4)) - at(p_V * (1.0 - 1e-4))) /
      (2e-4 * p_V);
  for (double eps : {0.9e-8, 1.1e-8, 5e-8}) {
    for (double side : {-1.0, 1.0}) {
      const double p = p_V * (1.0 + side * eps);
      const double jump = std::abs(at(p) - center) - slope * eps * p_V;
      CHECK(jump <= 1e-8 * std::abs(center));
    }
  }
}

TEST_CASE("|T| = 1 exactly at the geometric resonances") {
  const SquareBarrier barrier{0.5, 2.0, 0.0};
  const double p_V = barrier.threshold_momentum(kUnits);
  for (int n : {1, 2, 3}) {
    const double pp = n * pi / barrier.width;
    const double p = std::hypot(p_V, pp);
    const auto result = transmission(p, barrier, kUnits);
    CHECK(std::abs(result.T) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("unwrapped scan phase matches the transfer matrix") {
  const SquareBarrier barrier{0.5, 2.0, 0.0};
  const auto V = [&](double x) { return barrier_V(barrier, x); };
  // 200 points spanning both sides of p_V = 1, offset so no point lands on
  // the threshold itself (where the slab wavenumber vanishes and the
  // transfer matrix is singular).
  std::vector<double> grid;
  for (int i = 1; i <= 200; ++i) grid.push_back(0.013 + 4.0 * i / 200.0);
  const auto scan = transmission_scan(grid, barrier, kUnits);
  std::vector<std::complex<double>> tm_T(grid.size());
  for (size_t i = 0; i < grid.size(); ++i)
    tm_T[i] =
        oracles::transfer_matrix(grid[i], V, 0.0, barrier.width, 64, 1.0).T;
  const auto tm_phase = unwrap_phase(tm_T);
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(scan.T[i]) ==
          doctest::Approx(std::abs(tm_T[i])).epsilon(1e-8));
    CHECK(scan.phase[i] ==
          doctest::Approx(tm_phase[i]).epsilon(1e-8));
  }
}

TEST_CASE("wigner phase derivative matches the analytic derivative") {
  const SquareBarrier barrier{0.5, 2.0, 0.0};
  for (double p : {0.3, 0.7, 0.95, 1.1, 1.9, 3.0}) {
    const double fd = wigner_phase_derivative(p, barrier, kUnits);
    const double analytic = oracles::wigner_phase_derivative_analytic(
        p, barrier.height, barrier.width, kUnits.mass);
    CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
  }
}

TEST_CASE("deep tunneling saturates the phase derivative near -width") {
  // kappa a >> 1: d arg T/dp -> -a + 2/kappa + exponentially small terms.
  const double p_V = 1.0;
  const SquareBarrier barrier{0.5, 8.0, 0.0};
  const double p = 0.2;  // kappa = sqrt(1 - 0.04) ~ 0.98, kappa a ~ 7.8
  const double kappa = std::sqrt(p_V * p_V - p * p);
  const double value = wigner_phase_derivative(p, barrier, kUnits);
  CHECK(value ==
        doctest::Approx(-barrier.width + 2.0 / kappa).epsilon(1e-4));
  CHECK(value < 0.0);
}

TEST_CASE("zero height reduces the far-side amplitude to the free one") {
  const auto packet = gaussian_packet(-10.0, 2.0, 0.1);
  const SquareBarrier flat{0.0, 1.0, 0.0};
  for (double t : {3.0, 5.0, 7.0}) {
    const auto free_amp =
        arrival_amplitude(packet, 2.0, Mover::right, t, kUnits);
    const auto barrier_amp =
        transmitted_arrival_amplitude(packet, 2.0, flat, t, kUnits);
    CHECK(std::abs(free_amp - barrier_amp) <= 1e-10 * std::abs(free_amp));
  }
}

TEST_CASE("far-side preconditions raise domain errors") {
  const auto packet = gaussian_packet(-10.0, 2.0, 0.1);
  const SquareBarrier barrier{0.5, 2.0, 0.0};
  // Detection point inside the barrier.
  CHECK_THROWS_AS((void)transmitted_arrival_amplitude(packet, 1.0, barrier,
                                                      1.0, kUnits),
                  Error);
  // Packet prepared past the barrier start.
  const auto late = gaussian_packet(1.0, 2.0, 0.1);
  CHECK_THROWS_AS((void)transmitted_arrival_amplitude(late, 5.0, barrier, 1.0,
                                                      kUnits),
                  Error);
  // Too much negative-momentum content.
  const auto slow = gaussian_packet(-10.0, 0.4, 0.1);
  CHECK_THROWS_AS((void)transmitted_arrival_amplitude(slow, 5.0, barrier, 1.0,
                                                      kUnits),
                  Error);
}

TEST_CASE("packet at a resonance keeps the free envelope") {
  const SquareBarrier barrier{0.5, 2.0, 0.0};
  const double p_V = barrier.threshold_momentum(kUnits);
  const double p_res = std::hypot(p_V, pi / barrier.width);
  const auto packet = gaussian_packet(-40.0, p_res, 0.005);
  CHECK(transmitted_arrival_probability(packet, barrier, kUnits) ==
        doctest::Approx(1.0).epsilon(1e-3));
  const TimeGrid grid = transmitted_time_window(packet, 5.0, barrier, kUnits);
  const auto dist =
      transmitted_arrival_distribution(packet, 5.0, barrier, grid, kUnits);
  const auto free_dist = arrival_distribution(packet, 5.0, grid, kUnits);
  const double peak = *std::max_element(dist.density.begin(),
                                        dist.density.end());
  const double free_peak = *std::max_element(free_dist.density.begin(),
                                             free_dist.density.end());
  CHECK(peak == doctest::Approx(free_peak).epsilon(1e-3));
}

TEST_CASE("global phase of the packet drops out of the density") {
  const double theta = 1.1;
  const auto gauss = gaussian_packet(-10.0, 2.0, 0.1);
  const auto [lo, hi] = gauss.support();
  // Both on the same tabulation so interpolation error cancels exactly.
  const auto base = oracles::tabulated_copy(gauss, 4096, lo, hi);
  const auto rotated = oracles::tabulated_copy(gauss, 4096, lo, hi, 1.0,
                                               [&](double) { return theta; });
  const SquareBarrier barrier{0.5, 0.5, 0.0};
  const auto a0 =
      transmitted_arrival_amplitude(base, 3.0, barrier, 4.0, kUnits);
  const auto a1 =
      transmitted_arrival_amplitude(rotated, 3.0, barrier, 4.0, kUnits);
  CHECK(std::arg(a1 / a0) == doctest::Approx(theta).epsilon(1e-6));
  CHECK(std::abs(a1) == doctest::Approx(std::abs(a0)).epsilon(1e-9));
}

TEST_CASE("transmitted probability: free limit and x-independence") {
  const auto packet = gaussian_packet(-10.0, 2.0, 0.1);
  const SquareBarrier flat{0.0, 1.0, 0.0};
  CHECK(transmitted_arrival_probability(packet, flat, kUnits) ==
        doctest::Approx(1.0).epsilon(1e-6));

  // Time-integral route at two detection points past the barrier.
  const auto tunneling = gaussian_packet(-30.0, 0.5, 0.1);
  const SquareBarrier barrier{0.5, 2.0, 0.0};
  const auto grid6 = transmitted_time_window(tunneling, 6.0, barrier, kUnits);
  const auto grid9 = transmitted_time_window(tunneling, 9.0, barrier, kUnits);
  const double p6 = transmitted_arrival_distribution(tunneling, 6.0, barrier,
                                                     grid6, kUnits)
                        .arrival_probability;
  const double p9 = transmitted_arrival_distribution(tunneling, 9.0, barrier,
                                                     grid9, kUnits)
                        .arrival_probability;
  CHECK(p6 == doctest::Approx(p9).epsilon(1e-3));
  CHECK(p6 ==
        doctest::Approx(
            transmitted_arrival_probability(tunneling, barrier, kUnits))
            .epsilon(1e-3));
}

TEST_CASE("deep tunneling suppression matches the transfer-matrix scale") {
  const auto packet = gaussian_packet(-30.0, 0.5, 0.1);
  const SquareBarrier barrier{0.5, 4.0, 0.0};
  const auto V = [&](double x) { return barrier_V(barrier, x); };
  const double value =
      transmitted_arrival_probability(packet, barrier, kUnits);
  // Independent route: |T|^2 from the transfer matrix under |psi|^2.
  const double oracle = oracles::simpson(
      [&](double p) {
        return std::norm(oracles::transfer_matrix(p, V, 0.0, barrier.width,
                                                  64, 1.0)
                             .T) *
               packet.abs2(p);
      },
      0.1, 1.3, 4000);
  CHECK(value == doctest::Approx(oracle).epsilon(1e-6));
  // exp(-2 kappa a) scale at the packet centre.
  const double kappa = std::sqrt(1.0 - 0.25);
  const SquareBarrier thicker{0.5, 6.0, 0.0};
  const double ratio =
      transmitted_arrival_probability(packet, thicker, kUnits) / value;
  CHECK(std::log(ratio) ==
        doctest::Approx(-2.0 * kappa * 2.0).epsilon(0.2));
}

TEST_CASE("mean transmitted arrival: free limit and both routes agree") {
  const auto packet = gaussian_packet(-10.0, 2.0, 0.1);
  const SquareBarrier flat{0.0, 1.0, 0.0};
  CHECK(mean_transmitted_arrival(packet, 5.0, flat, kUnits) ==
        doctest::Approx(mean_arrival_time(packet, 5.0, kUnits))
            .epsilon(1e-6));

  const auto tunneling = gaussian_packet(-30.0, 0.5, 0.1);
  const SquareBarrier barrier{0.5, 3.0, 0.0};
  const double phase_route =
      mean_transmitted_arrival(tunneling, 40.0, barrier, kUnits);
  const double moment_route =
      mean_transmitted_arrival_moment_route(tunneling, 40.0, barrier, kUnits);
  CHECK(phase_route == doctest::Approx(moment_route).epsilon(1e-3));
}

TEST_CASE("thin opaque barriers advance, thick ones retard") {
  const auto packet = gaussian_packet(-30.0, 0.5, 0.1);
  const double x = 40.0;
  const double free_mean = mean_arrival_time(packet, x, kUnits);
  const SquareBarrier thin{0.5, 3.0, 0.0};
  const SquareBarrier thick{0.5, 17.0, 0.0};
  CHECK(mean_transmitted_arrival(packet, x, thin, kUnits) < free_mean);
  CHECK(mean_transmitted_arrival(packet, x, thick, kUnits) > free_mean);
}

TEST_CASE("hartman scan: vanishing width leaves the free mean") {
  const auto packet = gaussian_packet(-30.0, 0.5, 0.1);
  const std::vector<double> widths{1e-6, 1e-5};
  const auto scan = hartman_scan(packet, 40.0, 0.5, widths, kUnits);
  // The residual is O(width), amplified by the slow-momentum tail of the
  // packet through the m/p weighting.
  for (const auto& point : scan.points)
    CHECK(std::abs(point.advancement) < 1e-4 * scan.free_mean);
  CHECK(std::abs(scan.points[0].advancement) <
        std::abs(scan.points[1].advancement));
}

TEST_CASE("hartman scan finds exactly one crossover") {
  const auto packet = gaussian_packet(-30.0, 0.5, 0.1);
  std::vector<double> widths;
  for (int k = 0; k < 6; ++k) widths.push_back(3.0 * std::pow(std::sqrt(2.0), k));
  const auto scan = hartman_scan(packet, 40.0, 0.5, widths, kUnits);
  CHECK(scan.sign_changes == 1);
  REQUIRE(scan.crossover_bracket.has_value());
  CHECK(scan.points.front().advancement < 0.0);
  CHECK(scan.points.back().advancement > 0.0);
}

TEST_CASE("shifting packet, barrier and detector together changes nothing") {
  const double delta = 7.3;
  const auto packet = gaussian_packet(-30.0, 0.5, 0.1);
  const auto moved_packet = gaussian_packet(-30.0 + delta, 0.5, 0.1);
  const SquareBarrier barrier{0.5, 3.0, 0.0};
  const SquareBarrier moved_barrier{0.5, 3.0, delta};
  const double mean = mean_transmitted_arrival(packet, 40.0, barrier, kUnits);
  const double moved = mean_transmitted_arrival(moved_packet, 40.0 + delta,
                                                moved_barrier, kUnits);
  CHECK(mean == doctest::Approx(moved).epsilon(1e-12));
}

TEST_CASE("above-threshold packets are retarded by the Wigner delay") {
  // p0 > p_V: no tunneling filter; the positive phase delay dominates.
  const auto packet = gaussian_packet(-30.0, 2.0, 0.1);
  const std::vector<double> widths{1.0, 2.0};
  const auto scan = hartman_scan(packet, 40.0, 0.5, widths, kUnits);
  for (const auto& point : scan.points) {
    CHECK(point.advancement > 0.0);
    // Quadrature oracle: <(m/p) d arg T/dp> over |T psi|^2.
    const auto Vfn = [&](double p) {
      return std::norm(transmission(p, {0.5, point.width, 0.0}, kUnits).T) *
             packet.abs2(p);
    };
    const double weight = oracles::simpson(Vfn, 1.2, 2.8, 2000);
    const double delay =
        oracles::simpson(
            [&](double p) {
              return Vfn(p) / p *
                     oracles::wigner_phase_derivative_analytic(
                         p, 0.5, point.width, 1.0);
            },
            1.2, 2.8, 2000) /
        weight;
    CHECK(point.advancement == doctest::Approx(delay).epsilon(2e-2));
  }
}

TEST_SUITE_END();
