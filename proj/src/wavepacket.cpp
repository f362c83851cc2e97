#include "toa/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "toa/numerics.hpp"

namespace toa {

namespace {

constexpr double kSupportSigmas = 8.0;

// Exact integral of |linear interpolant|^2 over one cell. The squared
// modulus of a complex-linear function is a quadratic, so Simpson is exact.
double cell_abs2_integral(double pa, double pb, std::complex<double> fa,
                          std::complex<double> fb) {
  const std::complex<double> mid = 0.5 * (fa + fb);
  const double sa = std::norm(fa), sm = std::norm(mid), sb = std::norm(fb);
  return (pb - pa) * (sa + 4.0 * sm + sb) / 6.0;
}

}  // namespace

MomentumWavePacket MomentumWavePacket::gaussian(double q0, double p0,
                                                double sigma_p) {
  if (!(sigma_p > 0.0))
    fail(ErrorKind::invalid_parameter, "gaussian packet requires sigma_p > 0");
  MomentumWavePacket packet;
  packet.kind_ = Kind::gaussian;
  packet.gauss_ = {q0, p0, sigma_p};
  return packet;
}

MomentumWavePacket MomentumWavePacket::tabulated(
    std::vector<double> p, std::vector<std::complex<double>> amp) {
  if (p.size() != amp.size() || p.size() < 2)
    fail(ErrorKind::invalid_parameter,
         "tabulated packet needs >= 2 samples with matching sizes");
  if (!std::is_sorted(p.begin(), p.end()))
    fail(ErrorKind::invalid_parameter,
         "tabulated packet momenta must be ascending");
  MomentumWavePacket packet;
  packet.kind_ = Kind::tabulated;
  packet.tab_p_ = std::move(p);
  packet.tab_amp_ = std::move(amp);
  return packet;
}

std::complex<double> MomentumWavePacket::amplitude(double p) const {
  if (kind_ == Kind::gaussian) {
    const auto& g = gauss_;
    const double d = p - g.p0;
    const double mag =
        std::pow(2.0 * std::numbers::pi * g.sigma_p * g.sigma_p, -0.25) *
        std::exp(-d * d / (4.0 * g.sigma_p * g.sigma_p));
    return std::polar(mag, -p * g.q0);
  }
  if (p < tab_p_.front() || p > tab_p_.back()) return {0.0, 0.0};
  const auto it = std::upper_bound(tab_p_.begin(), tab_p_.end(), p);
  const size_t i = std::min(tab_p_.size() - 1,
                            static_cast<size_t>(it - tab_p_.begin()));
  const size_t i0 = i == 0 ? 0 : i - 1;
  const size_t i1 = std::min(i0 + 1, tab_p_.size() - 1);
  if (i0 == i1) return tab_amp_[i0];
  const double u = (p - tab_p_[i0]) / (tab_p_[i1] - tab_p_[i0]);
  return (1.0 - u) * tab_amp_[i0] + u * tab_amp_[i1];
}

double MomentumWavePacket::abs2(double p) const {
  return std::norm(amplitude(p));
}

std::pair<double, double> MomentumWavePacket::support() const {
  if (kind_ == Kind::gaussian)
    return {gauss_.p0 - kSupportSigmas * gauss_.sigma_p,
            gauss_.p0 + kSupportSigmas * gauss_.sigma_p};
  return {tab_p_.front(), tab_p_.back()};
}

double MomentumWavePacket::phase_derivative(double p) const {
  if (kind_ == Kind::gaussian) return -gauss_.q0;
  // Locally unwrapped slope between the two nearest samples.
  const auto it = std::lower_bound(tab_p_.begin(), tab_p_.end(), p);
  size_t i = static_cast<size_t>(it - tab_p_.begin());
  if (i == 0) i = 1;
  if (i >= tab_p_.size()) i = tab_p_.size() - 1;
  const double dp = tab_p_[i] - tab_p_[i - 1];
  const double dphi = std::remainder(
      std::arg(tab_amp_[i]) - std::arg(tab_amp_[i - 1]), 2.0 * std::numbers::pi);
  return dphi / dp;
}

const GaussianPacketParams* MomentumWavePacket::gaussian_params() const {
  return kind_ == Kind::gaussian ? &gauss_ : nullptr;
}

MomentumWavePacket gaussian_packet(double q0, double p0, double sigma_p) {
  return MomentumWavePacket::gaussian(q0, p0, sigma_p);
}

double norm(const MomentumWavePacket& packet) {
  if (packet.kind() == MomentumWavePacket::Kind::tabulated) {
    const auto& p = packet.sample_momenta();
    const auto& amp = packet.sample_amplitudes();
    std::vector<double> cells(p.size() - 1);
    for (size_t i = 0; i + 1 < p.size(); ++i)
      cells[i] = cell_abs2_integral(p[i], p[i + 1], amp[i], amp[i + 1]);
    return pairwise_sum(cells);
  }
  const auto [lo, hi] = packet.support();
  QuadratureSpec spec;
  spec.points = 512;
  spec.lo = lo;
  spec.hi = hi;
  return oscillatory_integral(
             [&](double p) -> std::complex<double> { return packet.abs2(p); },
             spec)
      .real();
}

double negative_momentum_fraction(const MomentumWavePacket& packet) {
  if (packet.kind() == MomentumWavePacket::Kind::tabulated) {
    const auto& p = packet.sample_momenta();
    const auto& amp = packet.sample_amplitudes();
    double sum = 0.0;
    for (size_t i = 0; i + 1 < p.size(); ++i) {
      if (p[i] >= 0.0) break;
      const double pb = std::min(p[i + 1], 0.0);
      if (pb <= p[i]) continue;
      const double u = (pb - p[i]) / (p[i + 1] - p[i]);
      const std::complex<double> fb =
          (1.0 - u) * amp[i] + u * amp[i + 1];
      sum += cell_abs2_integral(p[i], pb, amp[i], fb);
    }
    return sum;
  }
  const auto [lo, hi] = packet.support();
  if (lo >= 0.0) return 0.0;
  QuadratureSpec spec;
  spec.points = 512;
  spec.lo = lo;
  spec.hi = std::min(hi, 0.0);
  if (!(spec.lo < spec.hi)) return 0.0;
  return oscillatory_integral(
             [&](double p) -> std::complex<double> { return packet.abs2(p); },
             spec)
      .real();
}

}  // namespace toa
