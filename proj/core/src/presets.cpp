#include "whittle/presets.hpp"

#include <stdexcept>
#include <string>

namespace whittle {

namespace {

std::vector<ChannelModel> make_channels(const std::vector<double>& p01, const std::vector<double>& p11,
                                        const std::vector<double>& bandwidth) {
  std::vector<ChannelModel> out;
  for (std::size_t i = 0; i < p01.size(); ++i) out.emplace_back(p01[i], p11[i], bandwidth[i]);
  return out;
}

std::vector<ChannelModel> identical(int n, double p01, double p11) {
  return std::vector<ChannelModel>(static_cast<std::size_t>(n), ChannelModel(p01, p11, 1.0));
}

std::vector<Preset> build() {
  std::vector<Preset> out;

  Preset fig2;
  fig2.name = "fig2";
  fig2.description = "Index vs myopic policy, K=1, N=7 heterogeneous negatively correlated channels";
  fig2.channels = make_channels({0.8, 0.6, 0.4, 0.9, 0.8, 0.6, 0.7}, {0.6, 0.4, 0.2, 0.2, 0.4, 0.1, 0.3},
                                {0.4998, 0.6668, 1.0000, 0.6296, 0.5830, 0.8334, 0.6668});
  fig2.K = 1;
  fig2.criterion = Average{};
  fig2.horizon = 1000;
  fig2.replications = 2000;
  fig2.seed = 2;
  fig2.policies = {PolicyKind::kWhittle, PolicyKind::kMyopic, PolicyKind::kRandom};
  out.push_back(fig2);

  const std::vector<double> p01_8{0.2, 0.5, 0.8, 0.1, 0.6, 0.2, 0.3, 0.8};
  const std::vector<double> p11_8{0.4, 0.1, 0.3, 0.6, 0.2, 0.8, 0.7, 0.6};
  Preset fig8;
  fig8.name = "fig8";
  fig8.description = "Relaxed-constraint objective G(m), N=8, K=4, beta=0.8";
  fig8.channels = make_channels(p01_8, p11_8, std::vector<double>(8, 1.0));
  fig8.K = 4;
  fig8.criterion = Discounted{0.8};
  fig8.horizon = 60;
  fig8.replications = 2000;
  fig8.seed = 8;
  fig8.policies = {PolicyKind::kWhittle, PolicyKind::kMyopic};
  out.push_back(fig8);

  Preset fig9 = fig8;
  fig9.name = "fig9";
  fig9.description = "Index policy and relaxation bound vs K, same channels as fig8";
  fig9.seed = 9;
  out.push_back(fig9);

  Preset fig11;
  fig11.name = "fig11";
  fig11.description = "Approximation factor vs K on N=8 identical channels (p01=0.2, p11=0.8)";
  fig11.channels = identical(8, 0.2, 0.8);
  fig11.K = 1;
  fig11.criterion = Average{};
  fig11.horizon = 2000;
  fig11.replications = 200;
  fig11.seed = 11;
  fig11.policies = {PolicyKind::kQueue};
  out.push_back(fig11);

  Preset fig12;
  fig12.name = "fig12";
  fig12.description = "Queue policy tracking a change of (p01, p11) at t=6, N=8, K=2";
  fig12.channels = identical(8, 0.1, 0.6);
  fig12.K = 2;
  fig12.criterion = Average{};
  fig12.horizon = 30;
  fig12.replications = 5000;
  fig12.seed = 12;
  fig12.policies = {PolicyKind::kQueue, PolicyKind::kWhittle};
  fig12.regime_switch = RegimeSwitch{6, identical(8, 0.4, 0.9)};
  out.push_back(fig12);

  return out;
}

}  // namespace

const std::vector<Preset>& builtin_presets() {
  static const std::vector<Preset> presets = build();
  return presets;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : builtin_presets()) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown preset: " + std::string(name));
}

}  // namespace whittle
