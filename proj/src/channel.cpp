#include "twostage/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace twostage {

namespace {

constexpr double kMinSineSeparation = 1e-6;
constexpr int kMaxRedraws = 1000;

std::string str(Index v) { return std::to_string(v); }

std::vector<double> draw_angles(Rng& rng, Index count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (auto& theta : out) {
    // (0, 2 pi): reject the single excluded endpoint.
    double u = rng.uniform();
    while (u == 0.0) u = rng.uniform();
    theta = 2.0 * std::numbers::pi * u;
  }
  return out;
}

}  // namespace

void SystemConfig::validate() const {
  if (n_rx < 1 || n_tx < 1) {
    throw std::invalid_argument("config: antenna counts must be >= 1 (n_rx=" + str(n_rx) +
                                ", n_tx=" + str(n_tx) + ")");
  }
  const Index smaller = std::min(n_rx, n_tx);
  if (paths < 1 || paths > smaller) {
    throw std::invalid_argument("config: paths=" + str(paths) + " must lie in [1, " +
                                str(smaller) + "]");
  }
  if (static_cast<double>(paths) > max_path_fraction * static_cast<double>(smaller)) {
    throw std::invalid_argument("config: paths=" + str(paths) +
                                " exceeds max_path_fraction * min(n_rx, n_tx)");
  }
  if (m < paths || m > n_tx) {
    throw std::invalid_argument("config: m=" + str(m) + " must lie in [paths=" + str(paths) +
                                ", n_tx=" + str(n_tx) + "]");
  }
  if (n_rf < 2) {
    throw std::invalid_argument("config: n_rf=" + str(n_rf) + " must be >= 2");
  }
  if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
    throw std::invalid_argument("config: noise_var must be finite and >= 0");
  }
  if (grid_size < 0 || (grid_size > 0 && grid_size < n_rf)) {
    throw std::invalid_argument("config: grid_size=" + str(grid_size) +
                                " must be 0 (default) or >= n_rf");
  }
}

ComplexVector steering_vector_sin(double sin_theta, Index n) {
  if (n < 1) throw std::invalid_argument("steering_vector: n must be >= 1");
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexVector a(n);
  for (Index k = 0; k < n; ++k) {
    a(k) = std::polar(amplitude, -std::numbers::pi * static_cast<double>(k) * sin_theta);
  }
  return a;
}

ComplexVector steering_vector(double theta, Index n) {
  return steering_vector_sin(std::sin(theta), n);
}

ComplexMatrix steering_matrix(std::span<const double> thetas, Index n) {
  ComplexMatrix a(n, static_cast<Index>(thetas.size()));
  for (std::size_t l = 0; l < thetas.size(); ++l) {
    a.col(static_cast<Index>(l)) = steering_vector(thetas[l], n);
  }
  return a;
}

ComplexMatrix assemble_channel(const ComplexMatrix& rx_steering,
                               std::span<const Complex> gains,
                               const ComplexMatrix& tx_steering) {
  const auto paths = static_cast<Index>(gains.size());
  if (rx_steering.cols() != paths || tx_steering.cols() != paths || paths == 0) {
    throw std::invalid_argument("assemble_channel: factor shapes disagree with path count");
  }
  const double scale = std::sqrt(static_cast<double>(rx_steering.rows() * tx_steering.rows()) /
                                 static_cast<double>(paths));
  const Eigen::Map<const ComplexVector> g(gains.data(), paths);
  return scale * rx_steering * g.asDiagonal() * tx_steering.transpose();
}

double min_sine_separation(std::span<const double> thetas) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = i + 1; j < thetas.size(); ++j) {
      best = std::min(best, std::abs(std::sin(thetas[i]) - std::sin(thetas[j])));
    }
  }
  return best;
}

ChannelRealization generate_channel(const SystemConfig& cfg, Rng& rng) {
  cfg.validate();
  ChannelRealization out;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kMaxRedraws) {
      throw std::runtime_error("generate_channel: could not draw distinct angles");
    }
    out.aoa = draw_angles(rng, cfg.paths);
    out.aod = draw_angles(rng, cfg.paths);
    if (min_sine_separation(out.aoa) >= kMinSineSeparation &&
        min_sine_separation(out.aod) >= kMinSineSeparation) {
      break;
    }
  }
  out.gains.resize(static_cast<std::size_t>(cfg.paths));
  for (auto& g : out.gains) g = rng.complex_normal();

  out.rx_steering = steering_matrix(out.aoa, cfg.n_rx);
  out.tx_steering = steering_matrix(out.aod, cfg.n_tx);
  out.h = assemble_channel(out.rx_steering, out.gains, out.tx_steering);
  return out;
}

ComplexMatrix channel_column_basis(const ChannelRealization& channel) {
  const auto paths = static_cast<Index>(channel.gains.size());
  if (paths > 0 && channel.rx_steering.rows() == channel.h.rows() &&
      channel.rx_steering.cols() == paths) {
    return dominant_left_basis(channel.rx_steering, paths);
  }
  if (paths < 1) throw std::invalid_argument("channel_column_basis: no paths recorded");
  return dominant_left_basis(channel.h, paths);
}

ComplexMatrix select_columns(const ComplexMatrix& h, Index m) {
  if (m < 1 || m > h.cols()) {
    throw std::invalid_argument("select_columns: m=" + str(m) + " outside [1, " +
                                str(h.cols()) + "]");
  }
  return h.leftCols(m);
}

std::string channel_to_json(const ChannelRealization& channel) {
  using nlohmann::json;
  json j;
  j["n_rx"] = channel.h.rows();
  j["n_tx"] = channel.h.cols();
  j["paths"] = channel.gains.size();
  j["aoa"] = channel.aoa;
  j["aod"] = channel.aod;
  json gains = json::array();
  for (const auto& g : channel.gains) gains.push_back({g.real(), g.imag()});
  j["gains"] = std::move(gains);
  json h = json::array();
  for (Index r = 0; r < channel.h.rows(); ++r) {
    for (Index c = 0; c < channel.h.cols(); ++c) {
      h.push_back({channel.h(r, c).real(), channel.h(r, c).imag()});
    }
  }
  j["h"] = std::move(h);
  return j.dump(1);
}

ChannelRealization channel_from_json(const std::string& text) {
  using nlohmann::json;
  const json j = json::parse(text);
  const auto n_rx = j.at("n_rx").get<Index>();
  const auto n_tx = j.at("n_tx").get<Index>();
  const auto paths = j.at("paths").get<Index>();

  ChannelRealization out;
  out.aoa = j.at("aoa").get<std::vector<double>>();
  out.aod = j.at("aod").get<std::vector<double>>();
  for (const auto& g : j.at("gains")) out.gains.emplace_back(g.at(0).get<double>(), g.at(1).get<double>());
  if (static_cast<Index>(out.aoa.size()) != paths || static_cast<Index>(out.aod.size()) != paths ||
      static_cast<Index>(out.gains.size()) != paths) {
    throw std::invalid_argument("channel fixture: angle/gain arrays disagree with paths");
  }
  const auto& h = j.at("h");
  if (static_cast<Index>(h.size()) != n_rx * n_tx) {
    throw std::invalid_argument("channel fixture: h has " + std::to_string(h.size()) +
                                " entries, expected " + str(n_rx * n_tx));
  }
  out.h.resize(n_rx, n_tx);
  for (Index r = 0; r < n_rx; ++r) {
    for (Index c = 0; c < n_tx; ++c) {
      const auto& z = h.at(static_cast<std::size_t>(r * n_tx + c));
      out.h(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
    }
  }
  require_finite(out.h, "channel fixture");
  out.rx_steering = steering_matrix(out.aoa, n_rx);
  out.tx_steering = steering_matrix(out.aod, n_tx);
  return out;
}

void save_channel(const ChannelRealization& channel, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << channel_to_json(channel) << '\n';
}

ChannelRealization load_channel(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << is.rdbuf();
  return channel_from_json(buffer.str());
}

}  // namespace twostage
