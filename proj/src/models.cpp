// Copyright 2026 The asqlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "asqlab/circuit.hpp"
#include "asqlab/fit.hpp"
#include "asqlab/models.hpp"

namespace asqlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Lower bound for decay times and widths.
constexpr double kTiny = 1e-12;

using Eigen::Index;
using Eigen::VectorXd;

double span_of(const VectorXd& x) { return x.maxCoeff() - x.minCoeff(); }

double wrap_phase(double phi) {
  double w = std::remainder(phi, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

// Least squares line y = m x + b.
std::pair<double, double> ols(const VectorXd& x, const VectorXd& y) {
  const double mx = x.mean();
  const double my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
  const double m = sxx > 0.0 ? sxy / sxx : 0.0;
  return {m, my - m * mx};
}

struct Oscillation {
  double a;
  double omega;
  double phase;
  double c;
  double e;
};

Oscillation oscillation_guess(const VectorXd& x, const VectorXd& y, bool slope) {
  Oscillation g{};
  if (slope) {
    const auto [m, b] = ols(x, y);
    g.e = m;
    g.c = b;
  } else {
    g.e = 0.0;
    g.c = y.mean();
  }
  const VectorXd z = y.array() - g.c - g.e * x.array();
  g.omega = dominant_angular_frequency(x, z);
  std::complex<double> s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += z[i] * std::polar(1.0, -g.omega * x[i]);
  g.phase = -std::arg(s);
  g.a = z.cwiseAbs().maxCoeff();
  if (!(g.a > 0.0)) g.a = 1e-3;
  return g;
}

// Decay-time starts spread over the record.
std::vector<double> decay_starts(const VectorXd& x) {
  const double span = std::max(span_of(x), kTiny);
  return {0.1 * span, 0.3 * span, 1.0 * span};
}

FitModel rabi_model() {
  FitModel m;
  m.id = ModelId::Rabi;
  m.names = {"a", "omega", "decay", "c"};
  m.bounds = {{}, {0.0, kInf}, {kTiny, kInf}, {}};
  m.evaluate = [](const VectorXd& x, const VectorXd& p, VectorXd& y, Eigen::MatrixXd* jac) {
    const double a = p[0], w = p[1], tr = p[2];
    for (Index i = 0; i < x.size(); ++i) {
      const double t = x[i];
      const double env = std::exp(-t / tr);
      const double c = std::cos(w * t);
      y[i] = a * c * env + p[3];
      if (jac) {
        (*jac)(i, 0) = c * env;
        (*jac)(i, 1) = -a * t * std::sin(w * t) * env;
        (*jac)(i, 2) = a * c * env * t / (tr * tr);
        (*jac)(i, 3) = 1.0;
      }
    }
  };
  m.initial_guess = [](const VectorXd& x, const VectorXd& y) {
    const Oscillation g = oscillation_guess(x, y, false);
    const double sign = std::cos(g.phase) >= 0.0 ? 1.0 : -1.0;
    std::vector<VectorXd> starts;
    for (double tr : decay_starts(x)) {
      VectorXd p(4);
      p << sign * g.a, g.omega, tr, g.c;
      starts.push_back(p);
    }
    return starts;
  };
  return m;
}

FitModel t1_model() {
  FitModel m;
  m.id = ModelId::T1;
  m.names = {"a", "decay", "c"};
  m.bounds = {{}, {kTiny, kInf}, {}};
  m.evaluate = [](const VectorXd& x, const VectorXd& p, VectorXd& y, Eigen::MatrixXd* jac) {
    for (Index i = 0; i < x.size(); ++i) {
      const double env = std::exp(-x[i] / p[1]);
      y[i] = p[0] * env + p[2];
      if (jac) {
        (*jac)(i, 0) = env;
        (*jac)(i, 1) = p[0] * env * x[i] / (p[1] * p[1]);
        (*jac)(i, 2) = 1.0;
      }
    }
  };
  m.initial_guess = [](const VectorXd& x, const VectorXd& y) {
    std::vector<Index> order(static_cast<std::size_t>(x.size()));
    for (Index i = 0; i < x.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Index l, Index r) { return x[l] < x[r]; });
    const std::size_t tail = std::max<std::size_t>(1, order.size() / 10);
    double c = 0.0;
    for (std::size_t i = order.size() - tail; i < order.size(); ++i) c += y[order[i]];
    c /= static_cast<double>(tail);
    const double a = y[order.front()] - c;
    std::vector<VectorXd> starts;
    for (double tr : decay_starts(x)) {
      VectorXd p(3);
      p << a, tr, c;
      starts.push_back(p);
    }
    return starts;
  };
  return m;
}

FitModel stretched_model(ModelId id, bool slope) {
  FitModel m;
  m.id = id;
  m.names = {"a", "omega", "phi", "decay", "d", "c"};
  m.bounds = {{0.0, kInf}, {0.0, kInf}, {}, {kTiny, kInf}, {0.0, 3.0}, {}};
  if (slope) {
    m.names.push_back("e");
    m.bounds.push_back({});
  }
  m.evaluate = [slope](const VectorXd& x, const VectorXd& p, VectorXd& y, Eigen::MatrixXd* jac) {
    const double a = p[0], w = p[1], phi = p[2], tr = p[3], d = p[4];
    const double e = slope ? p[6] : 0.0;
    for (Index i = 0; i < x.size(); ++i) {
      const double t = x[i];
      const double u = t / tr;
      const double q = u > 0.0 ? std::pow(u, d + 1.0) : 0.0;
      const double env = std::exp(-q);
      const double arg = w * t - phi;
      const double c = std::cos(arg);
      const double s = std::sin(arg);
      y[i] = a * c * env + p[5] + e * t;
      if (jac) {
        (*jac)(i, 0) = c * env;
        (*jac)(i, 1) = -a * t * s * env;
        (*jac)(i, 2) = a * s * env;
        (*jac)(i, 3) = a * c * env * (d + 1.0) * q / tr;
        (*jac)(i, 4) = u > 0.0 ? -a * c * env * q * std::log(u) : 0.0;
        (*jac)(i, 5) = 1.0;
        if (slope) (*jac)(i, 6) = t;
      }
    }
  };
  m.initial_guess = [slope](const VectorXd& x, const VectorXd& y) {
    const Oscillation g = oscillation_guess(x, y, slope);
    std::vector<VectorXd> starts;
    for (double tr : decay_starts(x)) {
      VectorXd p(slope ? 7 : 6);
      p.head<6>() << g.a, g.omega, g.phase, tr, 1.0, g.c;
      if (slope) p[6] = g.e;
      starts.push_back(p);
    }
    return starts;
  };
  m.canonicalize = [](VectorXd& p) { p[2] = wrap_phase(p[2]); };
  return m;
}

FitModel cp_scaling_model() {
  FitModel m;
  m.id = ModelId::CPScaling;
  m.names = {"amplitude", "gamma"};
  m.bounds = {{0.0, kInf}, {}};
  m.evaluate = [](const VectorXd& x, const VectorXd& p, VectorXd& y, Eigen::MatrixXd* jac) {
    for (Index i = 0; i < x.size(); ++i) {
      const double v = models::cp_scaling(x[i], p[0], p[1]);
      y[i] = v;
      if (jac) {
        (*jac)(i, 0) = std::pow(x[i], p[1]);
        (*jac)(i, 1) = v * std::log(x[i]);
      }
    }
  };
  m.initial_guess = [](const VectorXd& x, const VectorXd& y) {
    std::vector<double> lx, ly;
    for (Index i = 0; i < x.size(); ++i) {
      if (x[i] > 0.0 && y[i] > 0.0) {
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
      }
    }
    VectorXd p(2);
    p << 1.0, 0.0;
    if (lx.size() >= 2) {
      const auto [slope, icpt] = ols(Eigen::Map<VectorXd>(lx.data(), static_cast<Index>(lx.size())),
                                     Eigen::Map<VectorXd>(ly.data(), static_cast<Index>(ly.size())));
      p << std::exp(icpt), slope;
    }
    return std::vector<VectorXd>{p};
  };
  return m;
}

FitModel rabi_noise_model() {
  FitModel m;
  m.id = ModelId::RabiNoise;
  m.names = {"sigma_f", "c"};
  m.bounds = {{0.0, kInf}, {0.0, kInf}};
  m.evaluate = [](const VectorXd& x, const VectorXd& p, VectorXd& y, Eigen::MatrixXd* jac) {
    for (Index i = 0; i < x.size(); ++i) {
      const double f2 = x[i] * x[i];
      y[i] = models::rabi_noise(x[i], p[0], p[1]);
      if (jac) {
        (*jac)(i, 0) = p[0] * p[0] * p[0] / f2;
        (*jac)(i, 1) = 2.0 * p[1] * f2;
      }
    }
  };
  m.initial_guess = [](const VectorXd& x, const VectorXd& y) {
    // Linear in (sigma^4 / 4, C^2) on the basis (1/f^2, f^2).
    Eigen::MatrixXd basis(x.size(), 2);
    basis.col(0) = x.array().square().inverse();
    basis.col(1) = x.array().square();
    const Eigen::Vector2d u = basis.colPivHouseholderQr().solve(y);
    const double scale = std::max(y.cwiseAbs().maxCoeff(), kTiny);
    const double u0 = std::max(u[0], 1e-6 * scale * x.cwiseAbs().minCoeff() * x.cwiseAbs().minCoeff());
    const double u1 = std::max(u[1], 1e-6 * scale / std::max(x.squaredNorm(), kTiny));
    VectorXd p(2);
    p << std::pow(4.0 * u0, 0.25), std::sqrt(u1);
    return std::vector<VectorXd>{p};
  };
  return m;
}

FitModel boltzmann_model() {
  FitModel m;
  m.id = ModelId::Boltzmann;
  m.names = {"t_eff_mK"};
  m.bounds = {{kTiny, kInf}};
  m.evaluate = [](const VectorXd& x, const VectorXd& p, VectorXd& y, Eigen::MatrixXd* jac) {
    constexpr double k = models::kBoltzmannExponentMilliKelvinPerGHz;
    for (Index i = 0; i < x.size(); ++i) {
      const double v = models::boltzmann(x[i], p[0]);
      y[i] = v;
      if (jac) (*jac)(i, 0) = v * k * x[i] / (p[0] * p[0]);
    }
  };
  m.initial_guess = [](const VectorXd& x, const VectorXd& y) {
    constexpr double k = models::kBoltzmannExponentMilliKelvinPerGHz;
    // ln r = -k f / T, so 1/T = -sum(f ln r) / (k sum f^2).
    double num = 0.0, den = 0.0;
    for (Index i = 0; i < x.size(); ++i) {
      if (y[i] > 0.0 && y[i] < 1.0) {
        num += -x[i] * std::log(y[i]);
        den += k * x[i] * x[i];
      }
    }
    VectorXd p(1);
    p << (num > 0.0 ? den / num : 1e3);
    return std::vector<VectorXd>{p};
  };
  return m;
}

FitModel line_model() {
  FitModel m;
  m.id = ModelId::Line;
  m.names = {"slope", "intercept"};
  m.bounds = {{}, {}};
  m.evaluate = [](const VectorXd& x, const VectorXd& p, VectorXd& y, Eigen::MatrixXd* jac) {
    y = p[0] * x.array() + p[1];
    if (jac) {
      jac->col(0) = x;
      jac->col(1).setOnes();
    }
  };
  m.initial_guess = [](const VectorXd& x, const VectorXd& y) {
    const auto [slope, icpt] = ols(x, y);
    VectorXd p(2);
    p << slope, icpt;
    return std::vector<VectorXd>{p};
  };
  return m;
}

// Otsu split of a weighted sample: the cut maximizing between-class variance.
std::size_t otsu_split(const std::vector<double>& w, const std::vector<double>& v) {
  const std::size_t n = w.size();
  double total = 0.0, total_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += w[i];
    total_mean += w[i] * v[i];
  }
  std::size_t best = 1;
  double best_score = -1.0;
  double w0 = 0.0, m0 = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    w0 += w[k - 1];
    m0 += w[k - 1] * v[k - 1];
    const double w1 = total - w0;
    if (w0 <= 0.0 || w1 <= 0.0) continue;
    const double mu0 = m0 / w0;
    const double mu1 = (total_mean - m0) / w1;
    const double score = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

FitModel double_gaussian_model() {
  FitModel m;
  m.id = ModelId::DoubleGaussian;
  m.names = {"amp1", "mean1", "sigma1", "amp2", "mean2", "sigma2"};
  m.bounds = {{0.0, kInf}, {}, {kTiny, kInf}, {0.0, kInf}, {}, {kTiny, kInf}};
  m.evaluate = [](const VectorXd& x, const VectorXd& p, VectorXd& y, Eigen::MatrixXd* jac) {
    for (Index i = 0; i < x.size(); ++i) {
      y[i] = 0.0;
      for (int g = 0; g < 2; ++g) {
        const double a = p[3 * g], mu = p[3 * g + 1], s = p[3 * g + 2];
        const double u = (x[i] - mu) / s;
        const double e = std::exp(-0.5 * u * u);
        y[i] += a * e;
        if (jac) {
          (*jac)(i, 3 * g) = e;
          (*jac)(i, 3 * g + 1) = a * e * u / s;
          (*jac)(i, 3 * g + 2) = a * e * u * u / s;
        }
      }
    }
  };
  m.initial_guess = [](const VectorXd& x, const VectorXd& y) {
    std::vector<Index> order(static_cast<std::size_t>(x.size()));
    for (Index i = 0; i < x.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Index l, Index r) { return x[l] < x[r]; });
    std::vector<double> w, v;
    for (Index i : order) {
      w.push_back(std::max(y[i], 0.0));
      v.push_back(x[i]);
    }
    const std::size_t cut = otsu_split(w, v);
    double bin = span_of(x) / std::max<double>(1.0, static_cast<double>(x.size() - 1));
    if (!(bin > 0.0)) bin = 1.0;
    VectorXd p(6);
    for (int g = 0; g < 2; ++g) {
      const std::size_t lo = g == 0 ? 0 : cut;
      const std::size_t hi = g == 0 ? cut : w.size();
      double sw = 0.0, sm = 0.0, peak = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        sw += w[i];
        sm += w[i] * v[i];
        peak = std::max(peak, w[i]);
      }
      const double mu = sw > 0.0 ? sm / sw : v[lo];
      double var = 0.0;
      for (std::size_t i = lo; i < hi; ++i) var += w[i] * (v[i] - mu) * (v[i] - mu);
      var = sw > 0.0 ? var / sw : 0.0;
      const double sigma = std::max(std::sqrt(var), bin / 2.0);
      p.segment<3>(3 * g) << peak, mu, sigma;
    }
    return std::vector<VectorXd>{p};
  };
  m.canonicalize = [](VectorXd& p) {
    if (p[1] > p[4]) {
      const Eigen::Vector3d first = p.head<3>();
      p.head<3>() = p.segment<3>(3);
      p.segment<3>(3) = first;
    }
  };
  return m;
}

}  // namespace

std::string to_string(ModelId id) {
  switch (id) {
    case ModelId::Rabi: return "rabi";
    case ModelId::T1: return "t1";
    case ModelId::Ramsey: return "ramsey";
    case ModelId::Echo: return "echo";
    case ModelId::CP: return "cp";
    case ModelId::CPScaling: return "cp-scaling";
    case ModelId::RabiNoise: return "rabi-noise";
    case ModelId::Boltzmann: return "boltzmann";
    case ModelId::Line: return "line";
    case ModelId::DoubleGaussian: return "double-gaussian";
  }
  return "unknown";
}

ModelId parse_model(const std::string& name) {
  for (ModelId id : {ModelId::Rabi, ModelId::T1, ModelId::Ramsey, ModelId::Echo, ModelId::CP,
                     ModelId::CPScaling, ModelId::RabiNoise, ModelId::Boltzmann, ModelId::Line,
                     ModelId::DoubleGaussian}) {
    if (to_string(id) == name) return id;
  }
  throw std::invalid_argument("unknown fit model '" + name + "'");
}

const std::vector<ModelId>& catalogue() {
  static const std::vector<ModelId> ids = {ModelId::Rabi,      ModelId::T1,        ModelId::Ramsey,
                                           ModelId::Echo,      ModelId::CP,        ModelId::CPScaling,
                                           ModelId::RabiNoise, ModelId::Boltzmann, ModelId::Line};
  return ids;
}

FitModel make_model(ModelId id) {
  switch (id) {
    case ModelId::Rabi: return rabi_model();
    case ModelId::T1: return t1_model();
    case ModelId::Ramsey: return stretched_model(id, false);
    case ModelId::Echo: return stretched_model(id, true);
    case ModelId::CP: return stretched_model(id, true);
    case ModelId::CPScaling: return cp_scaling_model();
    case ModelId::RabiNoise: return rabi_noise_model();
    case ModelId::Boltzmann: return boltzmann_model();
    case ModelId::Line: return line_model();
    case ModelId::DoubleGaussian: return double_gaussian_model();
  }
  throw std::invalid_argument("make_model: unknown id");
}

}  // namespace asqlab
