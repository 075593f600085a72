// Copyright 2026 The SUSS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "test_support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <numbers>

namespace suss::testing {

ImageRgb synthetic_image(std::uint64_t seed, int width, int height) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ImageRgb img(width, height);

  std::array<double, 3> base{}, grad_x{}, grad_y{};
  for (int c = 0; c < 3; ++c) {
    base[c] = 0.25 + 0.5 * u(rng);
    grad_x[c] = 0.3 * (u(rng) - 0.5);
    grad_y[c] = 0.3 * (u(rng) - 0.5);
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) {
        img.at(x, y, c) = base[c] + grad_x[c] * (x / double(width) - 0.5) +
                          grad_y[c] * (y / double(height) - 0.5);
      }
    }
  }

  // Oriented gratings with a random tint.
  const int gratings = 2 + static_cast<int>(u(rng) * 3);
  for (int g = 0; g < gratings; ++g) {
    const double theta = std::numbers::pi * u(rng);
    const double freq = 2.0 * std::numbers::pi * (0.03 + 0.15 * u(rng));
    const double phase = 2.0 * std::numbers::pi * u(rng);
    const double amp = 0.04 + 0.08 * u(rng);
    std::array<double, 3> tint{};
    for (double& t : tint) t = 0.5 + 0.5 * u(rng);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double v = amp * std::sin(freq * (x * std::cos(theta) + y * std::sin(theta)) + phase);
        for (int c = 0; c < 3; ++c) img.at(x, y, c) += tint[c] * v;
      }
    }
  }

  // Shapes: ellipses and rectangles with soft-free hard edges.
  const int shapes = 3 + static_cast<int>(u(rng) * 5);
  for (int s = 0; s < shapes; ++s) {
    const double cx = u(rng) * width, cy = u(rng) * height;
    const double rx = (0.08 + 0.2 * u(rng)) * width, ry = (0.08 + 0.2 * u(rng)) * height;
    const bool ellipse = u(rng) < 0.5;
    std::array<double, 3> color{};
    for (double& c : color) c = u(rng);
    const double alpha = 0.5 + 0.5 * u(rng);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double dx = (x - cx) / rx, dy = (y - cy) / ry;
        const bool inside = ellipse ? dx * dx + dy * dy <= 1.0
                                    : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
        if (!inside) continue;
        for (int c = 0; c < 3; ++c) {
          img.at(x, y, c) = (1.0 - alpha) * img.at(x, y, c) + alpha * color[c];
        }
      }
    }
  }

  // Fine texture.
  std::normal_distribution<double> n(0.0, 0.02);
  for (double& v : img.data) v = std::clamp(v + n(rng), 0.0, 1.0);
  return img;
}

ImageRgb random_image(std::mt19937_64& rng, int width, int height) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ImageRgb img(width, height);
  for (double& v : img.data) v = u(rng);
  return img;
}

Plane random_plane(std::mt19937_64& rng, int width, int height, int channels, double lo,
                   double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Plane p(width, height, channels);
  for (double& v : p.data) v = u(rng);
  return p;
}

SupnParams random_params(std::mt19937_64& rng, int window, int channels, int width,
                         int height, double coupling) {
  SupnParams p = SupnParams::zeros(offset_set(window, channels), width, height);
  std::uniform_real_distribution<double> u01(0.0, 1.0), ud(-0.5, 0.5),
      uc(-coupling, coupling);
  for (double& v : p.mu.data) v = u01(rng);
  for (double& v : p.log_diag.data) v = ud(rng);
  for (Plane& o : p.off_diag) {
    for (double& v : o.data) v = uc(rng);
  }
  for (double& v : p.intra.data) v = uc(rng);
  return p;
}

Eigen::VectorXd to_vector(const Plane& p) {
  return Eigen::Map<const Eigen::VectorXd>(p.data.data(), static_cast<Eigen::Index>(p.size()));
}

DenseOracle::DenseOracle(const SupnParams& p) {
  const DenseMatrix m = dense_materialize(p);
  L = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      m.values.data(), m.n, m.n);
  mu = to_vector(p.mu);
}

double DenseOracle::log_prob(const Plane& y) const {
  const Eigen::VectorXd r = to_vector(y) - mu;
  const Eigen::MatrixXd precision = L * L.transpose();
  const double n = static_cast<double>(r.size());
  return L.diagonal().array().log().sum() - 0.5 * n * std::log(2.0 * std::numbers::pi) -
         0.5 * r.dot(precision * r);
}

Eigen::VectorXd DenseOracle::whiten(const Plane& y) const {
  return L.transpose() * (to_vector(y) - mu);
}

Eigen::VectorXd DenseOracle::grad_obs(const Plane& y) const {
  return -(L * L.transpose()) * (to_vector(y) - mu);
}

Eigen::MatrixXd DenseOracle::grad_factor(const Plane& y) const {
  const Eigen::VectorXd r = to_vector(y) - mu;
  Eigen::MatrixXd g = -(r * r.transpose()) * L;
  for (Eigen::Index i = 0; i < L.rows(); ++i) g(i, i) += 1.0 / L(i, i);
  return g;
}

Eigen::MatrixXd DenseOracle::covariance() const {
  const Eigen::MatrixXd precision = L * L.transpose();
  return precision.llt().solve(Eigen::MatrixXd::Identity(L.rows(), L.cols()));
}

double max_abs_diff(const Plane& a, const Plane& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

double max_abs_diff(const ImageRgb& a, const ImageRgb& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  }
  return m;
}

double rel_err(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("suss_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

CommandResult run_command(const std::string& command) {
  static int counter = 0;
  const auto base = std::filesystem::temp_directory_path() /
                    ("suss_cmd_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  const std::string out_path = base.string() + ".out", err_path = base.string() + ".err";
  const int status = std::system((command + " >" + out_path + " 2>" + err_path).c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return r;
}

}  // namespace suss::testing
