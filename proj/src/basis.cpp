#include "idgsem/basis.hpp"

#include <map>
#include <mutex>

namespace idgsem {

namespace {

GaussLegendre build_gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < n; ++k) {
    // Newton on P_n from the Tricomi initial guess.
    double x = std::cos(pi * (k + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre_eval(n, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    auto [p, dp] = legendre_eval(n, x);
    (void)p;
    gl.nodes(n - 1 - k) = x;
    gl.weights(n - 1 - k) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // Symmetrize against roundoff drift.
  for (int k = 0; k < n / 2; ++k) {
    double s = (gl.nodes(k) - gl.nodes(n - 1 - k)) / 2.0;
    gl.nodes(k) = s;
    gl.nodes(n - 1 - k) = -s;
    double w = (gl.weights(k) + gl.weights(n - 1 - k)) / 2.0;
    gl.weights(k) = gl.weights(n - 1 - k) = w;
  }
  if (n % 2 == 1) gl.nodes(n / 2) = 0.0;
  return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mtx;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

}  // namespace idgsem
