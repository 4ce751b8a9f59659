#include "bset/quadrature.hpp"

#include <array>
#include <cmath>

#include "bset/kahan.hpp"

namespace bset {
namespace {

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> kNodes = {
    0.0,
    0.2011940939974345,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601700,
    0.8482065834104272,
    0.9372733924007059,
    0.9879925180204854,
};
constexpr std::array<double, 8> kWeights = {
    0.2025782419255613,
    0.1984314853271116,
    0.1861610000155622,
    0.1662692058169939,
    0.1395706779261543,
    0.1071592204671719,
    0.0703660474881081,
    0.0307532419961173,
};

double composite(const std::function<double(double)>& g, double lo, double hi,
                 int panels) {
  const double h = (hi - lo) / panels;
  KahanSum total;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * h;
    const double mid = a + 0.5 * h;
    const double half = 0.5 * h;
    double s = kWeights[0] * g(mid);
    for (int i = 1; i < 8; ++i) {
      const double d = half * kNodes[i];
      s += kWeights[i] * (g(mid - d) + g(mid + d));
    }
    total.add(s * half);
  }
  return total.value();
}

}  // namespace

double integrate(const std::function<double(double)>& g, double lo, double hi,
                 double rel_tol, int initial_panels, int max_panels) {
  if (hi <= lo) return 0.0;
  int panels = initial_panels;
  double prev = composite(g, lo, hi, panels);
  while (panels < max_panels) {
    panels *= 2;
    const double cur = composite(g, lo, hi, panels);
    const double scale = std::max(std::abs(cur), 1e-300);
    if (std::abs(cur - prev) <= rel_tol * scale) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace bset
