#include "gearmap/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "gearmap/error.hpp"

namespace gearmap {

namespace {

using cplx = std::complex<double>;

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes, centre last.
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  cplx value;
  double error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<cplx(double)>& f, double a, double b, int depth) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx kron = kWgk[7] * fc;
  cplx gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const cplx s = f(c - dx) + f(c + dx);
    kron += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss), depth};
}

}  // namespace

cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                  const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  std::priority_queue<Panel> work;
  Panel first = gk15(f, a, b, 0);
  work.push(first);
  cplx total = first.value;
  double err = first.error;
  int iterations = 0;
  while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (++iterations > 20000) throw Error(ErrorCode::QuadratureFailure, "panel budget exhausted");
    Panel worst = work.top();
    work.pop();
    if (worst.depth >= opts.max_depth) {
      throw Error(ErrorCode::QuadratureFailure, "subdivision depth exceeded");
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = gk15(f, worst.a, mid, worst.depth + 1);
    Panel right = gk15(f, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
  }
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag())) {
    throw Error(ErrorCode::QuadratureFailure, "non-finite integral");
  }
  // Re-sum to shed the drift of the running total.
  total = 0.0;
  while (!work.empty()) {
    total += work.top().value;
    work.pop();
  }
  return total;
}

double integrate_gk_real(const std::function<double(double)>& f, double a, double b,
                         const QuadratureOptions& opts) {
  return integrate_gk([&](double x) { return cplx(f(x), 0.0); }, a, b, opts).real();
}

}  // namespace gearmap
