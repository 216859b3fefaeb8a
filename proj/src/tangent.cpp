// Finite-difference sigma-derivative engine, tangent-space tensors and the
// collinearity-cone scan.

#include "sigmageo/tangent.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <random>

#include "sigmageo/errors.hpp"
#include "sigmageo/kernel.hpp"

namespace sigmageo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sig(const SigmaSpace& space, const Eigen::VectorXd& x, const Eigen::VectorXd& x2) {
  return space.sigma(Point::Coords(x), Point::Coords(x2));
}

// d^2 sigma / dx^i dx^k at fixed x', central differences with step h.
Eigen::MatrixXd second_unprimed(const SigmaSpace& space, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& x2, double h) {
  int n = static_cast<int>(x.size());
  Eigen::MatrixXd out(n, n);
  double base = sig(space, x, x2);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    out(i, i) = (sig(space, xp, x2) - 2.0 * base + sig(space, xm, x2)) / (h * h);
    for (int k = i + 1; k < n; ++k) {
      Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[i] += h; xpp[k] += h;
      xpm[i] += h; xpm[k] -= h;
      xmp[i] -= h; xmp[k] += h;
      xmm[i] -= h; xmm[k] -= h;
      double v = (sig(space, xpp, x2) - sig(space, xpm, x2) - sig(space, xmp, x2) +
                  sig(space, xmm, x2)) /
                 (4.0 * h * h);
      out(i, k) = v;
      out(k, i) = v;
    }
  }
  return out;
}

double angle_to_line(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double c = std::abs(a.dot(b));
  if (c > 1.0) c = 1.0;
  return std::acos(c);
}

// Deterministic unit-direction net: uniform circle for dim 2, Fibonacci
// spiral for dim 3, seeded Gaussian directions beyond. Consecutive entries
// are geometric neighbours, which the refinement passes rely on.
std::vector<Eigen::VectorXd> direction_net(int dim, int resolution) {
  std::vector<Eigen::VectorXd> net;
  net.reserve(static_cast<std::size_t>(resolution));
  if (dim == 1) {
    Eigen::VectorXd d(1);
    d << 1.0;
    net.push_back(d);
    return net;
  }
  if (dim == 2) {
    for (int j = 0; j < resolution; ++j) {
      double a = 2.0 * kPi * j / resolution;
      Eigen::VectorXd d(2);
      d << std::cos(a), std::sin(a);
      net.push_back(d);
    }
    return net;
  }
  if (dim == 3) {
    double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < resolution; ++j) {
      double z = 1.0 - 2.0 * (j + 0.5) / resolution;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double a = golden * j;
      Eigen::VectorXd d(3);
      d << r * std::cos(a), r * std::sin(a), z;
      net.push_back(d);
    }
    return net;
  }
  std::mt19937_64 rng(0x5161u);
  auto uniform01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  while (static_cast<int>(net.size()) < resolution) {
    Eigen::VectorXd d(dim);
    for (int i = 0; i < dim; i += 2) {
      double u1 = std::max(uniform01(), 1e-300);
      double u2 = uniform01();
      double r = std::sqrt(-2.0 * std::log(u1));
      d[i] = r * std::cos(2.0 * kPi * u2);
      if (i + 1 < dim) d[i + 1] = r * std::sin(2.0 * kPi * u2);
    }
    double norm = d.norm();
    if (norm < 1e-12) continue;
    net.push_back(d / norm);
  }
  return net;
}

}  // namespace

FdSteps FdSteps::defaults_for(const Eigen::VectorXd& x, const Eigen::VectorXd& x2) {
  double scale = std::max({1.0, x.lpNorm<Eigen::Infinity>(), x2.lpNorm<Eigen::Infinity>()});
  FdSteps s;
  s.h1 = 1e-5 * scale;
  s.h2 = 1e-4 * scale;
  s.h3 = 1e-3 * scale;
  return s;
}

TangentData sigma_derivatives(const SigmaSpace& space, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& x2, const FdSteps* steps) {
  int n = static_cast<int>(x.size());
  if (static_cast<int>(x2.size()) != n)
    throw DomainMismatchError("sigma derivatives need points of equal arity");

  TangentData td;
  td.x = x;
  td.x2 = x2;
  td.steps = steps ? *steps : FdSteps::defaults_for(x, x2);
  td.sigma_value = sig(space, x, x2);

  td.grad_x.resize(n);
  td.grad_x2.resize(n);
  double h1 = td.steps.h1;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h1;
    xm[i] -= h1;
    td.grad_x[i] = (sig(space, xp, x2) - sig(space, xm, x2)) / (2.0 * h1);
    Eigen::VectorXd yp = x2, ym = x2;
    yp[i] += h1;
    ym[i] -= h1;
    td.grad_x2[i] = (sig(space, x, yp) - sig(space, x, ym)) / (2.0 * h1);
  }

  double h2 = td.steps.h2;
  td.mixed.resize(n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h2;
    xm[i] -= h2;
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd yp = x2, ym = x2;
      yp[k] += h2;
      ym[k] -= h2;
      td.mixed(i, k) = (sig(space, xp, yp) - sig(space, xp, ym) - sig(space, xm, yp) +
                        sig(space, xm, ym)) /
                       (4.0 * h2 * h2);
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(td.mixed);
  td.mixed_det = td.mixed.partialPivLu().determinant();
  td.mixed_invertible = lu.isInvertible();
  if (td.mixed_invertible) {
    // sigma^{ik'} with sigma^{ik'} sigma_{lk'} = delta^i_l
    td.mixed_inv = td.mixed.transpose().partialPivLu().inverse();
  }
  return td;
}

TangentData tangent_metric(const SigmaSpace& space, const MetricField& metric,
                           const Eigen::VectorXd& x, const Eigen::VectorXd& x2,
                           const FdSteps* steps) {
  TangentData td = sigma_derivatives(space, x, x2, steps);
  if (!td.mixed_invertible)
    throw SingularMixedError("sigma_{ik'} is singular; tangent tensors are undefined");
  int n = static_cast<int>(x.size());
  double h3 = td.steps.h3;

  // third derivatives sigma_{kls'}: outer central difference over x'^s of the
  // unprimed second derivative
  std::vector<Eigen::MatrixXd> third(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd yp = x2, ym = x2;
    yp[s] += h3;
    ym[s] -= h3;
    third[static_cast<std::size_t>(s)] =
        (second_unprimed(space, x, yp, h3) - second_unprimed(space, x, ym, h3)) / (2.0 * h3);
  }

  Eigen::MatrixXd sxx = second_unprimed(space, x, x2, td.steps.h2);
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double correction = 0.0;
      for (int l = 0; l < n; ++l)
        for (int s = 0; s < n; ++s)
          correction += td.mixed_inv(l, s) * third[static_cast<std::size_t>(s)](i, k) *
                        td.grad_x[l];
      G(i, k) = sxx(i, k) - correction;
    }
  td.G = 0.5 * (G + G.transpose());

  Eigen::FullPivLU<Eigen::MatrixXd> glu(td.G);
  if (!glu.isInvertible())
    throw SingularMixedError("tangent metric G_ik is singular");
  td.G_inv = glu.inverse();

  Eigen::MatrixXd g1 = metric.g(x);
  td.Delta = td.G - g1;

  Eigen::MatrixXd g2 = metric.g(x2);
  Eigen::FullPivLU<Eigen::MatrixXd> g2lu(g2);
  if (!g2lu.isInvertible())
    throw SingularMetricError("metric is singular at x'");
  td.transport = -(td.mixed * g2lu.inverse());
  td.full = true;
  return td;
}

ConeResult collinearity_cone(const SigmaSpace& space, const MetricField& metric,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& x2,
                             const Eigen::VectorXd& u, int resolution, double tol) {
  int n = static_cast<int>(x.size());
  if (u.size() != n) throw DomainMismatchError("direction arity mismatch");
  double unorm = u.norm();
  if (unorm <= 0.0) throw ZeroVectorError("cone direction u must be nonzero");

  TangentData td = tangent_metric(space, metric, x, x2);
  Eigen::MatrixXd g1 = metric.g(x);
  Eigen::MatrixXd g2 = metric.g(x2);

  ConeResult result;
  result.x = x;
  result.x2 = x2;
  result.u_at_x2 = u / unorm;

  Eigen::VectorXd w = td.mixed * result.u_at_x2;  // sigma_{il'} u^{l'}
  double guu = result.u_at_x2.dot(g2 * result.u_at_x2);

  Eigen::VectorXd u_low = -w;  // parallel-transported covariant components
  Eigen::VectorXd u_x = td.G_inv * u_low;
  double u_x_norm = u_x.norm();
  if (u_x_norm > 0.0) u_x /= u_x_norm;
  result.u_at_x = u_x;

  double mag = w.squaredNorm() + std::abs(guu) * g1.cwiseAbs().maxCoeff();
  auto residual = [&](const Eigen::VectorXd& d) {
    double sp = d.dot(w);
    double a2 = d.dot(g1 * d);
    return sp * sp - a2 * guu;
  };
  auto threshold = [&](const Eigen::VectorXd& d) {
    double sp = d.dot(w);
    double a2 = d.dot(g1 * d);
    double denom = std::max({sp * sp, std::abs(a2 * guu), 1e-12 * std::max(1.0, mag)});
    return scaled_tol(tol, denom);
  };

  std::vector<Eigen::VectorXd> net = direction_net(n, resolution);
  std::vector<ConeSolution> found;

  auto consider = [&](const Eigen::VectorXd& d, double res) {
    if (std::abs(res) > threshold(d)) return;
    for (const ConeSolution& s : found)
      if (angle_to_line(s.direction, d) < 1e-3) return;
    found.push_back({d, res});
  };

  // seeded candidates: the transported direction is always examined
  if (u_x_norm > 0.0) {
    consider(result.u_at_x, residual(result.u_at_x));
    consider(-result.u_at_x, residual(-result.u_at_x));
  }

  std::vector<double> res(net.size());
  for (std::size_t j = 0; j < net.size(); ++j) res[j] = residual(net[j]);

  auto slerp = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b, double t) {
    Eigen::VectorXd v = (1.0 - t) * a + t * b;
    double norm = v.norm();
    return norm > 0.0 ? Eigen::VectorXd(v / norm) : a;
  };

  for (std::size_t j = 0; j < net.size(); ++j) {
    std::size_t jn = (j + 1) % net.size();
    consider(net[j], res[j]);
    // sign change between neighbouring net directions: bisect along the arc
    if (res[j] * res[jn] < 0.0 && angle_to_line(net[j], net[jn]) < 0.5) {
      double lo = 0.0, hi = 1.0;
      double flo = res[j];
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        double fmid = residual(slerp(net[j], net[jn], mid));
        if (flo * fmid <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fmid;
        }
      }
      Eigen::VectorXd d = slerp(net[j], net[jn], 0.5 * (lo + hi));
      consider(d, residual(d));
    }
    // tangential zeros: refine local minima of |res| between neighbours
    std::size_t jp = (j + net.size() - 1) % net.size();
    if (std::abs(res[j]) <= std::abs(res[jp]) && std::abs(res[j]) <= std::abs(res[jn]) &&
        angle_to_line(net[jp], net[jn]) < 0.5) {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 50; ++it) {
        double t1 = lo + (hi - lo) * 0.381966011250105;
        double t2 = hi - (hi - lo) * 0.381966011250105;
        double f1 = std::abs(residual(slerp(net[jp], net[jn], t1)));
        double f2 = std::abs(residual(slerp(net[jp], net[jn], t2)));
        if (f1 < f2) {
          hi = t2;
        } else {
          lo = t1;
        }
      }
      Eigen::VectorXd d = slerp(net[jp], net[jn], 0.5 * (lo + hi));
      consider(d, residual(d));
    }
  }

  result.solutions = std::move(found);
  result.degenerate = true;
  for (const ConeSolution& s : result.solutions) {
    if (u_x_norm == 0.0 || angle_to_line(s.direction, result.u_at_x) > 1e-2) {
      result.degenerate = false;
      break;
    }
  }
  return result;
}

IdentityReport check_worldfunction_identities(const SigmaSpace& space, const MetricField& metric,
                                              const Eigen::VectorXd& x, const Eigen::VectorXd& x2,
                                              const FdSteps* steps) {
  TangentData td = tangent_metric(space, metric, x, x2, steps);
  IdentityReport report;
  report.sigma_value = td.sigma_value;
  report.mixed_det = td.mixed_det;

  // (1) sigma_l sigma^{lj'} sigma_{j'} = 2 sigma
  double lhs = td.grad_x.dot(td.mixed_inv * td.grad_x2);
  report.sq_norm = std::abs(lhs - 2.0 * td.sigma_value) /
                   std::max(1.0, std::abs(2.0 * td.sigma_value));

  // (2) (G_ik - g_ik) sigma^k = 0 along the connecting geodesic. The Delta
  // norm in the denominator is floored so a Delta that is itself finite-
  // difference noise does not inflate the ratio.
  Eigen::MatrixXd g1 = metric.g(x);
  Eigen::VectorXd sigma_up = g1.partialPivLu().solve(td.grad_x);
  double delta_norm = std::max(td.Delta.norm(), 1e-3 * g1.norm());
  double vec_norm = std::max(sigma_up.norm(), 1.0);
  report.along_geodesic = (td.Delta * sigma_up).norm() / (delta_norm * vec_norm);

  // (3) g_{l's'} = sigma_{il'} G^{ik} sigma_{ks'}
  Eigen::MatrixXd g2 = metric.g(x2);
  Eigen::MatrixXd predicted = td.mixed.transpose() * td.G_inv * td.mixed;
  report.metric_recovery = (g2 - predicted).norm() / std::max(1.0, g2.norm());
  return report;
}

}  // namespace sigmageo
