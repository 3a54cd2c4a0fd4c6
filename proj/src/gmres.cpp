#include "curvquad/gmres.hpp"

#include <algorithm>
#include <cmath>

#include "curvquad/error.hpp"
#include "curvquad/simd/kernels.hpp"

namespace curvquad {

std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x) {
  if (x.size() != a.cols) throw DomainError("matvec: size mismatch");
  std::vector<double> y(a.rows);
  simd::active_kernels().matvec(a.data.data(), x.data(), y.data(), a.rows, a.cols);
  return y;
}

GmresResult gmres(const DenseMatrix& a, const std::vector<double>& b, const GmresOptions& opt) {
  if (a.rows != a.cols || b.size() != a.rows) throw DomainError("gmres: matrix must be square and match b");
  const auto& k = simd::active_kernels();
  const std::size_t n = b.size();
  GmresResult res;
  res.x.assign(n, 0.0);
  const double bnorm = std::sqrt(k.dot(b.data(), b.data(), n));
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  const int maxit = std::min<int>(opt.max_iter, static_cast<int>(n));

  std::vector<std::vector<double>> v;
  v.reserve(static_cast<std::size_t>(maxit) + 1);
  v.emplace_back(b);
  for (double& e : v[0]) e /= bnorm;
  // column j of the Hessenberg matrix is h[j], length j + 2
  std::vector<std::vector<double>> h;
  std::vector<double> cs, sn, g{bnorm};
  int j = 0;
  for (; j < maxit; ++j) {
    std::vector<double> w(n);
    k.matvec(a.data.data(), v[j].data(), w.data(), n, n);
    std::vector<double> col(static_cast<std::size_t>(j) + 2, 0.0);
    for (int i = 0; i <= j; ++i) {
      col[i] = k.dot(w.data(), v[i].data(), n);
      k.axpy(-col[i], v[i].data(), w.data(), n);
    }
    col[j + 1] = std::sqrt(k.dot(w.data(), w.data(), n));
    for (int i = 0; i < j; ++i) {
      const double t = cs[i] * col[i] + sn[i] * col[i + 1];
      col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
      col[i] = t;
    }
    const double r = std::hypot(col[j], col[j + 1]);
    const double c = r == 0.0 ? 1.0 : col[j] / r;
    const double s = r == 0.0 ? 0.0 : col[j + 1] / r;
    const double hj1 = col[j + 1];
    col[j] = r;
    col[j + 1] = 0.0;
    cs.push_back(c);
    sn.push_back(s);
    g.push_back(-s * g[j]);
    g[j] = c * g[j];
    h.push_back(std::move(col));
    const bool breakdown = hj1 <= 1e-300;
    if (!breakdown) {
      for (double& e : w) e /= hj1;
      v.push_back(std::move(w));
    }
    if (std::abs(g[j + 1]) <= opt.tol * bnorm || breakdown) {
      ++j;
      res.converged = true;
      break;
    }
  }
  res.iterations = j;

  // back substitution R y = g
  std::vector<double> y(static_cast<std::size_t>(j), 0.0);
  for (int i = j - 1; i >= 0; --i) {
    double s = g[i];
    for (int l = i + 1; l < j; ++l) s -= h[l][i] * y[l];
    y[i] = h[i][i] == 0.0 ? 0.0 : s / h[i][i];
  }
  for (int i = 0; i < j; ++i) k.axpy(y[i], v[i].data(), res.x.data(), n);

  std::vector<double> r(n);
  k.matvec(a.data.data(), res.x.data(), r.data(), n, n);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  res.relative_residual = std::sqrt(k.dot(r.data(), r.data(), n)) / bnorm;
  return res;
}

}  // namespace curvquad
