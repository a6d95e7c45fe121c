#include "conflab/mesh/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "conflab/core/parallel.hpp"

namespace conflab::mesh {

namespace {
double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return par::sum(std::int64_t(a.size()), [&](std::int64_t i) { return a[size_t(i)] * b[size_t(i)]; });
}
}  // namespace

SolveResult cg_solve(const LinOp& A, const std::vector<double>& b, const std::vector<double>* x0,
                     double rel_tol, int max_iter, const std::vector<double>* jacobi_diag) {
  const std::size_t n = b.size();
  SolveResult res;
  res.x.assign(n, 0.0);
  if (x0) res.x = *x0;
  std::vector<double> r(n), p(n), Ap(n), z(n);
  A(res.x.data(), Ap.data());
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    res.x.assign(n, 0.0);
    res.converged = true;
    return res;
  }
  auto precond = [&](const std::vector<double>& rin, std::vector<double>& zout) {
    if (jacobi_diag) {
      for (std::size_t i = 0; i < n; ++i) zout[i] = rin[i] / (*jacobi_diag)[i];
    } else {
      zout = rin;
    }
  };
  precond(r, z);
  p = z;
  double rz = dot(r, z);
  double rr = dot(r, r);
  for (int it = 0; it < max_iter; ++it) {
    res.iters = it;
    res.rel_residual = std::sqrt(rr) / bnorm;
    if (res.rel_residual <= rel_tol) { res.converged = true; return res; }
    A(p.data(), Ap.data());
    const double pAp = dot(p, Ap);
    if (pAp <= 0) break;  // loss of positive definiteness (roundoff)
    const double alpha = rz / pAp;
    par::for_each(std::int64_t(n), [&](std::int64_t i) {
      res.x[size_t(i)] += alpha * p[size_t(i)];
      r[size_t(i)] -= alpha * Ap[size_t(i)];
    });
    precond(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    rr = dot(r, r);
    par::for_each(std::int64_t(n), [&](std::int64_t i) { p[size_t(i)] = z[size_t(i)] + beta * p[size_t(i)]; });
  }
  res.rel_residual = std::sqrt(rr) / bnorm;
  res.converged = res.rel_residual <= rel_tol;
  return res;
}

PoissonSolver::PoissonSolver(const TriMesh& mesh, const std::vector<std::array<double, 3>>* coeff)
    : mesh_(mesh), K_(assemble_stiffness(mesh, coeff)) {
  const int nv = mesh.nv();
  int_of_full_.assign(size_t(nv), -1);
  for (int i = 0; i < nv; ++i) {
    if (!mesh.is_boundary[size_t(i)]) {
      int_of_full_[size_t(i)] = int(full_of_int_.size());
      full_of_int_.push_back(i);
    }
    mass_total_ += mesh.vertex_area[size_t(i)];
  }
  const int ni = int(full_of_int_.size());
  Kint_.n = ni;
  Kint_.row_ptr.assign(size_t(ni) + 1, 0);
  for (int ii = 0; ii < ni; ++ii) {
    const int i = full_of_int_[size_t(ii)];
    int cnt = 0;
    for (int k = K_.row_ptr[size_t(i)]; k < K_.row_ptr[size_t(i) + 1]; ++k)
      if (int_of_full_[size_t(K_.col[size_t(k)])] >= 0) ++cnt;
    Kint_.row_ptr[size_t(ii) + 1] = Kint_.row_ptr[size_t(ii)] + cnt;
  }
  Kint_.col.resize(size_t(Kint_.row_ptr[size_t(ni)]));
  Kint_.val.resize(Kint_.col.size());
  for (int ii = 0; ii < ni; ++ii) {
    const int i = full_of_int_[size_t(ii)];
    int w = Kint_.row_ptr[size_t(ii)];
    for (int k = K_.row_ptr[size_t(i)]; k < K_.row_ptr[size_t(i) + 1]; ++k) {
      const int jj = int_of_full_[size_t(K_.col[size_t(k)])];
      if (jj >= 0) {
        Kint_.col[size_t(w)] = jj;
        Kint_.val[size_t(w)] = K_.val[size_t(k)];
        ++w;
      }
    }
  }
}

SolveResult PoissonSolver::solve_dirichlet(const std::vector<double>& rhs_weak,
                                           const std::vector<double>& g,
                                           const std::vector<double>* warm) const {
  const int nv = mesh_.nv(), ni = int(full_of_int_.size());
  std::vector<double> b(std::size_t(ni), 0.0);
  for (int ii = 0; ii < ni; ++ii) {
    const int i = full_of_int_[size_t(ii)];
    double s = rhs_weak[size_t(i)];
    for (int k = K_.row_ptr[size_t(i)]; k < K_.row_ptr[size_t(i) + 1]; ++k) {
      const int j = K_.col[size_t(k)];
      if (mesh_.is_boundary[size_t(j)]) s -= K_.val[size_t(k)] * g[size_t(j)];
    }
    b[size_t(ii)] = s;
  }
  std::vector<double> w0;
  if (warm) {
    w0.resize(size_t(ni));
    for (int ii = 0; ii < ni; ++ii) w0[size_t(ii)] = (*warm)[size_t(full_of_int_[size_t(ii)])];
  }
  const int cap = int(50.0 * std::sqrt(double(ni))) + 50;
  SolveResult inner = cg_solve([&](const double* x, double* y) { Kint_.spmv(x, y); }, b,
                               warm ? &w0 : nullptr, rel_tol, cap);
  SolveResult out;
  out.iters = inner.iters;
  out.rel_residual = inner.rel_residual;
  out.converged = inner.converged;
  out.x.assign(size_t(nv), 0.0);
  for (int i = 0; i < nv; ++i)
    out.x[size_t(i)] = mesh_.is_boundary[size_t(i)] ? g[size_t(i)] : 0.0;
  for (int ii = 0; ii < ni; ++ii) out.x[size_t(full_of_int_[size_t(ii)])] = inner.x[size_t(ii)];
  return out;
}

SolveResult PoissonSolver::solve_dirichlet0(const std::vector<double>& rhs_weak,
                                            const std::vector<double>* warm) const {
  static thread_local std::vector<double> zero;
  zero.assign(size_t(mesh_.nv()), 0.0);
  return solve_dirichlet(rhs_weak, zero, warm);
}

SolveResult PoissonSolver::solve_neumann(const std::vector<double>& rhs_weak,
                                         const std::vector<double>* warm) const {
  const int nv = mesh_.nv();
  // compatibility: project out the constant mode
  double s = 0;
  for (double v : rhs_weak) s += v;
  std::vector<double> b = rhs_weak;
  for (int i = 0; i < nv; ++i) b[size_t(i)] -= s * mesh_.vertex_area[size_t(i)] / mass_total_;
  auto project = [&](std::vector<double>& x) {
    double mx = 0;
    for (int i = 0; i < nv; ++i) mx += x[size_t(i)] * mesh_.vertex_area[size_t(i)];
    mx /= mass_total_;
    for (auto& v : x) v -= mx;
  };
  const int cap = int(50.0 * std::sqrt(double(nv))) + 50;
  std::vector<double> tmp(std::size_t(nv), 0.0);
  SolveResult res = cg_solve(
      [&](const double* x, double* y) {
        K_.spmv(x, y);
        // pin the constant mode: A + (m m^T)/mass, keeps operator SPD on all of R^n
        double mx = 0;
        for (int i = 0; i < nv; ++i) mx += x[size_t(i)] * mesh_.vertex_area[size_t(i)];
        mx /= mass_total_;
        for (int i = 0; i < nv; ++i) y[size_t(i)] += mx * mesh_.vertex_area[size_t(i)];
      },
      b, warm, rel_tol, cap);
  project(res.x);
  return res;
}

double stiffness_energy(const Csr& K, const std::vector<double>& u) {
  std::vector<double> Ku(u.size());
  K.spmv(u.data(), Ku.data());
  double s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * Ku[i];
  return 0.5 * s;
}

}  // namespace conflab::mesh
