#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "conflab/mesh/fem.hpp"

namespace conflab::mesh {

struct SolveResult {
  std::vector<double> x;
  int iters = 0;
  double rel_residual = 0;
  bool converged = false;
};

// generic CG on an SPD operator; deterministic reductions
using LinOp = std::function<void(const double*, double*)>;
SolveResult cg_solve(const LinOp& A, const std::vector<double>& b, const std::vector<double>* x0,
                     double rel_tol, int max_iter,
                     const std::vector<double>* jacobi_diag = nullptr);

// P1 Poisson solver on a mesh, optionally with per-triangle 2x2 coefficient.
// Dirichlet elimination keeps the interior block SPD; pure-Neumann systems
// are solved on the mean-zero complement with the constant mode pinned.
class PoissonSolver {
 public:
  explicit PoissonSolver(const TriMesh& mesh,
                         const std::vector<std::array<double, 3>>* coeff = nullptr);

  // g: per-vertex values, read at boundary vertices only
  SolveResult solve_dirichlet(const std::vector<double>& rhs_weak, const std::vector<double>& g,
                              const std::vector<double>* warm = nullptr) const;
  SolveResult solve_dirichlet0(const std::vector<double>& rhs_weak,
                               const std::vector<double>* warm = nullptr) const;
  // mean-zero pure-Neumann solve; incompatible rhs is projected (defect reported)
  SolveResult solve_neumann(const std::vector<double>& rhs_weak,
                            const std::vector<double>* warm = nullptr) const;

  const Csr& matrix() const { return K_; }
  const TriMesh& mesh() const { return mesh_; }
  double rel_tol = 1e-10;

 private:
  const TriMesh& mesh_;
  Csr K_;
  Csr Kint_;                 // interior block
  std::vector<int> int_of_full_, full_of_int_;
  double mass_total_ = 0;
};

// energy E(u) = 1/2 u^T K u for a prebuilt stiffness
double stiffness_energy(const Csr& K, const std::vector<double>& u);

}  // namespace conflab::mesh
