#include "chdg/diagnostics.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <future>
#include <limits>

#include "chdg/operators.hpp"
#include "chdg/quadrature.hpp"

namespace chdg {

namespace {

/// Precomputed evaluation of a coarse nested field at the fine mesh's
/// quadrature points. Geometry only; reusable across time steps.
struct NestedTransfer {
  struct PointData {
    int fine_cell;
    int coarse_cell;
    double weight;               // fine quadrature weight * |det J_f|
    Eigen::VectorXd phi_f;       // fine basis values
    Eigen::MatrixXd grad_f;      // fine physical gradients
    Eigen::VectorXd phi_c;       // coarse basis values
    Eigen::MatrixXd grad_c;      // coarse physical gradients
  };
  std::vector<PointData> points;
};

NestedTransfer make_transfer(const DGSpace& coarse, const DGSpace& fine) {
  const Mesh& mf = fine.mesh();
  const Mesh& mc = coarse.mesh();
  const TriangleRule rule = triangle_quadrature(2 * fine.degree() + 2);

  NestedTransfer t;
  t.points.reserve(static_cast<std::size_t>(fine.num_cells()) * rule.points.size());
  for (int c = 0; c < fine.num_cells(); ++c) {
    const double scale = 2.0 * mf.cell_area(c);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& b = rule.points[q];
      const Point2 x = mf.to_physical(c, b[1], b[2]);
      const int cc = mc.locate_cell(x);
      const Point2 rc = mc.to_reference(cc, x);
      NestedTransfer::PointData pd;
      pd.fine_cell = c;
      pd.coarse_cell = cc;
      pd.weight = rule.weights[q] * scale;
      pd.phi_f = fine.basis_values(b[1], b[2]);
      pd.grad_f = fine.basis_gradients(c, b[1], b[2]);
      pd.phi_c = coarse.basis_values(rc[0], rc[1]);
      pd.grad_c = coarse.basis_gradients(cc, rc[0], rc[1]);
      t.points.push_back(std::move(pd));
    }
  }
  return t;
}

std::pair<double, double> step_errors(const NestedTransfer& t, const DGSpace& coarse,
                                      const DGSpace& fine, const Eigen::VectorXd& uc,
                                      const Eigen::VectorXd& uf) {
  double l2 = 0.0, h1 = 0.0;
  const int ldc = coarse.local_dim();
  const int ldf = fine.local_dim();
  for (const auto& pd : t.points) {
    double vc = 0.0, vf = 0.0;
    double gcx = 0.0, gcy = 0.0, gfx = 0.0, gfy = 0.0;
    for (int l = 0; l < ldc; ++l) {
      const double coef = uc(coarse.global_dof(pd.coarse_cell, l));
      vc += coef * pd.phi_c(l);
      gcx += coef * pd.grad_c(l, 0);
      gcy += coef * pd.grad_c(l, 1);
    }
    for (int l = 0; l < ldf; ++l) {
      const double coef = uf(fine.global_dof(pd.fine_cell, l));
      vf += coef * pd.phi_f(l);
      gfx += coef * pd.grad_f(l, 0);
      gfy += coef * pd.grad_f(l, 1);
    }
    const double dv = vc - vf;
    const double dgx = gcx - gfx, dgy = gcy - gfy;
    l2 += pd.weight * dv * dv;
    h1 += pd.weight * (dgx * dgx + dgy * dgy);
  }
  return {l2, h1};
}

}  // namespace

std::pair<double, double> nested_trajectory_errors(const SimulationResult& coarse,
                                                   const SimulationResult& fine, double k) {
  if (coarse.U_history.size() != fine.U_history.size())
    throw std::invalid_argument("nested_trajectory_errors: trajectories differ in length");
  const NestedTransfer transfer = make_transfer(*coarse.space, *fine.space);

  // Both norms are over (0, T]: the m = 0 entry is the raw projection
  // difference, which the dynamics damps within a step or two.
  double linf_l2_sq = 0.0;
  double l2_h1_sq = 0.0;
  const std::size_t first = coarse.U_history.size() > 1 ? 1 : 0;
  for (std::size_t m = first; m < coarse.U_history.size(); ++m) {
    const auto [l2sq, h1sq] =
        step_errors(transfer, *coarse.space, *fine.space, coarse.U_history[m], fine.U_history[m]);
    linf_l2_sq = std::max(linf_l2_sq, l2sq);
    if (m >= 1) l2_h1_sq += k * h1sq;
  }
  return {std::sqrt(linf_l2_sq), std::sqrt(l2_h1_sq)};
}

ConvergenceReport convergence_study(const ModelParams& params,
                                    const std::function<double(Point2)>& u0,
                                    const std::vector<int>& n_list, int reference_n,
                                    int max_threads) {
  if (n_list.empty()) throw std::invalid_argument("convergence_study: empty n list");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] % n_list[i - 1] != 0 || n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("convergence_study: n list must be nested and increasing");
  }
  if (reference_n != 2 * n_list.back())
    throw std::invalid_argument("convergence_study: reference_n must be 2 * max(n list)");

  std::vector<int> all_n = n_list;
  all_n.push_back(reference_n);

  auto run_one = [&](int n) {
    auto space = std::make_shared<const DGSpace>(
        std::make_shared<const Mesh>(build_uniform_mesh(n)), params.degree);
    SimulationOptions opts;
    opts.compute_energy_law = false;
    return run_simulation(space, params, u0, opts);
  };

  std::vector<SimulationResult> results(all_n.size());
  if (max_threads <= 1) {
    for (std::size_t i = 0; i < all_n.size(); ++i) results[i] = run_one(all_n[i]);
  } else {
    std::vector<std::future<SimulationResult>> futures(all_n.size());
    std::size_t next = 0;
    while (next < all_n.size()) {
      const std::size_t batch =
          std::min<std::size_t>(static_cast<std::size_t>(max_threads), all_n.size() - next);
      for (std::size_t i = 0; i < batch; ++i) {
        const int n = all_n[next + i];
        futures[next + i] = std::async(std::launch::async, run_one, n);
      }
      for (std::size_t i = 0; i < batch; ++i) results[next + i] = futures[next + i].get();
      next += batch;
    }
  }

  ConvergenceReport report;
  report.epsilon = params.epsilon;
  report.k = params.k;
  report.T = params.T;
  report.scheme = params.scheme;
  report.reference_n = reference_n;

  const SimulationResult& reference = results.back();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const auto [el2, eh1] = nested_trajectory_errors(results[i], reference, params.k);
    ConvergenceRow row;
    row.n = n_list[i];
    row.h = (2.0 / n_list[i]) * std::sqrt(2.0);
    row.err_linf_l2 = el2;
    row.err_l2_h1 = eh1;
    // orders are undefined on the first row and whenever an error is at
    // roundoff level (mesh-independent data)
    const double floor = 1e-13;
    if (i == 0 || !(report.rows[i - 1].err_linf_l2 > floor) || !(el2 > floor)) {
      row.order_l2 = nan;
    } else {
      row.order_l2 = std::log(report.rows[i - 1].err_linf_l2 / el2) /
                     std::log(static_cast<double>(n_list[i]) / n_list[i - 1]);
    }
    if (i == 0 || !(report.rows[i - 1].err_l2_h1 > floor) || !(eh1 > floor)) {
      row.order_h1 = nan;
    } else {
      row.order_h1 = std::log(report.rows[i - 1].err_l2_h1 / eh1) /
                     std::log(static_cast<double>(n_list[i]) / n_list[i - 1]);
    }
    report.rows.push_back(row);
  }
  return report;
}

namespace {

/// Weighted mass matrix with weight fprime(U_ref(x)).
SparseMat assemble_weighted_mass(const DGSpace& space, const DGField& U_ref,
                                 const std::function<double(double)>& fprime) {
  const Mesh& mesh = space.mesh();
  const int ldim = space.local_dim();
  const TriangleRule rule = triangle_quadrature(4 * space.degree());
  std::vector<Eigen::VectorXd> phi;
  for (const auto& b : rule.points) phi.push_back(space.basis_values(b[1], b[2]));

  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < space.num_cells(); ++c) {
    const double scale = 2.0 * mesh.cell_area(c);
    Eigen::VectorXd uloc(ldim);
    for (int l = 0; l < ldim; ++l) uloc(l) = U_ref.coeffs(space.global_dof(c, l));
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(ldim, ldim);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = fprime(phi[q].dot(uloc));
      local += (rule.weights[q] * scale * w) * (phi[q] * phi[q].transpose());
    }
    for (int i = 0; i < ldim; ++i)
      for (int j = 0; j < ldim; ++j)
        trips.emplace_back(space.global_dof(c, i), space.global_dof(c, j), local(i, j));
  }
  SparseMat out(space.dof_count(), space.dof_count());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

double min_fprime_over_quadrature(const DGSpace& space, const DGField& U_ref,
                                  const std::function<double(double)>& fprime) {
  const TriangleRule rule = triangle_quadrature(4 * space.degree());
  std::vector<Eigen::VectorXd> phi;
  for (const auto& b : rule.points) phi.push_back(space.basis_values(b[1], b[2]));
  double fmin = std::numeric_limits<double>::infinity();
  const int ldim = space.local_dim();
  for (int c = 0; c < space.num_cells(); ++c) {
    Eigen::VectorXd uloc(ldim);
    for (int l = 0; l < ldim; ++l) uloc(l) = U_ref.coeffs(space.global_dof(c, l));
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      fmin = std::min(fmin, fprime(phi[q].dot(uloc)));
  }
  return fmin;
}

}  // namespace

double spectrum_estimate(const DGField& U_ref, double epsilon, double sigma0,
                         const std::function<double(double)>& fprime_arg) {
  const auto space = U_ref.space;
  const std::function<double(double)> fprime =
      fprime_arg ? fprime_arg : [](double u) { return 3.0 * u * u - 1.0; };

  const InverseLaplacianSolver inv(space, sigma0);
  const SparseMat& A = inv.sipg();
  const SparseMat& M = inv.mass();
  const Eigen::VectorXd& mv = inv.mass_of_one();
  const double coef = (1.0 - epsilon * epsilon * epsilon) / epsilon;
  const SparseMat Mf = assemble_weighted_mass(*space, U_ref, fprime);
  SparseMat B = epsilon * A + coef * Mf;

  const int n = space->dof_count();

  if (n <= 3000) {
    // mean-zero basis z_i = e_i - (m_i / m_{n-1}) e_{n-1}
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n - 1);
    for (int i = 0; i < n - 1; ++i) {
      Z(i, i) = 1.0;
      Z(n - 1, i) = -mv(i) / mv(n - 1);
    }
    // G_hat = Z^T (M * (-Delta_h^{-1})) Z
    Eigen::MatrixXd Theta(n, n - 1);
    for (int j = 0; j < n - 1; ++j) Theta.col(j) = -inv.inv_laplacian(Eigen::VectorXd(Z.col(j)));
    Eigen::MatrixXd Ghat = Z.transpose() * (M * Theta);
    Ghat = 0.5 * (Ghat + Ghat.transpose()).eval();
    Eigen::MatrixXd Bhat = Z.transpose() * (B * Z);
    Bhat = 0.5 * (Bhat + Bhat.transpose()).eval();

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(Bhat, Ghat,
                                                                  Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
      throw LinearSolveFailure("spectrum_estimate: dense eigensolver failed");
    return eig.eigenvalues().minCoeff();
  }

  // Large problems: matrix-free shift-invert inverse iteration on the pencil
  // (B, G) with G applied through the factored saddle system.
  const double omega = 4.0;
  auto project_mean_zero = [&](Eigen::VectorXd v) {
    return (v - (mv.dot(v) / omega) * Eigen::VectorXd::Ones(n)).eval();
  };
  auto apply_g = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(M * (-inv.inv_laplacian(x)));
  };

  // shift below the smallest eigenvalue: lambda >= coef * fmin * lambda_max(M, G)
  double rho = 1.0;
  {
    Eigen::SimplicialLDLT<SparseMat> mlu(M);
    Eigen::VectorXd z = project_mean_zero(Eigen::VectorXd::Random(n));
    for (int it = 0; it < 60; ++it) {
      z = project_mean_zero(mlu.solve(A * z));
      z /= z.norm();
    }
    rho = z.dot(M * z) / z.dot(apply_g(z));
  }
  const double fmin = std::min(0.0, min_fprime_over_quadrature(*space, U_ref, fprime));
  const double sigma = 1.2 * coef * fmin * rho - 1e-8;

  // inverse iteration: y <- (B - sigma G)^{-1} G y, solved by CG
  Eigen::VectorXd y = project_mean_zero(Eigen::VectorXd::Random(n));
  y /= y.norm();
  double lambda = 0.0;
  for (int outer = 0; outer < 60; ++outer) {
    const Eigen::VectorXd rhs = apply_g(y);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd r = rhs;
    Eigen::VectorXd p = r;
    double rs = r.squaredNorm();
    const double rs0 = rs;
    for (int it = 0; it < 400 && rs > 1e-20 * rs0; ++it) {
      const Eigen::VectorXd ap = B * p - sigma * apply_g(p);
      const double alpha = rs / p.dot(ap);
      x += alpha * p;
      r -= alpha * ap;
      const double rs_new = r.squaredNorm();
      p = r + (rs_new / rs) * p;
      rs = rs_new;
    }
    y = project_mean_zero(x);
    y /= y.norm();
    const double num = y.dot(B * y);
    const double den = y.dot(apply_g(y));
    const double lambda_new = num / den;
    if (std::abs(lambda_new - lambda) < 1e-9 * (1.0 + std::abs(lambda_new))) {
      lambda = lambda_new;
      break;
    }
    lambda = lambda_new;
  }
  return lambda;
}

std::vector<double> gronwall_bound(const GronwallInput& input) {
  if (!(input.S1 > 0.0)) throw std::invalid_argument("gronwall_bound: S1 must be positive");
  if (!(input.p > 1.0)) throw std::invalid_argument("gronwall_bound: p must exceed 1");
  if (input.b.size() != input.k.size())
    throw std::invalid_argument("gronwall_bound: b and k lengths differ");
  for (double v : input.b)
    if (v < 0.0) throw std::invalid_argument("gronwall_bound: b must be nonnegative");
  for (double v : input.k)
    if (v < 0.0) throw std::invalid_argument("gronwall_bound: k must be nonnegative");

  const int L = static_cast<int>(input.b.size()) + 1;
  const double p = input.p;

  // a_ell = prod_{s=1}^{ell-1} 1/(1+b_s); a_1 = 1
  std::vector<double> a(static_cast<std::size_t>(L) + 1, 1.0);
  for (int ell = 2; ell <= L; ++ell)
    a[static_cast<std::size_t>(ell)] =
        a[static_cast<std::size_t>(ell - 1)] / (1.0 + input.b[static_cast<std::size_t>(ell - 2)]);

  std::vector<double> bounds;
  double running = std::pow(input.S1, 1.0 - p);
  for (int ell = 2; ell <= L; ++ell) {
    const int s = ell - 1;  // new term k_s * a_{s+1}^{1-p}
    running += (1.0 - p) * input.k[static_cast<std::size_t>(s - 1)] *
               std::pow(a[static_cast<std::size_t>(s + 1)], 1.0 - p);
    if (!(running > 0.0)) throw GronwallConditionViolated(ell);
    bounds.push_back(std::pow(running, 1.0 / (1.0 - p)) / a[static_cast<std::size_t>(ell)]);
  }
  return bounds;
}

}  // namespace chdg
