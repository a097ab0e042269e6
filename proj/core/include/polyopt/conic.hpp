#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace polyopt {

enum class ConeType : std::uint8_t { Zero, NonNeg, SecondOrder, Psd };

/// One block of the product cone. `dim` counts rows; for Psd blocks,
/// dim = side·(side+1)/2 and rows hold the symmetric vectorization with
/// off-diagonal entries scaled by √2 (which makes the cone self-dual under
/// the standard inner product).
struct ConeBlock {
  ConeType type = ConeType::NonNeg;
  int dim = 0;
  int side = 0;  // Psd only
};

enum class ConicStatus : std::uint8_t { Optimal, Infeasible, MaxIter };

/// min c'z  s.t.  h - Az ∈ K (product of the cone blocks, in row order).
/// col_lo/col_hi, when nonempty, give finite column boxes used to certify
/// lower bounds from approximate duals; leave empty if unavailable.
struct ConicProblem {
  int num_cols = 0;
  std::vector<double> c;
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> h;
  std::vector<ConeBlock> cones;
  std::vector<double> col_lo;
  std::vector<double> col_hi;
};

struct ConicResult {
  ConicStatus status = ConicStatus::MaxIter;
  double objective = std::numeric_limits<double>::quiet_NaN();
  /// Valid lower bound on the conic optimum built from the (projected)
  /// dual iterate; -inf when no finite column box was given. On MaxIter a
  /// safety margin of 10x the final gap residual is already subtracted.
  double certified_bound = -std::numeric_limits<double>::infinity();
  std::vector<double> z;
  double primal_residual = std::numeric_limits<double>::infinity();
  double dual_residual = std::numeric_limits<double>::infinity();
  double gap_residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

/// Euclidean projection onto {(t, x) : t >= ||x||_2}.
std::vector<double> project_soc(const std::vector<double>& v);

/// Projection onto the PSD cone in scaled symmetric vectorization.
std::vector<double> project_psd(const std::vector<double>& v, int side);

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major a,
/// n x n). On return `values` holds eigenvalues and `vectors` the
/// eigenvectors as columns of a row-major n x n matrix.
void jacobi_eigen(std::vector<double> a, int n, std::vector<double>& values,
                  std::vector<double>& vectors);

/// ADMM splitting solver: alternates a linear solve against the (scaled)
/// normal matrix with cone projections, with residual-balanced penalty
/// adaptation. Stops at max residual <= 1e-6 or 20000 iterations.
ConicResult solve_conic(const ConicProblem& p);

}  // namespace polyopt
