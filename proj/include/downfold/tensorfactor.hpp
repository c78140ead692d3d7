#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "downfold/core.hpp"
#include "downfold/integrals.hpp"

namespace downfold {

/// Rank-3 Cholesky factor of the ERI:  internal ordering reconstruction
///   h2[a,b,c,d] = sum_x L(x,a,d) * L(x,b,c),
/// equivalently chemist (pq|rs) = 2 * sum_x L(x,p,q) L(x,r,s).
/// L(x,p,q) is symmetric in (p,q).
struct CholeskyFactors {
  Tensor3 L;  // (naux, n, n)
  int n_aux() const { return L.dim0(); }
  int n_orb() const { return L.dim1(); }

  Tensor4 reconstruct() const;
};

struct CPOptions {
  int max_sweeps = 500;
  double tol = 1e-8;  // relative error change between sweeps
  uint64_t seed = 12345;
};

/// CP factors of a rank-3 tensor A(x,a,i) ~ sum_p X(x,p) Y(a,p) Z(i,p).
struct CPFactors {
  Mat X, Y, Z;
  std::vector<double> error_sweeps;  // squared reconstruction error per sweep
  int rank() const { return static_cast<int>(X.cols()); }
  double final_error_sq() const {
    return error_sweeps.empty() ? 0.0 : error_sweeps.back();
  }
};

/// CP factors of a doubles-amplitude tensor t2(a,i,j) ~ sum_r T(a,r) U(i,r) V(j,r).
struct AmplitudeFactors {
  Mat T, U, V;
  std::vector<double> error_sweeps;
  int rank() const { return static_cast<int>(T.cols()); }
};

/// Diagonal-pivoted Cholesky of the ERI as the PSD matrix M[(pq),(rs)] = (pq|rs).
/// Stops when the largest residual diagonal drops below delta. Throws if a
/// residual diagonal falls below -10*delta (input not PSD).
CholeskyFactors pivoted_cholesky(const TwoBodyTensor& two, double delta = 1e-6);

/// Alternating least squares for A(x,a,i) = sum_p X Y Z, cyclic updates
/// Z, X, Y per sweep; normal matrix P = (X^T X) o (Y^T Y) regularized by
/// lambda = 1e-10 tr(P)/rank. Error ledger is the squared Frobenius misfit.
CPFactors cp_als(const Tensor3& A, int rank, const CPOptions& opts = {});

Tensor3 cp_reconstruct(const CPFactors& f, int d0, int d1, int d2);
double cp_error(const CPFactors& f, const Tensor3& reference);

AmplitudeFactors factorize_t2(const Tensor3& t2, int rank, const CPOptions& opts = {});
Tensor3 amplitude_reconstruct(const AmplitudeFactors& f, int d0, int d1, int d2);

/// Simple binary container: magic, #tensors, then per tensor a shape header
/// and row-major doubles.
void save_factors(std::ostream& out, const CPFactors& f);
CPFactors load_factors(std::istream& in);
void export_csv(std::ostream& out, const Mat& m, const std::string& name);

}  // namespace downfold
