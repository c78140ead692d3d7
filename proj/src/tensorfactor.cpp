#include "downfold/tensorfactor.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>

namespace downfold {

Tensor4 CholeskyFactors::reconstruct() const {
  const int n = n_orb();
  Tensor4 h2(n);
  for (int x = 0; x < n_aux(); ++x)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) h2(a, b, c, d) += L(x, a, d) * L(x, b, c);
  return h2;
}

CholeskyFactors pivoted_cholesky(const TwoBodyTensor& two, double delta) {
  const int n = two.h2.dim();
  const int np = n * n;
  auto pq = [n](int idx) { return std::make_pair(idx / n, idx % n); };

  Vec diag(np);
  for (int u = 0; u < np; ++u) {
    auto [p, q] = pq(u);
    diag(u) = two.chemist(p, q, p, q);
  }

  std::vector<Vec> vecs;  // Cholesky vectors over the (pq) compound index
  std::vector<int> pivots;
  while (true) {
    int piv = 0;
    double dmax = diag(0);
    for (int u = 1; u < np; ++u)
      if (diag(u) > dmax) {
        dmax = diag(u);
        piv = u;
      }
    double dmin = diag.minCoeff();
    if (dmin < -10.0 * delta)
      throw std::runtime_error("pivoted_cholesky: residual diagonal < -10*delta; ERI not PSD");
    if (dmax < delta || static_cast<int>(vecs.size()) >= np) break;

    auto [pp, pqx] = pq(piv);
    Vec col(np);
    for (int u = 0; u < np; ++u) {
      auto [r, s] = pq(u);
      col(u) = two.chemist(r, s, pp, pqx);
    }
    for (size_t x = 0; x < vecs.size(); ++x) col -= vecs[x](piv) * vecs[x];
    col /= std::sqrt(dmax);
    for (int u = 0; u < np; ++u) diag(u) -= col(u) * col(u);
    vecs.push_back(std::move(col));
    pivots.push_back(piv);
  }

  CholeskyFactors out;
  out.L = Tensor3(static_cast<int>(vecs.size()), n, n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int x = 0; x < out.n_aux(); ++x)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) out.L(x, p, q) = inv_sqrt2 * vecs[x](p * n + q);
  return out;
}

namespace {

/// one least-squares update: W(d0 x rank) = MTTKRP / (AtA o BtB + reg)
Mat als_solve(const std::vector<double>& A, int d0, int d1, int d2, int mode, const Mat& F1,
              const Mat& F2) {
  const int rank = static_cast<int>(F1.cols());
  // MTTKRP: C(i0, p) = sum over the other two modes of A * F1 * F2
  Mat C = Mat::Zero(mode == 0 ? d0 : (mode == 1 ? d1 : d2), rank);
  auto at = [&](int x, int a, int i) {
    return A[(static_cast<size_t>(x) * d1 + a) * d2 + i];
  };
  for (int x = 0; x < d0; ++x)
    for (int a = 0; a < d1; ++a)
      for (int i = 0; i < d2; ++i) {
        const double v = at(x, a, i);
        if (v == 0.0) continue;
        for (int p = 0; p < rank; ++p) {
          if (mode == 0)
            C(x, p) += v * F1(a, p) * F2(i, p);
          else if (mode == 1)
            C(a, p) += v * F1(x, p) * F2(i, p);
          else
            C(i, p) += v * F1(x, p) * F2(a, p);
        }
      }
  Mat P = (F1.transpose() * F1).cwiseProduct(F2.transpose() * F2);
  const double lambda = 1e-10 * P.trace() / rank;
  P += lambda * Mat::Identity(rank, rank);
  return P.ldlt().solve(C.transpose()).transpose();
}

double recon_error_sq(const std::vector<double>& A, int d0, int d1, int d2, const Mat& X,
                      const Mat& Y, const Mat& Z) {
  const int rank = static_cast<int>(X.cols());
  double e = 0.0;
  for (int x = 0; x < d0; ++x)
    for (int a = 0; a < d1; ++a)
      for (int i = 0; i < d2; ++i) {
        double r = A[(static_cast<size_t>(x) * d1 + a) * d2 + i];
        for (int p = 0; p < rank; ++p) r -= X(x, p) * Y(a, p) * Z(i, p);
        e += r * r;
      }
  return e;
}

struct AlsResult {
  Mat X, Y, Z;
  std::vector<double> errors;
};

AlsResult als_kernel(const Tensor3& A, int rank, const CPOptions& opts) {
  if (rank < 1) throw std::invalid_argument("cp_als: rank must be >= 1");
  const int d0 = A.dim0(), d1 = A.dim1(), d2 = A.dim2();
  std::vector<double> flat(A.data(), A.data() + A.size());

  std::mt19937_64 gen(opts.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto rnd = [&](int r, int c) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = uni(gen);
    return m;
  };
  Mat X = rnd(d0, rank), Y = rnd(d1, rank), Z = rnd(d2, rank);

  std::vector<double> errors;
  double prev = recon_error_sq(flat, d0, d1, d2, X, Y, Z);
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    Z = als_solve(flat, d0, d1, d2, 2, X, Y);
    X = als_solve(flat, d0, d1, d2, 0, Y, Z);
    Y = als_solve(flat, d0, d1, d2, 1, X, Z);
    const double e = recon_error_sq(flat, d0, d1, d2, X, Y, Z);
    errors.push_back(e);
    const double denom = std::max(prev, 1e-300);
    if (std::abs(prev - e) / denom < opts.tol || e < opts.tol * opts.tol) {
      prev = e;
      break;
    }
    prev = e;
  }
  if (errors.empty()) errors.push_back(prev);
  return {std::move(X), std::move(Y), std::move(Z), std::move(errors)};
}

}  // namespace

CPFactors cp_als(const Tensor3& A, int rank, const CPOptions& opts) {
  auto r = als_kernel(A, rank, opts);
  CPFactors f;
  f.X = std::move(r.X);
  f.Y = std::move(r.Y);
  f.Z = std::move(r.Z);
  f.error_sweeps = std::move(r.errors);
  return f;
}

Tensor3 cp_reconstruct(const CPFactors& f, int d0, int d1, int d2) {
  Tensor3 out(d0, d1, d2);
  const int rank = f.rank();
  for (int x = 0; x < d0; ++x)
    for (int a = 0; a < d1; ++a)
      for (int i = 0; i < d2; ++i) {
        double v = 0.0;
        for (int p = 0; p < rank; ++p) v += f.X(x, p) * f.Y(a, p) * f.Z(i, p);
        out(x, a, i) = v;
      }
  return out;
}

double cp_error(const CPFactors& f, const Tensor3& reference) {
  if (f.X.rows() != reference.dim0() || f.Y.rows() != reference.dim1() ||
      f.Z.rows() != reference.dim2())
    throw std::invalid_argument("cp_error: shape mismatch");
  Tensor3 rec = cp_reconstruct(f, reference.dim0(), reference.dim1(), reference.dim2());
  double e = 0.0;
  for (size_t k = 0; k < reference.size(); ++k) {
    const double d = reference.data()[k] - rec.data()[k];
    e += d * d;
  }
  return std::sqrt(e);
}

AmplitudeFactors factorize_t2(const Tensor3& t2, int rank, const CPOptions& opts) {
  auto r = als_kernel(t2, rank, opts);
  AmplitudeFactors f;
  f.T = std::move(r.X);
  f.U = std::move(r.Y);
  f.V = std::move(r.Z);
  f.error_sweeps = std::move(r.errors);
  return f;
}

Tensor3 amplitude_reconstruct(const AmplitudeFactors& f, int d0, int d1, int d2) {
  CPFactors g;
  g.X = f.T;
  g.Y = f.U;
  g.Z = f.V;
  return cp_reconstruct(g, d0, d1, d2);
}

namespace {
constexpr uint64_t kMagic = 0x44574e46'43503031ULL;  // "DWNF" "CP01"

void write_mat(std::ostream& out, const Mat& m) {
  int64_t r = m.rows(), c = m.cols();
  out.write(reinterpret_cast<const char*>(&r), 8);
  out.write(reinterpret_cast<const char*>(&c), 8);
  for (int64_t i = 0; i < r; ++i)
    for (int64_t j = 0; j < c; ++j) {
      double v = m(i, j);
      out.write(reinterpret_cast<const char*>(&v), 8);
    }
}

Mat read_mat(std::istream& in) {
  int64_t r = 0, c = 0;
  in.read(reinterpret_cast<char*>(&r), 8);
  in.read(reinterpret_cast<char*>(&c), 8);
  if (!in || r < 0 || c < 0) throw std::runtime_error("factor container: bad shape header");
  Mat m(r, c);
  for (int64_t i = 0; i < r; ++i)
    for (int64_t j = 0; j < c; ++j) {
      double v;
      in.read(reinterpret_cast<char*>(&v), 8);
      m(i, j) = v;
    }
  if (!in) throw std::runtime_error("factor container: truncated data");
  return m;
}
}  // namespace

void save_factors(std::ostream& out, const CPFactors& f) {
  out.write(reinterpret_cast<const char*>(&kMagic), 8);
  write_mat(out, f.X);
  write_mat(out, f.Y);
  write_mat(out, f.Z);
}

CPFactors load_factors(std::istream& in) {
  uint64_t magic = 0;
  in.read(reinterpret_cast<char*>(&magic), 8);
  if (magic != kMagic) throw std::runtime_error("factor container: bad magic");
  CPFactors f;
  f.X = read_mat(in);
  f.Y = read_mat(in);
  f.Z = read_mat(in);
  return f;
}

void export_csv(std::ostream& out, const Mat& m, const std::string& name) {
  out << "# " << name << " " << m.rows() << "x" << m.cols() << "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << "\n";
  }
}

}  // namespace downfold
