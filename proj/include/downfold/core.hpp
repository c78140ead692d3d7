#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace downfold {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Dense rank-3 tensor, row-major.
class Tensor3 {
 public:
  Tensor3() : d0_(0), d1_(0), d2_(0) {}
  Tensor3(int d0, int d1, int d2)
      : d0_(d0), d1_(d1), d2_(d2), data_(static_cast<size_t>(d0) * d1 * d2, 0.0) {}

  double& operator()(int i, int j, int k) { return data_[idx(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[idx(i, j, k)]; }

  int dim0() const { return d0_; }
  int dim1() const { return d1_; }
  int dim2() const { return d2_; }
  size_t size() const { return data_.size(); }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  void setZero() { std::fill(data_.begin(), data_.end(), 0.0); }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

 private:
  size_t idx(int i, int j, int k) const {
    return (static_cast<size_t>(i) * d1_ + j) * d2_ + k;
  }
  int d0_, d1_, d2_;
  std::vector<double> data_;
};

/// Dense rank-4 tensor, row-major.
class Tensor4 {
 public:
  Tensor4() : n_(0) {}
  explicit Tensor4(int n) : n_(n), data_(static_cast<size_t>(n) * n * n * n, 0.0) {}

  double& operator()(int a, int b, int c, int d) { return data_[idx(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[idx(a, b, c, d)]; }

  int dim() const { return n_; }
  size_t size() const { return data_.size(); }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  void setZero() { std::fill(data_.begin(), data_.end(), 0.0); }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

 private:
  size_t idx(int a, int b, int c, int d) const {
    return ((static_cast<size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }
  int n_;
  std::vector<double> data_;
};

}  // namespace downfold
