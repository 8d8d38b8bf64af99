#include "cocyc/linalg.hpp"

#include <cmath>

namespace cocyc {

double op_norm(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

double min_sv(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);  // named: keeps singularValues() storage alive
  return svd.singularValues()(svd.singularValues().size() - 1);
}

void qr_positive(const Mat& a, Mat& q, Mat& r) {
  Eigen::HouseholderQR<Mat> qr(a);
  q = qr.householderQ() * Mat::Identity(a.rows(), a.rows());
  r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < r.rows() && i < r.cols(); ++i) {
    if (r(i, i) < 0) {
      r.row(i) = -r.row(i);
      q.col(i) = -q.col(i);
    }
  }
}

Mat orthonormalize(const Mat& a) {
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(a.rows(), a.cols());
  Mat r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

double span_distance(const Mat& q1, const Mat& q2) {
  Mat resid = q2 - q1 * (q1.transpose() * q2);
  return op_norm(resid);
}

Mat span_intersection(const Mat& a, const Mat& b, double tol) {
  // Null space of [a | -b] gives coefficient pairs; intersection = a * x-part.
  Mat stacked(a.rows(), a.cols() + b.cols());
  stacked << a, -b;
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int null_dim = 0;
  for (Eigen::Index i = sv.size() - 1; i >= 0; --i) {
    if (sv(i) < tol) ++null_dim;
    else break;
  }
  if (null_dim == 0) return Mat(a.rows(), 0);
  Mat coeff = svd.matrixV().rightCols(null_dim).topRows(a.cols());
  return orthonormalize(a * coeff);
}

Eigen::Matrix2d rot2(double t) {
  Eigen::Matrix2d r;
  const double c = std::cos(t), s = std::sin(t);
  r << c, -s, s, c;
  return r;
}

}  // namespace cocyc
