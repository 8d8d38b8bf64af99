#pragma once

#include <Eigen/Dense>

namespace cocyc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Operator 2-norm (largest singular value).
double op_norm(const Mat& m);

// Smallest singular value.
double min_sv(const Mat& m);

// QR with the R-diagonal forced nonnegative, so the factorization is unique
// and orthogonal iteration is deterministic.  q is square, r upper triangular.
void qr_positive(const Mat& a, Mat& q, Mat& r);

// Orthonormal basis of the column span (columns of `a` assumed independent).
Mat orthonormalize(const Mat& a);

// Largest principal angle gap between two orthonormal column spans of equal
// width: || (I - q1 q1^T) q2 ||_2.  Zero iff spans agree.
double span_distance(const Mat& q1, const Mat& q2);

// Orthonormal basis of the intersection of two column spans (dim via tol).
Mat span_intersection(const Mat& a, const Mat& b, double tol = 1e-10);

// 2x2 rotation by angle t.
Eigen::Matrix2d rot2(double t);

}  // namespace cocyc
