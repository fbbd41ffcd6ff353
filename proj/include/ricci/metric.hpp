#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ricci/class_id.hpp"

namespace ricci {

// Metric components along the adapted frame at one instant. Every flow
// handled here keeps all four entries strictly positive.
struct DiagonalMetric {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double d = 1.0;

    double operator[](int i) const {
        switch (i) {
            case 0: return a;
            case 1: return b;
            case 2: return c;
            default: return d;
        }
    }
    bool positive_finite() const;
};

// Throws std::domain_error unless all entries are strictly positive and finite.
void require_valid(const DiagonalMetric& g);

// Plain 4x4 real matrix; houses frame matrices and transition matrices.
struct Mat4 {
    // row-major
    std::array<std::array<double, 4>, 4> e{};

    double operator()(int i, int j) const { return e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    double& operator()(int i, int j) { return e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

    static Mat4 identity();
    double max_abs() const;
};

Mat4 operator*(const Mat4& lhs, const Mat4& rhs);
bool approx_equal(const Mat4& lhs, const Mat4& rhs, double tol);

// Determinant by Gaussian elimination with partial pivoting.
double det(const Mat4& m);

// Inverse by Gauss-Jordan elimination with partial pivoting. Throws
// std::domain_error when |det| <= 1e-12 * max_abs^4.
Mat4 inverse(const Mat4& m);

using FrameMatrix = Mat4;
using TransitionMatrix = Mat4;

// Symmetric 4x4 metric component matrix; stores the upper triangle only so
// symmetry cannot drift.
struct SymmetricMetric4 {
    // order: (0,0)(0,1)(0,2)(0,3)(1,1)(1,2)(1,3)(2,2)(2,3)(3,3)
    std::array<double, 10> tri{};

    static SymmetricMetric4 zero() { return {}; }
    static SymmetricMetric4 from_diagonal(const DiagonalMetric& g);

    double operator()(int i, int j) const { return tri[index(i, j)]; }
    double& operator()(int i, int j) { return tri[index(i, j)]; }

    static std::size_t index(int i, int j);
};

SymmetricMetric4 operator-(const SymmetricMetric4& lhs, const SymmetricMetric4& rhs);

// Squared norm |h|^2_g of a symmetric tensor h in a diagonal metric g:
//   sum_i (h_ii/g_ii)^2 + 2 sum_{i<j} h_ij^2/(g_ii g_jj).
double norm_sq(const DiagonalMetric& g, const SymmetricMetric4& h);

// Squared norm |h|^2_g for a general positive-definite g, via the full
// contraction g^{ik} g^{jl} h_ij h_kl. Used when measuring in the second
// (transported, generally non-diagonal) metric.
double norm_sq_general(const SymmetricMetric4& g, const SymmetricMetric4& h);

// Transition matrix Lambda * LambdaPrime^{-1} between two diagonalizing
// frames, via the pivoted 4x4 inverse.
TransitionMatrix frame_quotient(const FrameMatrix& lam, const FrameMatrix& lam_prime);

// Components of a metric diagonal in frame beta transported to frame alpha:
// A * diag(d) * A^T. Symmetric by construction and positive definite for
// invertible A.
SymmetricMetric4 congruence_transport(const TransitionMatrix& t_matrix, const DiagonalMetric& d);

// Reduced frame-difference parameters of the transition matrix; arity is
// fixed per class.
struct FrameParams {
    ClassId cls = ClassId::A1;
    std::vector<double> values;
};

std::size_t frame_arity(ClassId id);
FrameParams zero_frame(ClassId id);

// Indices (into FrameParams::values) of the parameters that membership
// analysis forces to vanish; empty for classes with no such condition.
std::vector<std::size_t> excluded_frame_indices(ClassId id);

// Throws std::invalid_argument naming the offending entry when m does not
// conform to the class's diagonalizing-frame shape (fixed zeros/ones within
// 1e-12, repeated entries equal within 1e-12).
void check_frame_shape(ClassId id, const FrameMatrix& m);

// Free entries (a1..a6 slots; unused slots zero) of a shape-conforming frame.
std::array<double, 6> frame_entries(ClassId id, const FrameMatrix& m);

// Reduced parameters of Lambda * LambdaPrime^{-1} in closed form, verified at
// runtime against the computed quotient.
FrameParams reduced_params(ClassId id, const FrameMatrix& lam, const FrameMatrix& lam_prime);

// Transition matrix rebuilt from reduced parameters (the class's pattern of
// ones, zeros and parameter slots).
TransitionMatrix transition_from_params(const FrameParams& params);

// Term-by-term expansion of |gbar - g|^2_g when gbar is diagonal (gbar_beta)
// in the second frame and transported by the class's transition pattern with
// the given reduced parameters. The sum of the terms equals
// norm_sq(g, transport - diag(g)); term count and grouping are fixed per
// class (7/10/8/10/10/9/10/5 for A2iv/A4/A5/A6/A7i/A7ii/A8/A9ii, 4 for the
// purely diagonal classes).
std::vector<double> norm_expansion_terms(ClassId id, const FrameParams& frame,
                                         const DiagonalMetric& g, const DiagonalMetric& gbar_beta);

}  // namespace ricci
