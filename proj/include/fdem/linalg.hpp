#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

namespace fdem {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class RegularizerKind { Identity, FirstDifference, SecondDifference };

[[nodiscard]] RegularizerKind parse_regularizer(std::string_view tag);
[[nodiscard]] std::string_view to_string(RegularizerKind k) noexcept;
[[nodiscard]] Matrix regularization_matrix(RegularizerKind kind, std::size_t dim);

// Singular values below max(rows, cols) * eps * s_max count as zero.
[[nodiscard]] double drop_tolerance(const Matrix& J, double s_max);
[[nodiscard]] std::size_t numerical_rank(const Matrix& J);

struct StepResult {
    Vector q;
    std::size_t rank = 0;  // truncation actually used
    bool clamped = false;  // requested rank exceeded the numerical rank
};

// Minimizer of ||J_l q + r|| of least norm, J_l the rank-l truncated SVD.
[[nodiscard]] StepResult tsvd_step(const Matrix& J, const Vector& r, std::size_t rank);

// Generalized SVD of the pair (J, L) with [J; L] of full column rank:
// J X = U diag(c), L X = V diag(s), c^2 + s^2 = 1, components sorted by
// decreasing c / s. The first null_l components span the null space of L.
struct Gsvd {
    Matrix U;
    Vector c;
    Vector s;
    Matrix W;  // orthogonal, X = R^{-1} W
    Matrix R;  // triangular factor of [J; L]
    Matrix X;
    Matrix Xinv;
    std::size_t null_l = 0;
};

[[nodiscard]] Gsvd gsvd(const Matrix& J, const Matrix& L);

// rank counts the L-range components kept; the L-null components are always
// kept. With L = I this is the TSVD step.
[[nodiscard]] StepResult tgsvd_step(const Matrix& J, const Vector& r, const Matrix& L, std::size_t rank);

// Orthogonal projector onto the numerical null space of J.
[[nodiscard]] Matrix null_projector(const Matrix& J);
// Orthogonal projector onto the null space of the rank-l truncation of J.
[[nodiscard]] Matrix truncated_null_projector(const Matrix& J, std::size_t rank);
// Projector onto the null space of the TGSVD truncation of J, along the kept
// components. Symmetric in the inner product defined by R^T R.
[[nodiscard]] Matrix gsvd_null_projector(const Matrix& J, const Matrix& L, std::size_t rank);

struct RankChoice {
    std::size_t rank = 0;
    bool fallback = false;  // no rank met the target; the largest was used
};

// Smallest l with ||J q_l + r|| <= safety * eta * data_norm.
[[nodiscard]] RankChoice discrepancy_rank(const Matrix& J, const Vector& r, double eta, double data_norm,
                                          double safety);
[[nodiscard]] RankChoice discrepancy_rank(const Matrix& J, const Vector& r, const Matrix& L, double eta,
                                          double data_norm, double safety);

}  // namespace fdem
