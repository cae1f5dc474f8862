#include "fdem/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "fdem/error.hpp"

namespace fdem {

RegularizerKind parse_regularizer(std::string_view tag)
{
    if (tag == "identity" || tag == "I" || tag == "d0") return RegularizerKind::Identity;
    if (tag == "d1") return RegularizerKind::FirstDifference;
    if (tag == "d2") return RegularizerKind::SecondDifference;
    throw SchemaError("unknown regularizer \"" + std::string(tag) + "\"");
}

std::string_view to_string(RegularizerKind k) noexcept
{
    switch (k) {
    case RegularizerKind::Identity: return "identity";
    case RegularizerKind::FirstDifference: return "d1";
    case RegularizerKind::SecondDifference: return "d2";
    }
    return "?";
}

Matrix regularization_matrix(RegularizerKind kind, std::size_t dim)
{
    const auto n = static_cast<Eigen::Index>(dim);
    switch (kind) {
    case RegularizerKind::Identity: return Matrix::Identity(n, n);
    case RegularizerKind::FirstDifference: {
        if (n < 2) throw ValidationError({"first-difference regularizer needs at least two unknowns"});
        Matrix L = Matrix::Zero(n - 1, n);
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            L(i, i) = -1.0;
            L(i, i + 1) = 1.0;
        }
        return L;
    }
    case RegularizerKind::SecondDifference: {
        if (n < 3) throw ValidationError({"second-difference regularizer needs at least three unknowns"});
        Matrix L = Matrix::Zero(n - 2, n);
        for (Eigen::Index i = 0; i + 2 < n; ++i) {
            L(i, i) = 1.0;
            L(i, i + 1) = -2.0;
            L(i, i + 2) = 1.0;
        }
        return L;
    }
    }
    throw SchemaError("unknown regularizer");
}

double drop_tolerance(const Matrix& J, double s_max)
{
    return static_cast<double>(std::max(J.rows(), J.cols())) * std::numeric_limits<double>::epsilon() * s_max;
}

namespace {

using Svd = Eigen::JacobiSVD<Matrix>;
constexpr unsigned kSvdOptions = Eigen::ComputeThinU | Eigen::ComputeFullV;

std::size_t rank_of(const Vector& s, const Matrix& J)
{
    if (s.size() == 0) return 0;
    const double tol = drop_tolerance(J, s(0));
    std::size_t r = 0;
    while (r < static_cast<std::size_t>(s.size()) && s(static_cast<Eigen::Index>(r)) > tol) ++r;
    return r;
}

}  // namespace

std::size_t numerical_rank(const Matrix& J)
{
    if (J.size() == 0) return 0;
    Svd svd(J, kSvdOptions);
    return rank_of(svd.singularValues(), J);
}

StepResult tsvd_step(const Matrix& J, const Vector& r, std::size_t rank)
{
    if (J.rows() != r.size()) throw ValidationError({"residual length must match Jacobian rows"});
    StepResult out;
    out.q = Vector::Zero(J.cols());
    if (J.size() == 0) return out;
    Svd svd(J, kSvdOptions);
    const auto& s = svd.singularValues();
    const auto nr = rank_of(s, J);
    out.rank = std::min(rank, nr);
    out.clamped = rank > nr;
    for (std::size_t i = 0; i < out.rank; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        out.q -= (svd.matrixU().col(k).dot(r) / s(k)) * svd.matrixV().col(k);
    }
    return out;
}

Gsvd gsvd(const Matrix& J, const Matrix& L)
{
    if (J.cols() != L.cols()) throw ValidationError({"J and L must have the same number of columns"});
    const auto n = J.cols();
    const auto m = J.rows();
    if (m + L.rows() < n) throw ValidationError({"[J; L] must have at least as many rows as columns"});
    Matrix A(m + L.rows(), n);
    A << J, L;
    Eigen::HouseholderQR<Matrix> qr(A);
    Matrix Q = qr.householderQ() * Matrix::Identity(A.rows(), n);
    Matrix R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(R(i, i)) <= drop_tolerance(A, R.cwiseAbs().maxCoeff()))
            throw ValidationError({"[J; L] is rank deficient; the GSVD is not defined"});
    }
    const Matrix Q1 = Q.topRows(m);
    const Matrix Q2 = Q.bottomRows(L.rows());

    Gsvd g;
    // Full SVD of Q1 so that W is square even when m < n.
    Eigen::JacobiSVD<Matrix> svd(Q1, Eigen::ComputeFullU | Eigen::ComputeFullV);
    g.W = svd.matrixV();
    g.c = Vector::Zero(n);
    const auto k = std::min(m, n);
    g.c.head(k) = svd.singularValues().head(k);
    g.U = Matrix::Zero(m, n);
    g.U.leftCols(k) = svd.matrixU().leftCols(k);
    const Matrix Q2W = Q2 * g.W;
    g.s = Q2W.colwise().norm().transpose();
    g.R = R;
    g.X = R.triangularView<Eigen::Upper>().solve(g.W);
    g.Xinv = g.W.transpose() * R;
    const std::size_t rank_l = numerical_rank(L);
    g.null_l = static_cast<std::size_t>(n) - rank_l;
    return g;
}

namespace {

// Number of L-range components with a nonzero c that can be kept.
std::size_t usable_range_components(const Gsvd& g)
{
    const auto n = static_cast<std::size_t>(g.c.size());
    const double tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * 10.0;
    std::size_t count = 0;
    for (std::size_t i = g.null_l; i < n; ++i) {
        if (g.c(static_cast<Eigen::Index>(i)) > tol) ++count;
    }
    return count;
}

}  // namespace

StepResult tgsvd_step(const Matrix& J, const Vector& r, const Matrix& L, std::size_t rank)
{
    if (J.rows() != r.size()) throw ValidationError({"residual length must match Jacobian rows"});
    const auto g = gsvd(J, L);
    const auto usable = usable_range_components(g);
    StepResult out;
    out.rank = std::min(rank, usable);
    out.clamped = rank > usable;
    out.q = Vector::Zero(J.cols());
    const auto kept = g.null_l + out.rank;
    for (std::size_t i = 0; i < kept; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        if (g.c(k) == 0.0) continue;
        out.q -= (g.U.col(k).dot(r) / g.c(k)) * g.X.col(k);
    }
    return out;
}

Matrix null_projector(const Matrix& J)
{
    const auto n = J.cols();
    if (J.rows() == 0) return Matrix::Identity(n, n);
    Svd svd(J, kSvdOptions);
    return truncated_null_projector(J, rank_of(svd.singularValues(), J));
}

Matrix truncated_null_projector(const Matrix& J, std::size_t rank)
{
    const auto n = J.cols();
    if (J.rows() == 0) return Matrix::Identity(n, n);
    Svd svd(J, kSvdOptions);
    const auto keep = static_cast<Eigen::Index>(std::min(rank, rank_of(svd.singularValues(), J)));
    const Matrix V2 = svd.matrixV().rightCols(n - keep);
    return V2 * V2.transpose();
}

Matrix gsvd_null_projector(const Matrix& J, const Matrix& L, std::size_t rank)
{
    const auto g = gsvd(J, L);
    const auto n = J.cols();
    const auto kept = static_cast<Eigen::Index>(g.null_l + std::min(rank, usable_range_components(g)));
    const Matrix XD = g.X.rightCols(n - kept);
    return XD * g.Xinv.bottomRows(n - kept);
}

RankChoice discrepancy_rank(const Matrix& J, const Vector& r, double eta, double data_norm, double safety)
{
    if (!(eta >= 0.0)) throw ValidationError({"noise level must be non-negative"});
    Svd svd(J, kSvdOptions);
    const auto& s = svd.singularValues();
    const auto nr = rank_of(s, J);
    const double target = safety * eta * data_norm;
    // ||J q_l + r||^2 = ||r||^2 - sum_{i<=l} (u_i^T r)^2
    double res2 = r.squaredNorm();
    for (std::size_t l = 1; l <= nr; ++l) {
        const double beta = svd.matrixU().col(static_cast<Eigen::Index>(l - 1)).dot(r);
        res2 -= beta * beta;
        if (std::sqrt(std::max(res2, 0.0)) <= target) return {l, false};
    }
    return {nr, eta > 0.0};
}

RankChoice discrepancy_rank(const Matrix& J, const Vector& r, const Matrix& L, double eta, double data_norm,
                            double safety)
{
    if (!(eta >= 0.0)) throw ValidationError({"noise level must be non-negative"});
    const auto g = gsvd(J, L);
    const auto usable = usable_range_components(g);
    const double target = safety * eta * data_norm;
    for (std::size_t l = 1; l <= usable; ++l) {
        const auto q = tgsvd_step(J, r, L, l).q;
        if ((J * q + r).norm() <= target) return {l, false};
    }
    return {usable, eta > 0.0};
}

}  // namespace fdem
