#include <catch_amalgamated.hpp>

#include <random>

#include "fdem/error.hpp"
#include "fdem/linalg.hpp"

using namespace fdem;

namespace {

Matrix random_matrix(Eigen::Index m, Eigen::Index n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix a(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = g(rng);
    return a;
}

Vector random_vector(Eigen::Index m, std::uint64_t seed) { return random_matrix(m, 1, seed).col(0); }

}  // namespace

TEST_CASE("regularization operators")
{
    CHECK(regularization_matrix(RegularizerKind::Identity, 4).isIdentity());
    const auto d1 = regularization_matrix(RegularizerKind::FirstDifference, 4);
    REQUIRE(d1.rows() == 3);
    CHECK((d1 * Vector::Ones(4)).norm() == 0.0);
    const auto d2 = regularization_matrix(RegularizerKind::SecondDifference, 5);
    REQUIRE(d2.rows() == 3);
    CHECK((d2 * Vector::LinSpaced(5, 0.0, 4.0)).norm() < 1e-14);
    CHECK(parse_regularizer("d1") == RegularizerKind::FirstDifference);
    CHECK(parse_regularizer("I") == RegularizerKind::Identity);
    CHECK_THROWS_AS(parse_regularizer("tv"), SchemaError);
}

TEST_CASE("full-rank TSVD step is the least-squares solution")
{
    const Matrix J = random_matrix(12, 5, 1);
    const Vector r = random_vector(12, 2);
    const auto step = tsvd_step(J, r, 5);
    const Vector ls = J.colPivHouseholderQr().solve(-r);
    CHECK((step.q - ls).norm() < 1e-12 * ls.norm());
    CHECK(step.rank == 5);
    CHECK_FALSE(step.clamped);
}

TEST_CASE("underdetermined TSVD step has minimal norm")
{
    const Matrix J = random_matrix(4, 9, 3);
    const Vector r = random_vector(4, 4);
    const auto step = tsvd_step(J, r, 4);
    CHECK((J * step.q + r).norm() < 1e-12);
    // Minimal norm: orthogonal to the null space.
    CHECK((null_projector(J) * step.q).norm() < 1e-12);
    const auto over = tsvd_step(J, r, 7);
    CHECK(over.clamped);
    CHECK(over.rank == 4);
}

TEST_CASE("GSVD factors the pair")
{
    const Matrix J = random_matrix(6, 10, 5);
    const Matrix L = regularization_matrix(RegularizerKind::SecondDifference, 10);
    const auto g = gsvd(J, L);
    CHECK(g.null_l == 2);
    CHECK((g.X * g.Xinv - Matrix::Identity(10, 10)).norm() < 1e-10);
    const Vector cs = g.c.array().square() + g.s.array().square();
    CHECK((cs - Vector::Ones(10)).norm() < 1e-12);
    CHECK((J * g.X - g.U * g.c.asDiagonal()).norm() < 1e-10 * J.norm());
    // L annihilates the leading null_l columns of X.
    CHECK((L * g.X.leftCols(2)).norm() < 1e-10);
}

TEST_CASE("TGSVD with the identity reduces to TSVD")
{
    const Matrix J = random_matrix(5, 8, 6);
    const Vector r = random_vector(5, 7);
    for (std::size_t rank : {1, 3, 5}) {
        const auto a = tsvd_step(J, r, rank);
        const auto b = tgsvd_step(J, r, Matrix::Identity(8, 8), rank);
        CHECK((a.q - b.q).norm() < 1e-10 * a.q.norm());
    }
}

TEST_CASE("TGSVD keeps the null space of L")
{
    const Matrix J = random_matrix(5, 8, 8);
    const Vector r = random_vector(5, 9);
    const Matrix L = regularization_matrix(RegularizerKind::FirstDifference, 8);
    const auto step = tgsvd_step(J, r, L, 4);
    CHECK(step.rank == 4);
    CHECK((J * step.q + r).norm() < 1e-10 * r.norm());
    const auto g = gsvd(J, L);
    CHECK(g.null_l == 1);
}

TEST_CASE("truncated projectors are orthogonal projectors annihilated by the truncation")
{
    const Matrix J = random_matrix(6, 10, 10);
    Eigen::JacobiSVD<Matrix> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    for (std::size_t rank : {2, 4, 6}) {
        const Matrix P = truncated_null_projector(J, rank);
        const auto l = static_cast<Eigen::Index>(rank);
        const Matrix Jl = svd.matrixU().leftCols(l) * svd.singularValues().head(l).asDiagonal() *
                          svd.matrixV().leftCols(l).transpose();
        CHECK((P * P - P).norm() < 1e-12);
        CHECK((P - P.transpose()).norm() < 1e-12);
        CHECK((Jl * P).norm() < 1e-12 * J.norm());
        CHECK(P.trace() == Catch::Approx(10.0 - rank));
    }
    CHECK((null_projector(J) - truncated_null_projector(J, 6)).norm() < 1e-12);
}

TEST_CASE("GSVD projector is oblique and symmetric in the R metric")
{
    const Matrix J = random_matrix(6, 10, 11);
    const Matrix L = regularization_matrix(RegularizerKind::FirstDifference, 10);
    const auto g = gsvd(J, L);
    for (std::size_t rank : {1, 3, 5}) {
        const Matrix P = gsvd_null_projector(J, L, rank);
        const auto kept = static_cast<Eigen::Index>(g.null_l + rank);
        const Matrix Jl = g.U.leftCols(kept) * g.c.head(kept).asDiagonal() * g.Xinv.topRows(kept);
        const Matrix M = g.R.transpose() * g.R;
        CHECK((P * P - P).norm() < 1e-10 * std::max(1.0, P.norm()));
        CHECK((M * P - (M * P).transpose()).norm() < 1e-10 * (M * P).norm());
        CHECK((Jl * P).norm() < 1e-10 * J.norm());
    }
}

TEST_CASE("discrepancy rank picks the smallest sufficient truncation")
{
    const Matrix J = random_matrix(8, 8, 12);
    const Vector x = random_vector(8, 13);
    const Vector b = J * x;
    const Vector r = -b;  // residual at x = 0
    const auto exact = discrepancy_rank(J, r, 0.0, b.norm(), 1.1);
    CHECK(exact.rank == 8);
    const auto loose = discrepancy_rank(J, r, 0.5, b.norm(), 1.1);
    CHECK(loose.rank < 8);
    const auto q = tsvd_step(J, r, loose.rank).q;
    CHECK((J * q + r).norm() <= 1.1 * 0.5 * b.norm());
    if (loose.rank > 1) {
        const auto q1 = tsvd_step(J, r, loose.rank - 1).q;
        CHECK((J * q1 + r).norm() > 1.1 * 0.5 * b.norm());
    }
    const Matrix L = regularization_matrix(RegularizerKind::FirstDifference, 8);
    const auto gl = discrepancy_rank(J, r, L, 0.5, b.norm(), 1.1);
    const auto qg = tgsvd_step(J, r, L, gl.rank).q;
    CHECK((J * qg + r).norm() <= 1.1 * 0.5 * b.norm());
    CHECK_THROWS_AS(discrepancy_rank(J, r, -1.0, 1.0, 1.1), ValidationError);
}
