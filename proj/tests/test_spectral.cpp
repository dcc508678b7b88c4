#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "porder/experiments.hpp"
#include "porder/spectral.hpp"

using namespace porder;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd diag(std::initializer_list<double> d) {
    VectorXd v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v(i++) = x;
    return v.asDiagonal();
}

void expect_projector(const MatrixXd& J, const MatrixXd& P) {
    EXPECT_LE((P * P - P).norm(), 1e-10);
    EXPECT_LE((P * J - J * P).norm(), 1e-10);
}

}  // namespace

TEST(SpectralRadius, Examples) {
    EXPECT_NEAR(spectral_radius(diag({0.5, 0.2})), 0.5, 1e-12);
    MatrixXd N(2, 2);
    N << 0, 1, 0, 0;
    EXPECT_NEAR(spectral_radius(N), 0.0, 1e-12);
    const double th = 0.9;
    MatrixXd R(2, 2);
    R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    EXPECT_NEAR(spectral_radius(0.7 * R), 0.7, 1e-12);
}

TEST(SpectralRadius, RejectsBadInput) {
    EXPECT_THROW(spectral_radius(MatrixXd(2, 3)), SpectralError);
    EXPECT_THROW(spectral_radius(MatrixXd::Identity(65, 65)), SpectralError);
    MatrixXd bad = MatrixXd::Identity(2, 2);
    bad(0, 1) = std::nan("");
    try {
        (void)spectral_radius(bad);
        FAIL();
    } catch (const SpectralError& e) {
        EXPECT_EQ(e.code(), SpectralErrc::degenerate_input);
    }
}

TEST(DominantProjector, Diagonal) {
    MatrixXd J = diag({0.5, 0.2});
    auto info = dominant_projector(J);
    EXPECT_NEAR(info.rho, 0.5, 1e-12);
    EXPECT_NEAR(info.subdominant_radius, 0.2, 1e-12);
    EXPECT_LE((info.dominant_projector - diag({1, 0})).norm(), 1e-10);
    expect_projector(J, info.dominant_projector);
}

TEST(DominantProjector, JordanBlockIsIdentity) {
    MatrixXd J(2, 2);
    J << 0.5, 1, 0, 0.5;
    auto info = dominant_projector(J);
    EXPECT_LE((info.dominant_projector - MatrixXd::Identity(2, 2)).norm(), 1e-10);
    EXPECT_EQ(info.subdominant_radius, 0.0);
}

TEST(DominantProjector, SharedModulus) {
    MatrixXd J = diag({0.9, -0.9, 0.1});
    auto info = dominant_projector(J);
    EXPECT_LE((info.dominant_projector - diag({1, 1, 0})).norm(), 1e-10);
    EXPECT_NEAR(info.subdominant_radius, 0.1, 1e-12);
}

TEST(DominantProjector, IllSeparatedCluster) {
    MatrixXd J = diag({0.9, 0.9 * (1 - 5e-6), 0.1});
    try {
        (void)dominant_projector(J);
        FAIL();
    } catch (const SpectralError& e) {
        EXPECT_EQ(e.code(), SpectralErrc::ill_separated_cluster);
    }
}

TEST(DominantProjector, NilpotentIsIdentity) {
    MatrixXd N = MatrixXd::Zero(3, 3);
    N(0, 1) = N(1, 2) = 1;
    auto info = dominant_projector(N);
    EXPECT_EQ(info.rho, 0.0);
    EXPECT_LE((info.dominant_projector - MatrixXd::Identity(3, 3)).norm(), 1e-12);
}

TEST(SpectralProperty, ProjectorResidualsOnRandomMatrices) {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> dim(1, 8);
    int tested = 0;
    for (int t = 0; t < 200; ++t) {
        const int n = dim(rng);
        MatrixXd J(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) J(i, j) = g(rng);
        SpectralInfo info;
        try {
            info = dominant_projector(J);
        } catch (const SpectralError& e) {
            ASSERT_EQ(e.code(), SpectralErrc::ill_separated_cluster);
            continue;
        }
        expect_projector(J, info.dominant_projector);
        EXPECT_LT(info.subdominant_radius, info.rho);
        // The projector's rank equals the number of eigenvalues on the dominant circle.
        Eigen::EigenSolver<MatrixXd> es(J);
        int on_circle = 0;
        for (int i = 0; i < n; ++i) on_circle += std::abs(es.eigenvalues()(i)) >= info.rho * (1 - 1e-6);
        EXPECT_NEAR(info.dominant_projector.trace(), on_circle, 1e-8);
        ++tested;
    }
    EXPECT_GT(tested, 150);
}

TEST(SpectralProperty, RadiusOfTransposeAgrees) {
    std::mt19937_64 rng(43);
    std::normal_distribution<double> g;
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + t % 10;
        MatrixXd J(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) J(i, j) = g(rng);
        EXPECT_NEAR(spectral_radius(J), spectral_radius(J.transpose()), 1e-10 * (1 + spectral_radius(J)));
    }
}

TEST(GeneralPosition, Examples) {
    auto info = dominant_projector(diag({0.5, 0.2}));
    EXPECT_TRUE(general_position_check(info, VectorXd::Ones(2), 0.1));
    VectorXd e1(2);
    e1 << 0, 1;
    EXPECT_FALSE(general_position_check(info, e1, 0.1));
    EXPECT_THROW(general_position_check(info, VectorXd::Zero(2), 0.1), SpectralError);
    EXPECT_THROW(general_position_check(info, VectorXd::Ones(3), 0.1), SpectralError);
}

// Starting in the subdominant eigenspace, the iteration sees the smaller eigenvalue.
TEST(GeneralPosition, SubdominantStartConvergesFaster) {
    auto p = detail::linear_problem(diag({0.9, 0.1}));
    RunControl c;
    c.max_iter = 200;
    c.stop_lambda = 1e9;
    auto h = fixed_point_iterate(p, {XReal(0L), XReal(1L)}, c);
    double pb = p_base_estimate(errors_from_iterates(h.x, p.fixed_point, Norm::l2), PowerFunction::linear());
    EXPECT_NEAR(pb, 0.1, 1e-2);
}

TEST(SpectralProperty, KthRootMatchesSpectralRadius) {
    std::mt19937_64 rng(47);
    TailWindow w{5, 10, 8};
    RunControl c;
    c.max_iter = 200;
    c.stop_lambda = 1e9;
    c.divergence_window = 1 << 30;
    for (int t = 0; t < 10; ++t) {
        auto cs = detail::random_linear_case(rng, 6, 0.1, 0.9, 0.25);
        auto p = detail::linear_problem(cs.J);
        XVec x0;
        for (Eigen::Index i = 0; i < cs.x0.size(); ++i) x0.push_back(XReal(cs.x0(i)));
        auto h = fixed_point_iterate(p, x0, c);
        for (Norm nrm : {Norm::l1, Norm::l2, Norm::linf}) {
            double pb = p_base_estimate(errors_from_iterates(h.x, p.fixed_point, nrm), PowerFunction::linear(), w);
            EXPECT_NEAR(pb, cs.rho, 1e-2) << "case " << t << " " << to_string(nrm);
        }
    }
}
