#pragma once

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace porder {

enum class SpectralErrc { numerical_failure, ill_separated_cluster, degenerate_input, dimension };

class SpectralError : public std::runtime_error {
public:
    SpectralError(SpectralErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    SpectralErrc code() const noexcept { return code_; }

private:
    SpectralErrc code_;
};

struct SpectralInfo {
    double rho = 0.0;
    Eigen::MatrixXd dominant_projector;
    double subdominant_radius = 0.0;
};

namespace detail {

inline thread_local double schur_select_threshold = 0.0;

inline lapack_logical select_dominant(const double* wr, const double* wi) {
    return std::hypot(*wr, *wi) >= schur_select_threshold;
}

struct Schur {
    Eigen::MatrixXd T, U;
    std::vector<double> modulus;
    lapack_int sdim = 0;
};

inline Schur real_schur(const Eigen::MatrixXd& J, bool sort) {
    if (J.rows() != J.cols() || J.rows() == 0) throw SpectralError(SpectralErrc::dimension, "matrix must be square");
    if (J.rows() > 64) throw SpectralError(SpectralErrc::dimension, "matrix larger than 64x64");
    if (!J.allFinite()) throw SpectralError(SpectralErrc::degenerate_input, "matrix has non-finite entries");
    const lapack_int n = static_cast<lapack_int>(J.rows());
    Schur s;
    s.T = J;
    s.U.resize(n, n);
    std::vector<double> wr(n), wi(n);
    lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', sort ? 'S' : 'N', sort ? select_dominant : nullptr, n,
                                    s.T.data(), n, &s.sdim, wr.data(), wi.data(), s.U.data(), n);
    if (info != 0)
        throw SpectralError(SpectralErrc::numerical_failure, "dgees failed, info = " + std::to_string(info));
    for (lapack_int i = 0; i < n; ++i) s.modulus.push_back(std::hypot(wr[i], wi[i]));
    return s;
}

}  // namespace detail

inline double spectral_radius(const Eigen::MatrixXd& J) {
    auto s = detail::real_schur(J, false);
    return *std::max_element(s.modulus.begin(), s.modulus.end());
}

// Spectral projector onto the invariant subspace of eigenvalues with |lambda| >= rho (1 - cluster_tol),
// from the reordered Schur form J = U T U^T and the Sylvester equation T11 X - X T22 = T12.
inline SpectralInfo dominant_projector(const Eigen::MatrixXd& J, double cluster_tol = 1e-6) {
    auto plain = detail::real_schur(J, false);
    const Eigen::Index n = J.rows();
    SpectralInfo info;
    info.rho = *std::max_element(plain.modulus.begin(), plain.modulus.end());
    if (info.rho == 0.0) {
        info.dominant_projector = Eigen::MatrixXd::Identity(n, n);
        return info;
    }
    const double thresh = info.rho * (1.0 - cluster_tol);
    const double guard = info.rho * (1.0 - 10.0 * cluster_tol);
    for (double m : plain.modulus) {
        if (m < thresh && m >= guard)
            throw SpectralError(SpectralErrc::ill_separated_cluster,
                                "eigenvalue modulus " + std::to_string(m) + " lies near the dominant cluster");
        if (m < thresh) info.subdominant_radius = std::max(info.subdominant_radius, m);
    }
    detail::schur_select_threshold = thresh;
    auto s = detail::real_schur(J, true);
    const Eigen::Index k = s.sdim;
    if (k == n) {
        info.dominant_projector = Eigen::MatrixXd::Identity(n, n);
        return info;
    }
    if (k == 0) throw SpectralError(SpectralErrc::numerical_failure, "no eigenvalue selected for the dominant cluster");
    Eigen::MatrixXd T11 = s.T.topLeftCorner(k, k);
    Eigen::MatrixXd T22 = s.T.bottomRightCorner(n - k, n - k);
    Eigen::MatrixXd X = s.T.topRightCorner(k, n - k);
    double scale = 1.0;
    lapack_int rc = LAPACKE_dtrsyl(LAPACK_COL_MAJOR, 'N', 'N', -1, static_cast<lapack_int>(k),
                                   static_cast<lapack_int>(n - k), T11.data(), static_cast<lapack_int>(k), T22.data(),
                                   static_cast<lapack_int>(n - k), X.data(), static_cast<lapack_int>(k), &scale);
    if (rc < 0 || scale == 0.0)
        throw SpectralError(SpectralErrc::numerical_failure, "dtrsyl failed, info = " + std::to_string(rc));
    X /= scale;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    B.topLeftCorner(k, k).setIdentity();
    B.topRightCorner(k, n - k) = X;
    info.dominant_projector = s.U * B * s.U.transpose();
    return info;
}

inline bool general_position_check(const SpectralInfo& info, const Eigen::VectorXd& xi0, double tol) {
    if (xi0.size() != info.dominant_projector.cols())
        throw SpectralError(SpectralErrc::dimension, "vector dimension does not match the projector");
    const double nx = xi0.norm();
    if (nx == 0.0) throw SpectralError(SpectralErrc::degenerate_input, "zero initial error");
    return (info.dominant_projector * xi0).norm() > tol * nx;
}

}  // namespace porder
