#include "ncmatsaev/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <lapacke.h>

namespace ncm {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::input: return "input error";
    case ErrorKind::invalid_exponent: return "invalid exponent";
    case ErrorKind::undefined_direction: return "undefined direction";
    case ErrorKind::routing: return "exponent routing error";
    case ErrorKind::certification: return "certification error";
    case ErrorKind::resource: return "resource error";
    case ErrorKind::accuracy: return "accuracy error";
    case ErrorKind::window: return "window error";
    case ErrorKind::precondition: return "precondition error";
    case ErrorKind::out_of_scope: return "out of scope";
    case ErrorKind::axiom: return "group axiom violated";
    }
    return "error";
}

PExponent::PExponent(double p) : p_(p), infinite_(std::isinf(p) && p > 0) {
    require(!std::isnan(p) && p >= 1.0, ErrorKind::invalid_exponent,
            "exponent p must lie in [1, inf], got " + std::to_string(p));
}

PExponent PExponent::conjugate() const {
    if (infinite_) {
        return PExponent(1.0);
    }
    if (p_ == 1.0) {
        return infinity();
    }
    return PExponent(p_ / (p_ - 1.0));
}

void require_finite(const ComplexMatrix& m, const char* what) {
    require(m.allFinite(), ErrorKind::input, std::string(what) + ": non-finite entries");
}

SingularSpectrum singular_values(const ComplexMatrix& m) {
    require_finite(m, "singular_values");
    if (m.size() == 0) {
        return {RealVector(0), ComplexMatrix(m.rows(), 0), ComplexMatrix(m.cols(), 0)};
    }
    const auto rows = static_cast<lapack_int>(m.rows());
    const auto cols = static_cast<lapack_int>(m.cols());
    ComplexMatrix work = m;
    RealVector s(std::min(m.rows(), m.cols()));
    ComplexMatrix u(m.rows(), m.rows());
    ComplexMatrix vt(m.cols(), m.cols());
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', rows, cols,
                                           reinterpret_cast<lapack_complex_double*>(work.data()), rows, s.data(),
                                           reinterpret_cast<lapack_complex_double*>(u.data()), rows,
                                           reinterpret_cast<lapack_complex_double*>(vt.data()), cols);
    if (info != 0) {
        // Divide and conquer failed to converge; Jacobi always does.
        Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        return {svd.singularValues(), svd.matrixU(), svd.matrixV()};
    }
    return {std::move(s), std::move(u), vt.adjoint()};
}

RealVector singular_value_list(const ComplexMatrix& m) {
    require_finite(m, "singular_values");
    if (m.size() == 0) {
        return RealVector(0);
    }
    const auto rows = static_cast<lapack_int>(m.rows());
    const auto cols = static_cast<lapack_int>(m.cols());
    ComplexMatrix work = m;
    RealVector s(std::min(m.rows(), m.cols()));
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols,
                                           reinterpret_cast<lapack_complex_double*>(work.data()), rows, s.data(),
                                           nullptr, rows, nullptr, cols);
    if (info != 0) {
        return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
    }
    return s;
}

double lp_norm_of_magnitudes(const RealVector& s, const PExponent& p) {
    if (s.size() == 0) {
        return 0.0;
    }
    const double top = s.cwiseAbs().maxCoeff();
    if (p.is_infinite() || top == 0.0) {
        return top;
    }
    if (p.is_one()) {
        return s.cwiseAbs().sum();
    }
    // Scale by the largest entry so that s^p cannot overflow or underflow.
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        acc += std::pow(std::abs(s[i]) / top, p.value());
    }
    return top * std::pow(acc, 1.0 / p.value());
}

double schatten_norm(const ComplexMatrix& m, const PExponent& p) {
    if (m.size() == 0) {
        return 0.0;
    }
    require_finite(m, "schatten_norm");
    return lp_norm_of_magnitudes(singular_value_list(m), p);
}

double lp_norm(const ComplexVector& v, const PExponent& p) {
    return lp_norm_of_magnitudes(v.cwiseAbs(), p);
}

ComplexVector duality_map_vector(const ComplexVector& v, const PExponent& p) {
    require(p.is_interior(), ErrorKind::routing, "duality_map_vector requires 1 < p < inf");
    const double norm = lp_norm(v, p);
    require(norm > 0.0, ErrorKind::undefined_direction, "duality map of the zero vector");
    ComplexVector w(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double r = std::abs(v[i]) / norm;
        w[i] = phase(v[i]) * std::pow(r, p.value() - 1.0);
    }
    return w;
}

ComplexMatrix duality_map_matrix(const ComplexMatrix& m, const PExponent& p) {
    require(p.is_interior(), ErrorKind::routing, "duality_map_matrix requires 1 < p < inf");
    const auto spec = singular_values(m);
    const double norm = lp_norm_of_magnitudes(spec.values, p);
    require(norm > 0.0, ErrorKind::undefined_direction, "duality map of the zero matrix");
    const Eigen::Index k = spec.values.size();
    RealVector powered(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        powered[i] = std::pow(spec.values[i] / norm, p.value() - 1.0);
    }
    return spec.left.leftCols(k) * powered.asDiagonal() * spec.right.leftCols(k).adjoint();
}

bool is_psd(const ComplexMatrix& m, double tol) {
    require(m.rows() == m.cols(), ErrorKind::input, "is_psd: matrix must be square");
    require_finite(m, "is_psd");
    const double scale = m.norm();
    if (scale == 0.0) {
        return true;
    }
    if ((m - m.adjoint()).norm() > tol * scale) {
        return false;
    }
    const ComplexMatrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff() >= -tol * scale;
}

bool is_psd(const RealMatrix& m, double tol) { return is_psd(ComplexMatrix(m.cast<cplx>()), tol); }

} // namespace ncm
