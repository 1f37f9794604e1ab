#pragma once

#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "ncmatsaev/error.hpp"

namespace ncm {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Exponent p in [1, inf] together with its conjugate p* (1/p + 1/p* = 1).
/// Infinity is a distinct state, never a large finite double.
class PExponent {
public:
    explicit PExponent(double p);

    static PExponent infinity() { return PExponent(std::numeric_limits<double>::infinity()); }

    [[nodiscard]] double value() const noexcept { return p_; }
    [[nodiscard]] bool is_infinite() const noexcept { return infinite_; }
    [[nodiscard]] bool is_one() const noexcept { return !infinite_ && p_ == 1.0; }
    [[nodiscard]] bool is_two() const noexcept { return !infinite_ && p_ == 2.0; }
    /// True for 1 < p < inf, the range where duality maps are single valued.
    [[nodiscard]] bool is_interior() const noexcept { return !infinite_ && p_ > 1.0; }
    [[nodiscard]] PExponent conjugate() const;

    friend bool operator==(const PExponent& a, const PExponent& b) noexcept {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.p_ == b.p_);
    }

private:
    double p_;
    bool infinite_;
};

struct SingularSpectrum {
    RealVector values; // nonincreasing, nonnegative
    ComplexMatrix left;
    ComplexMatrix right;
};

/// Full SVD M = U diag(values) V*. Throws ErrorKind::input on non-finite entries.
SingularSpectrum singular_values(const ComplexMatrix& m);

/// Singular values only, same ordering.
RealVector singular_value_list(const ComplexMatrix& m);

double schatten_norm(const ComplexMatrix& m, const PExponent& p);
double lp_norm(const ComplexVector& v, const PExponent& p);

/// (sum_i s_i^p)^(1/p) for a list of nonnegative reals, max for p = inf.
double lp_norm_of_magnitudes(const RealVector& s, const PExponent& p);

/// Support functional of v in l^p: unit in l^{p*} and Re<w, v> = ||v||_p.
ComplexVector duality_map_vector(const ComplexVector& v, const PExponent& p);

/// Schatten analogue: M = U S V* maps to U S^{p-1} V* / ||M||_p^{p-1}.
ComplexMatrix duality_map_matrix(const ComplexMatrix& m, const PExponent& p);

/// Hermitian within tol * ||M||_F and smallest eigenvalue >= -tol * ||M||_F.
bool is_psd(const ComplexMatrix& m, double tol = 1e-9);
bool is_psd(const RealMatrix& m, double tol = 1e-9);

/// z / |z|, with the phase of 0 taken to be 0.
inline cplx phase(cplx z) {
    const double r = std::abs(z);
    return r == 0.0 ? cplx{0.0, 0.0} : z / r;
}

void require_finite(const ComplexMatrix& m, const char* what);

} // namespace ncm
