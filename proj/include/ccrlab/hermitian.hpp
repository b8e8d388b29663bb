#pragma once

#include <Eigen/Dense>

#include <functional>

namespace ccrlab::ccr {

/// Dense Hermitian matrix; construction checks ||A - A^H||_max <= 1e-12 ||A||_max.
class HermitianMatrix {
public:
    explicit HermitianMatrix(Eigen::MatrixXcd entries);

    const Eigen::MatrixXcd& matrix() const { return entries_; }
    Eigen::Index dim() const { return entries_.rows(); }

    friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
    friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
    friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

private:
    struct Trusted {};
    HermitianMatrix(Eigen::MatrixXcd entries, Trusted) : entries_(std::move(entries)) {}

    Eigen::MatrixXcd entries_;
};

struct SpectralDecomposition {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXcd vectors;  // columns
};

/// Full eigendecomposition (LAPACK zheevd, or dsyevd when A is real).
SpectralDecomposition eigh(const HermitianMatrix& a);
Eigen::VectorXd eigvalsh(const HermitianMatrix& a);

/// f(A) = V f(Lambda) V^H, symmetrized. f also receives max |Lambda|.
HermitianMatrix spectral_function(const HermitianMatrix& a,
                                  const std::function<double(double, double)>& f);

/// Largest absolute eigenvalue.
double operator_norm(const HermitianMatrix& a);

} // namespace ccrlab::ccr
