#include "ccrlab/hermitian.hpp"

#include <lapacke.h>

#include <stdexcept>
#include <string>

namespace ccrlab::ccr {

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries))
{
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
        throw std::invalid_argument("Hermitian matrix must be square and nonempty");
    const double scale = entries_.cwiseAbs().maxCoeff();
    const double defect = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-12 * scale)
        throw std::invalid_argument("matrix is not Hermitian");
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b)
{
    return {a.entries_ + b.entries_, HermitianMatrix::Trusted{}};
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b)
{
    return {a.entries_ - b.entries_, HermitianMatrix::Trusted{}};
}

HermitianMatrix operator*(double s, const HermitianMatrix& a)
{
    return {s * a.entries_, HermitianMatrix::Trusted{}};
}

namespace {

void check_info(lapack_int info, const char* routine)
{
    if (info != 0)
        throw std::runtime_error(std::string(routine) + " failed, info = " + std::to_string(info));
}

bool is_real(const Eigen::MatrixXcd& m)
{
    return m.imag().cwiseAbs().maxCoeff() == 0.0;
}

SpectralDecomposition decompose(const HermitianMatrix& a, bool vectors)
{
    const auto n = static_cast<lapack_int>(a.dim());
    const char job = vectors ? 'V' : 'N';
    SpectralDecomposition out;
    out.values.resize(n);
    if (is_real(a.matrix())) {
        Eigen::MatrixXd work = a.matrix().real();
        check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, job, 'L', n, work.data(), n, out.values.data()),
                   "dsyevd");
        if (vectors)
            out.vectors = work.cast<std::complex<double>>();
        return out;
    }
    Eigen::MatrixXcd work = a.matrix();
    check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, job, 'L', n,
                              reinterpret_cast<lapack_complex_double*>(work.data()), n,
                              out.values.data()),
               "zheevd");
    if (vectors)
        out.vectors = std::move(work);
    return out;
}

} // namespace

SpectralDecomposition eigh(const HermitianMatrix& a)
{
    return decompose(a, true);
}

Eigen::VectorXd eigvalsh(const HermitianMatrix& a)
{
    return decompose(a, false).values;
}

double operator_norm(const HermitianMatrix& a)
{
    const Eigen::VectorXd ev = eigvalsh(a);
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

} // namespace ccrlab::ccr

namespace ccrlab::ccr {

HermitianMatrix spectral_function(const HermitianMatrix& a,
                                  const std::function<double(double, double)>& f)
{
    const auto n = static_cast<lapack_int>(a.dim());
    Eigen::VectorXd values(n);
    if (is_real(a.matrix())) {
        Eigen::MatrixXd v = a.matrix().real();
        check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, v.data(), n, values.data()),
                   "dsyevd");
        const double scale = values.cwiseAbs().maxCoeff();
        Eigen::VectorXd fv = values.unaryExpr([&](double x) { return f(x, scale); });
        Eigen::MatrixXd out = (v * fv.asDiagonal()) * v.transpose();
        out = 0.5 * (out + out.transpose()).eval();
        return HermitianMatrix(out.cast<std::complex<double>>());
    }
    SpectralDecomposition d = eigh(a);
    const double scale = d.values.cwiseAbs().maxCoeff();
    Eigen::VectorXd fv = d.values.unaryExpr([&](double x) { return f(x, scale); });
    Eigen::MatrixXcd out = (d.vectors * fv.asDiagonal()) * d.vectors.adjoint();
    out = 0.5 * (out + out.adjoint()).eval();
    return HermitianMatrix(std::move(out));
}

} // namespace ccrlab::ccr
