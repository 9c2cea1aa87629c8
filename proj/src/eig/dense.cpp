#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "subrad/eig.hpp"

#include <chrono>
#include <limits>
#include <string>

namespace subrad {

namespace {

void check_square(const Mat& h, Index cap) {
    if (h.rows() != h.cols()) throw std::invalid_argument("dense eigensolver: matrix is not square");
    if (h.rows() < 1) throw std::invalid_argument("dense eigensolver: empty matrix");
    if (h.rows() > cap)
        throw std::length_error("dense eigensolver: dimension " + std::to_string(h.rows()) +
                                " exceeds cap " + std::to_string(cap));
}

void run_zgeev(const Mat& h, Vec& values, Mat* vectors) {
    Mat a = h;
    const lapack_int n = static_cast<lapack_int>(a.rows());
    values.resize(n);
    Mat vr;
    if (vectors) vr.resize(n, n);
    lapack_complex_double dummy{};
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, a.data(), n,
                                          values.data(), &dummy, 1, vectors ? vr.data() : &dummy,
                                          vectors ? n : 1);
    if (info < 0) throw std::invalid_argument("zgeev: illegal argument " + std::to_string(-info));
    if (info > 0)
        throw ConvergenceError("zgeev: QR iteration failed, " + std::to_string(info) +
                                   " eigenvalues unconverged",
                               std::numeric_limits<double>::quiet_NaN(), static_cast<int>(info));
    if (vectors) *vectors = std::move(vr);
}

}  // namespace

void eig_dense_raw(const Mat& h, Vec& values, Mat& vectors) {
    check_square(h, h.rows());
    run_zgeev(h, values, &vectors);
}

Vec eigenvalues_dense(const Mat& h, Index cap) {
    check_square(h, cap);
    Vec values;
    run_zgeev(h, values, nullptr);
    return values;
}

Spectrum eig_dense_all(const Mat& h, Index cap) {
    check_square(h, cap);
    const auto t0 = std::chrono::steady_clock::now();
    Vec values;
    Mat vectors;
    run_zgeev(h, values, &vectors);
    const Mat hv = h * vectors;
    Spectrum s;
    s.pairs.resize(static_cast<std::size_t>(values.size()));
    for (Index i = 0; i < values.size(); ++i) {
        auto& p = s.pairs[static_cast<std::size_t>(i)];
        p.lambda = values(i);
        p.vector = vectors.col(i);
        p.residual = (hv.col(i) - values(i) * vectors.col(i)).norm();
    }
    s.sort();
    s.meta.mode = SolverMode::DenseAll;
    s.meta.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

}  // namespace subrad
