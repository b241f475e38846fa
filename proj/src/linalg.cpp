#include "sigforge/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "sigforge/errors.hpp"

namespace sigforge::linalg {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw DimensionMismatch(msg);
}

void check_symmetric(const RealMatrix& a) {
    require(a.rows == a.cols, "matrix must be square");
    double scale = 0.0, asym = 0.0;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) {
            scale = std::max(scale, std::abs(a(i, j)));
            asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
        }
    if (asym > 1e-10 * std::max(scale, 1e-14))
        throw DimensionMismatch("matrix is not symmetric");
}

}  // namespace

RealMatrix transpose(const RealMatrix& m) {
    RealMatrix t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = std::conj(m(i, j));
    return t;
}

RealMatrix multiply(const RealMatrix& a, const RealMatrix& b) {
    require(a.cols == b.rows, "multiply: inner dimensions differ");
    RealMatrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.cols == b.rows, "multiply: inner dimensions differ");
    ComplexMatrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0, 0)) continue;
            for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<cplx> multiply(const ComplexMatrix& a, const std::vector<cplx>& x) {
    require(a.cols == static_cast<int>(x.size()), "multiply: vector length differs");
    std::vector<cplx> y(a.rows, cplx(0, 0));
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) y[i] += a(i, j) * x[j];
    return y;
}

RealMatrix real_part(const ComplexMatrix& m) {
    RealMatrix r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i].real();
    return r;
}

ComplexMatrix hermitianize(const ComplexMatrix& m) {
    require(m.rows == m.cols, "hermitianize: matrix must be square");
    ComplexMatrix h(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return h;
}

double frobenius(const RealMatrix& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

double frobenius(const ComplexMatrix& m) {
    double s = 0.0;
    for (const cplx& v : m.a) s += std::norm(v);
    return std::sqrt(s);
}

RealMatrix cholesky_upper(const RealMatrix& a) {
    check_symmetric(a);
    const int n = a.rows;
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));

    RealMatrix b(n, n);
    for (int i = 0; i < n; ++i) {
        double pivot = a(i, i);
        for (int k = 0; k < i; ++k) pivot -= b(k, i) * b(k, i);
        if (pivot <= 1e-14 * std::max(max_diag, 1.0e-300))
            throw NotPositiveDefinite("cholesky_upper: pivot " + std::to_string(pivot) +
                                      " at row " + std::to_string(i));
        b(i, i) = std::sqrt(pivot);
        for (int j = i + 1; j < n; ++j) {
            double s = a(i, j);
            for (int k = 0; k < i; ++k) s -= b(k, i) * b(k, j);
            b(i, j) = s / b(i, i);
        }
    }
    return b;
}

ComplexMatrix cholesky_upper_hermitian(const ComplexMatrix& a) {
    require(a.rows == a.cols, "cholesky_upper_hermitian: matrix must be square");
    const int n = a.rows;
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i).real()));

    ComplexMatrix u(n, n);
    for (int i = 0; i < n; ++i) {
        double pivot = a(i, i).real();
        for (int k = 0; k < i; ++k) pivot -= std::norm(u(k, i));
        if (pivot <= 1e-14 * std::max(max_diag, 1.0e-300))
            throw NotPositiveDefinite("cholesky_upper_hermitian: pivot " +
                                      std::to_string(pivot) + " at row " + std::to_string(i));
        u(i, i) = std::sqrt(pivot);
        for (int j = i + 1; j < n; ++j) {
            cplx s = a(i, j);
            for (int k = 0; k < i; ++k) s -= std::conj(u(k, i)) * u(k, j);
            u(i, j) = s / u(i, i).real();
        }
    }
    return u;
}

EigenDecomposition jacobi_eigen(const RealMatrix& a_in) {
    check_symmetric(a_in);
    const int n = a_in.rows;
    RealMatrix a = a_in;
    RealMatrix v = RealMatrix::identity(n);

    const int max_sweeps = 100;
    const double fnorm = std::max(frobenius(a), 1e-300);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
        if (std::sqrt(off) <= 1e-14 * fnorm) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i) < a(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = RealMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

void canonicalize_sign(std::vector<double>& v) {
    double maxmag = 0.0;
    for (double x : v) maxmag = std::max(maxmag, std::abs(x));
    // First entry at the max magnitude decides, with a round-off cushion so
    // ties resolve the same way however the vector was computed.
    size_t imax = 0;
    for (size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) >= maxmag * (1.0 - 1e-9)) {
            imax = i;
            break;
        }
    if (v[imax] < 0.0)
        for (double& x : v) x = -x;
}

namespace {

double residual_norm(const RealMatrix& a, const std::vector<double>& v, double lambda) {
    double s = 0.0;
    for (int i = 0; i < a.rows; ++i) {
        double r = -lambda * v[i];
        for (int j = 0; j < a.cols; ++j) r += a(i, j) * v[j];
        s += r * r;
    }
    return std::sqrt(s);
}

EigenPair max_eigenpair_jacobi(const RealMatrix& a) {
    EigenDecomposition eig = jacobi_eigen(a);
    const int n = a.rows;
    EigenPair p;
    p.value = eig.values[n - 1];
    p.vector.resize(n);
    for (int i = 0; i < n; ++i) p.vector[i] = eig.vectors(i, n - 1);
    canonicalize_sign(p.vector);
    return p;
}

}  // namespace

EigenPair max_eigenpair(const RealMatrix& a) {
    check_symmetric(a);
    const int n = a.rows;

    // Shift by the infinity norm so the algebraically largest eigenvalue is
    // also the one of largest modulus.
    double shift = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::abs(a(i, j));
        shift = std::max(shift, row);
    }

    // Deterministic quasi-random start to avoid an unlucky orthogonal seed.
    std::vector<double> v(n);
    uint64_t state = 0x9e3779b97f4a7c15ULL;
    for (int i = 0; i < n; ++i) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        v[i] = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    double nv = 0.0;
    for (double x : v) nv += x * x;
    nv = std::sqrt(nv);
    for (double& x : v) x /= nv;

    const int cap = 10000;
    double lambda = 0.0;
    for (int it = 0; it < cap; ++it) {
        std::vector<double> w(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double s = shift * v[i];
            for (int j = 0; j < n; ++j) s += a(i, j) * v[j];
            w[i] = s;
        }
        double nw = 0.0;
        for (double x : w) nw += x * x;
        nw = std::sqrt(nw);
        if (nw <= 1e-300) break;  // shifted matrix annihilated v; degenerate
        for (double& x : w) x /= nw;

        // Rayleigh quotient on the original matrix.
        double num = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += a(i, j) * w[j];
            num += w[i] * s;
        }
        lambda = num;

        double diff = 0.0;
        for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(w[i] - v[i]));
        v = std::move(w);
        if (diff < 1e-12) break;
    }

    if (residual_norm(a, v, lambda) <= 1e-10 * std::max(1.0, std::abs(lambda))) {
        canonicalize_sign(v);
        return EigenPair{lambda, std::move(v)};
    }
    // Small or zero spectral gap: power iteration stalls, use the full sweep.
    return max_eigenpair_jacobi(a);
}

ComplexEigenPair max_eigenpair_hermitian(const ComplexMatrix& a) {
    require(a.rows == a.cols, "max_eigenpair_hermitian: matrix must be square");
    const int n = a.rows;
    RealMatrix e(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx z = 0.5 * (a(i, j) + std::conj(a(j, i)));
            e(i, j) = z.real();
            e(i, j + n) = -z.imag();
            e(i + n, j) = z.imag();
            e(i + n, j + n) = z.real();
        }
    EigenPair p = max_eigenpair(e);
    ComplexEigenPair out;
    out.value = p.value;
    out.vector.resize(n);
    for (int i = 0; i < n; ++i) out.vector[i] = cplx(p.vector[i], p.vector[i + n]);
    return out;
}

ComplexMatrix hermitian_solve(const ComplexMatrix& a, const ComplexMatrix& x) {
    require(a.rows == a.cols, "hermitian_solve: matrix must be square");
    require(a.cols == x.rows, "hermitian_solve: dimensions do not conform");
    const ComplexMatrix u = cholesky_upper_hermitian(a);
    const int n = a.rows;
    const int m = x.cols;

    // U^H y = x (forward), then U z = y (backward).
    ComplexMatrix y(n, m);
    for (int c = 0; c < m; ++c)
        for (int i = 0; i < n; ++i) {
            cplx s = x(i, c);
            for (int k = 0; k < i; ++k) s -= std::conj(u(k, i)) * y(k, c);
            y(i, c) = s / u(i, i).real();
        }
    ComplexMatrix z(n, m);
    for (int c = 0; c < m; ++c)
        for (int i = n - 1; i >= 0; --i) {
            cplx s = y(i, c);
            for (int k = i + 1; k < n; ++k) s -= u(i, k) * z(k, c);
            z(i, c) = s / u(i, i).real();
        }
    return z;
}

}  // namespace sigforge::linalg
