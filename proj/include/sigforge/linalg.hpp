#pragma once

#include <utility>
#include <vector>

#include "sigforge/types.hpp"

namespace sigforge::linalg {

// ---- elementary matrix/vector helpers -------------------------------------

RealMatrix transpose(const RealMatrix& m);
ComplexMatrix adjoint(const ComplexMatrix& m);
RealMatrix multiply(const RealMatrix& a, const RealMatrix& b);
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<cplx> multiply(const ComplexMatrix& a, const std::vector<cplx>& x);

RealMatrix real_part(const ComplexMatrix& m);
ComplexMatrix hermitianize(const ComplexMatrix& m);  // (m + m^H)/2

double frobenius(const RealMatrix& m);
double frobenius(const ComplexMatrix& m);

// ---- factorizations and eigen solvers --------------------------------------

// Upper-triangular B with A = B^T B. Throws NotPositiveDefinite when a pivot
// falls at or below 1e-14 times the largest diagonal entry.
RealMatrix cholesky_upper(const RealMatrix& a);

// Upper-triangular U with A = U^H U, complex Hermitian analogue.
ComplexMatrix cholesky_upper_hermitian(const ComplexMatrix& a);

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    RealMatrix vectors;          // column j pairs with values[j]
};

// Cyclic Jacobi sweep eigendecomposition of a real symmetric matrix.
EigenDecomposition jacobi_eigen(const RealMatrix& a);

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

// Largest (algebraic) eigenvalue and its unit eigenvector, sign-canonicalized
// so the largest-magnitude entry is positive. Power iteration on a shifted
// matrix, Jacobi fallback when the gap is too small to converge.
EigenPair max_eigenpair(const RealMatrix& a);

// Same for a complex Hermitian matrix, via the real 2n x 2n embedding
// [[Re A, -Im A], [Im A, Re A]].
struct ComplexEigenPair {
    double value = 0.0;
    std::vector<cplx> vector;
};
ComplexEigenPair max_eigenpair_hermitian(const ComplexMatrix& a);

// A^{-1} X for Hermitian positive definite A.
ComplexMatrix hermitian_solve(const ComplexMatrix& a, const ComplexMatrix& x);

// Sign-canonicalize in place: flip so the largest-magnitude entry is positive.
void canonicalize_sign(std::vector<double>& v);

}  // namespace sigforge::linalg
