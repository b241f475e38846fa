#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace sigforge {

using cplx = std::complex<double>;

// Dense row-major real matrix.
struct RealMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    RealMatrix() = default;
    RealMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static RealMatrix identity(int n) {
        RealMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

// Dense row-major complex matrix.
struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> a;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    cplx operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

// Length-L antipodal sequence over {-1, +1}.
struct BinarySignature {
    std::vector<int> entries;

    BinarySignature() = default;
    explicit BinarySignature(std::vector<int> e) : entries(std::move(e)) {}

    int length() const { return static_cast<int>(entries.size()); }
    bool valid() const {
        for (int v : entries)
            if (v != 1 && v != -1) return false;
        return !entries.empty();
    }
};

// Length-L sequence over the four units {1, -1, +i, -i}.
struct QuaternarySignature {
    std::vector<cplx> entries;

    QuaternarySignature() = default;
    explicit QuaternarySignature(std::vector<cplx> e) : entries(std::move(e)) {}

    int length() const { return static_cast<int>(entries.size()); }
    bool valid() const {
        for (const cplx& v : entries) {
            const bool unit = (v == cplx(1, 0)) || (v == cplx(-1, 0)) ||
                              (v == cplx(0, 1)) || (v == cplx(0, -1));
            if (!unit) return false;
        }
        return !entries.empty();
    }
};

}  // namespace sigforge
