// mat2.hpp — minimal real 2x2 matrix used for subsystem operators

#pragma once

#include <array>

namespace metamol {

struct Mat2 {
    // row-major storage
    std::array<double, 4> v{0.0, 0.0, 0.0, 0.0};

    double& operator()(int i, int j) { return v[2 * i + j]; }
    double operator()(int i, int j) const { return v[2 * i + j]; }

    static Mat2 identity() { return Mat2{{1.0, 0.0, 0.0, 1.0}}; }
};

inline Mat2 mul(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}

inline Mat2 transpose(const Mat2& a) {
    return Mat2{{a.v[0], a.v[2], a.v[1], a.v[3]}};
}

inline double trace(const Mat2& a) { return a.v[0] + a.v[3]; }

inline double det(const Mat2& a) { return a.v[0] * a.v[3] - a.v[1] * a.v[2]; }

// Pauli matrices in the fixed subsystem ordering (index 0 = upper level).
inline Mat2 sigma_x() { return Mat2{{0.0, 1.0, 1.0, 0.0}}; }
inline Mat2 sigma_z() { return Mat2{{-1.0, 0.0, 0.0, 1.0}}; }

}  // namespace metamol
