#pragma once

#include <cmath>
#include <random>

#include "ricci/metric.hpp"

// Test-side oracles, kept independent of the library's linear-algebra path.
namespace testutil {

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
};

// |h|^2_g by the full 4-index contraction with the inverse metric, nothing
// shared with the implementation's diagonal shortcut.
inline double dense_norm_oracle(const ricci::DiagonalMetric& g, const ricci::SymmetricMetric4& h) {
    double ginv[4];
    for (int i = 0; i < 4; ++i) ginv[i] = 1.0 / g[i];
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    const double gik = i == k ? ginv[i] : 0.0;
                    const double gjl = j == l ? ginv[j] : 0.0;
                    s += gik * gjl * h(i, j) * h(k, l);
                }
    return s;
}

// recursive cofactor determinant of the leading k x k block
inline double minor_det(const ricci::Mat4& m, const int* rows, const int* cols, int k) {
    if (k == 1) return m(rows[0], cols[0]);
    double s = 0.0;
    double sign = 1.0;
    for (int c = 0; c < k; ++c) {
        int sub_rows[4], sub_cols[4];
        for (int i = 1; i < k; ++i) sub_rows[i - 1] = rows[i];
        int idx = 0;
        for (int j = 0; j < k; ++j) {
            if (j == c) continue;
            sub_cols[idx++] = cols[j];
        }
        s += sign * m(rows[0], cols[c]) * minor_det(m, sub_rows, sub_cols, k - 1);
        sign = -sign;
    }
    return s;
}

inline double leading_minor(const ricci::Mat4& m, int k) {
    int idx[4] = {0, 1, 2, 3};
    return minor_det(m, idx, idx, k);
}

inline double cofactor_det(const ricci::Mat4& m) { return leading_minor(m, 4); }

// inverse by the adjugate (cofactor) formula
inline ricci::Mat4 adjugate_inverse(const ricci::Mat4& m) {
    const double d = cofactor_det(m);
    ricci::Mat4 inv;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            int rows[3], cols[3];
            int ri = 0, ci = 0;
            for (int r = 0; r < 4; ++r)
                if (r != j) rows[ri++] = r;
            for (int c = 0; c < 4; ++c)
                if (c != i) cols[ci++] = c;
            const double cof = minor_det(m, rows, cols, 3);
            inv(i, j) = (((i + j) % 2 == 0) ? 1.0 : -1.0) * cof / d;
        }
    return inv;
}

}  // namespace testutil
