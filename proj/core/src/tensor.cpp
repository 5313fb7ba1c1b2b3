#include <cmath>
#include <functional>

#include "isofield/correlation.hpp"
#include "isofield/error.hpp"

namespace isofield {

Tensor4 Tensor4::rotated(const Mat3& R) const {
    // Contract one index at a time.
    Tensor4 a = *this, b;
    for (int pos = 0; pos < 4; ++pos) {
        b = Tensor4();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) {
                        double s = 0.0;
                        for (int p = 0; p < 3; ++p) {
                            int idx[4] = {i, j, k, l};
                            const double r = R(idx[pos], p);
                            idx[pos] = p;
                            s += r * a(idx[0], idx[1], idx[2], idx[3]);
                        }
                        b(i, j, k, l) = s;
                    }
        a = b;
    }
    return a;
}

namespace {
double kd(int i, int j) { return i == j ? 1.0 : 0.0; }
}  // namespace

Mat3 l_rank1(int which, const Vec3& r) {
    if (which != 1 && which != 2) fail_validation("l_rank1: index must be 1 or 2");
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = (which == 1) ? kd(i, j) : r[i] * r[j];
    return m;
}

Tensor4 l_rank2(int which, const Vec3& r) {
    if (which < 1 || which > 5) fail_validation("l_rank2: index must be 1..5");
    Tensor4 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double v = 0.0;
                    switch (which) {
                        case 1: v = kd(i, j) * kd(k, l); break;
                        case 2: v = kd(i, k) * kd(j, l) + kd(i, l) * kd(j, k); break;
                        case 3:
                            v = r[j] * r[k] * kd(i, l) + r[i] * r[l] * kd(j, k) + r[i] * r[k] * kd(j, l) +
                                r[j] * r[l] * kd(i, k);
                            break;
                        case 4: v = r[i] * r[j] * kd(k, l) + r[k] * r[l] * kd(i, j); break;
                        default: v = r[i] * r[j] * r[k] * r[l]; break;
                    }
                    t(i, j, k, l) = v;
                }
    return t;
}

std::vector<double> ogden_tensor(int rank) {
    if (rank != 2 && rank != 4 && rank != 6) fail_validation("ogden_tensor: rank must be 2, 4 or 6");
    if (rank == 2) {
        std::vector<double> t(9, 0.0);
        for (int i = 0; i < 3; ++i) t[i * 3 + i] = 1.0;
        return t;
    }
    auto i4 = [](int a, int b, int c, int d) { return 0.5 * (kd(a, c) * kd(b, d) + kd(a, d) * kd(b, c)); };
    if (rank == 4) {
        std::vector<double> t(81);
        for (int n = 0; n < 81; ++n) t[n] = i4(n / 27, (n / 9) % 3, (n / 3) % 3, n % 3);
        return t;
    }
    // nu = 2: I_{i1..i6} = (I_{i1 p i3 i4} I_{p i2 i5 i6} + I_{i1 p i5 i6} I_{p i2 i3 i4}) / 2
    std::vector<double> t(729, 0.0);
    for (int n = 0; n < 729; ++n) {
        int i[6];
        int q = n;
        for (int k = 5; k >= 0; --k) {
            i[k] = q % 3;
            q /= 3;
        }
        double s = 0.0;
        for (int p = 0; p < 3; ++p)
            s += i4(i[0], p, i[2], i[3]) * i4(p, i[1], i[4], i[5]) + i4(i[0], p, i[4], i[5]) * i4(p, i[1], i[2], i[3]);
        t[n] = 0.5 * s;
    }
    return t;
}

}  // namespace isofield
