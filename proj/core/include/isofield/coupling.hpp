#pragma once

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "isofield/types.hpp"

namespace isofield {

// Classical <l1 m1 l2 m2 | l m>, exact rational Racah formula.
double clebsch_gordan(int l1, int m1, int l2, int m2, int l, int m);

// Unitary change of basis from complex to real harmonics: Y^m_l = sum_mu U[m][mu] Y_{l,mu}.
// Row/column index is m + l.
std::vector<std::vector<cplx>> real_basis_change(int ell);

// Real-basis coupling block for fixed (l, l1, l2).
struct GGBlock {
    int l = 0, l1 = 0, l2 = 0;
    std::vector<double> values;  // (2l+1) x (2l1+1) x (2l2+1)

    double operator()(int m, int m1, int m2) const {
        return values[(static_cast<std::size_t>(m + l) * (2 * l1 + 1) + (m1 + l1)) * (2 * l2 + 1) + (m2 + l2)];
    }
    double& at(int m, int m1, int m2) {
        return values[(static_cast<std::size_t>(m + l) * (2 * l1 + 1) + (m1 + l1)) * (2 * l2 + 1) + (m2 + l2)];
    }
};

bool triangle(int l, int l1, int l2);

// Builds one block from classical CG and the real basis change. Returns an all-zero block when
// the triangle rule fails. Sign: g^{0[0,0]} > 0 when nonzero, else the lexicographically
// largest nonzero (m, m1, m2) entry is positive. Blocks with l1 < l2 follow from (l, l2, l1) by
// g^{m[m1,m2]}_{l[l1,l2]} = (-1)^{l1+l2-l} g^{m[m2,m1]}_{l[l2,l1]}.
GGBlock compute_gg_block(int l, int l1, int l2);

class GGTable {
public:
    GGTable() = default;
    // All blocks with l1, l2 <= ell_max and l <= l1 + l2.
    explicit GGTable(int ell_max);

    int ell_max() const { return ell_max_; }
    // nullptr when the triangle rule fails or the block is outside the table.
    const GGBlock* block(int l, int l1, int l2) const;
    double operator()(int l, int m, int l1, int m1, int l2, int m2) const;
    std::size_t size() const { return blocks_.size(); }

    void save(const std::string& path) const;
    static GGTable load(const std::string& path);

private:
    int ell_max_ = -1;
    std::map<std::tuple<int, int, int>, GGBlock> blocks_;
};

// Process-wide cached lookup; thread-safe.
double godunov_gordienko(int l, int m, int l1, int m1, int l2, int m2);
const GGBlock& gg_block(int l, int l1, int l2);

// int Y^{m1}_{l1} Y^{m2}_{l2} Y^{m3}_{l3} dS over the unit sphere, closed form.
double gaunt_real(int l1, int m1, int l2, int m2, int l3, int m3);

// Rows are the l = 1 real harmonics (m = -1, 0, 1) expressed as unit-vector components:
// sqrt(4 pi / 3) Y^m_1(n) = (Q n)_m. Derived numerically from real_harmonic.
const Mat3& m_basis_from_cartesian();

}  // namespace isofield
