#pragma once

#include <cmath>
#include <complex>

namespace nsp {

using cplx = std::complex<double>;

// 2x2 complex matrix with the closed-form spectral calculus used for the
// per-mode propagators.
struct Mat2 {
    cplx m00{0, 0}, m01{0, 0}, m10{0, 0}, m11{0, 0};

    static Mat2 identity() { return {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}}; }

    cplx trace() const { return m00 + m11; }
    cplx det() const { return m00 * m11 - m01 * m10; }

    Mat2 operator*(const Mat2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    Mat2 operator+(const Mat2& o) const {
        return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
    }
    Mat2 operator-(const Mat2& o) const {
        return {m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11};
    }
    friend Mat2 operator*(cplx s, const Mat2& m) {
        return {s * m.m00, s * m.m01, s * m.m10, s * m.m11};
    }
    void apply(cplx& x, cplx& y) const {
        const cplx nx = m00 * x + m01 * y;
        const cplx ny = m10 * x + m11 * y;
        x = nx;
        y = ny;
    }
};

struct Eigenpair {
    cplx lam_plus, lam_minus;
};

inline Eigenpair mat2_eigenvalues(const Mat2& a) {
    const cplx half_tr = 0.5 * a.trace();
    const cplx disc = std::sqrt(half_tr * half_tr - a.det());
    return {half_tr + disc, half_tr - disc};
}

// f(A) via the two-point spectral formula, falling back to the Jordan form
// f(lam) I + f'(lam) (A - lam I) when the eigenvalues (nearly) coincide.
template <class F, class DF>
Mat2 mat2_func(const Mat2& a, F&& f, DF&& df) {
    const auto [lp, lm] = mat2_eigenvalues(a);
    const Mat2 id = Mat2::identity();
    const double sep = std::abs(lp - lm);
    if (sep < 1e-8 * std::max({std::abs(lp), std::abs(lm), 1e-300})) {
        const cplx lam = 0.5 * (lp + lm);
        return f(lam) * id + df(lam) * (a - lam * id);
    }
    const cplx fp = f(lp), fm = f(lm);
    const cplx slope = (fp - fm) / (lp - lm);
    return fm * id + slope * (a - lm * id);
}

// phi_j(z) = sum_{k>=0} z^k / (k+j)!; phi_0 = exp. Series below |z| = 0.5,
// closed form above (the closed forms lose at most ~2 digits near the
// switch point).
cplx phi(int j, cplx z);

// Scalar coefficient functions of the exponential integrator, z = h*lambda:
//   etd_alpha = phi1 - 3 phi2 + 4 phi3
//   etd_beta  = phi2 - 2 phi3
//   etd_gamma = 4 phi3 - phi2
// and their derivatives via phi_j' = phi_j - j phi_{j+1}.
inline cplx etd_alpha(cplx z) { return phi(1, z) - 3.0 * phi(2, z) + 4.0 * phi(3, z); }
inline cplx etd_beta(cplx z) { return phi(2, z) - 2.0 * phi(3, z); }
inline cplx etd_gamma(cplx z) { return 4.0 * phi(3, z) - phi(2, z); }
inline cplx etd_alpha_d(cplx z) {
    return phi(1, z) - 4.0 * phi(2, z) + 10.0 * phi(3, z) - 12.0 * phi(4, z);
}
inline cplx etd_beta_d(cplx z) { return phi(2, z) - 4.0 * phi(3, z) + 6.0 * phi(4, z); }
inline cplx etd_gamma_d(cplx z) { return -phi(2, z) + 6.0 * phi(3, z) - 12.0 * phi(4, z); }
inline cplx phi1_d(cplx z) { return phi(1, z) - phi(2, z); }

}  // namespace nsp
