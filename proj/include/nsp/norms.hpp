#pragma once

#include <limits>

#include "nsp/field.hpp"

namespace nsp {

enum class ZeroMode { exclude, include };

// A norm specification: L^p (p in [1,inf]), homogeneous Hdot^s (any real s),
// or inhomogeneous H^k (integer k >= 0).
struct NormRequest {
    enum class Kind { Lp, Hdot, Hk } kind = Kind::Lp;
    double p = 2.0;
    double s = 0.0;
    int k = 0;
    ZeroMode zero_mode = ZeroMode::include;

    static NormRequest lp(double p_) {
        NormRequest r;
        r.kind = Kind::Lp;
        r.p = p_;
        return r;
    }
    static NormRequest linf() { return lp(std::numeric_limits<double>::infinity()); }
    // Negative s defaults to excluding the zero mode (required); s >= 0
    // includes it so that Hdot(0) coincides with L2 exactly.
    static NormRequest hdot(double s_) {
        NormRequest r;
        r.kind = Kind::Hdot;
        r.s = s_;
        r.zero_mode = s_ < 0.0 ? ZeroMode::exclude : ZeroMode::include;
        return r;
    }
    static NormRequest hdot(double s_, ZeroMode zm) {
        NormRequest r = hdot(s_);
        r.zero_mode = zm;
        return r;
    }
    static NormRequest hk(int k_) {
        NormRequest r;
        r.kind = Kind::Hk;
        r.k = k_;
        return r;
    }
};

// Norm conventions: physical quadrature uses the cell volume (L/n)^3 per
// sample; Parseval sums carry the matching factor L^3, so
// ||f||_L2 = sqrt(L^3 sum_k |fhat|^2) exactly. Hdot(s<0) with a retained
// nonzero zero mode is undefined and raises an error. L^p for p not in
// {1,2,inf} is a grid Riemann sum (spectrally accurate for band-limited
// fields); L2 is routed through the Parseval sum so norm(Hdot(0)) ==
// norm(Lp(2)) exactly.
double norm(const ScalarField& f, const NormRequest& req);
double norm(const VectorField& u, const NormRequest& req);

// Weighted Parseval sum L^3 * sum_k |k|^(2s) |fhat(k)|^2 (the squared Hdot
// norm); building block for the energy functionals.
double hdot_sq(const ScalarField& f, double s, ZeroMode zm = ZeroMode::include);
double hdot_sq(const VectorField& u, double s, ZeroMode zm = ZeroMode::include);

// L^3 * sum_k |k|^(2j) |k . uhat|^2 = ||nabla^j div u||^2.
double div_hdot_sq(const VectorField& u, double j);

// Real L2 inner product <f, g> = L^3 sum Re(conj(fhat) ghat).
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);

// int nabla^j u . grad(nabla^j rho) dx, the interactive functional between
// velocity and density gradient at derivative level j.
double cross_functional(const VectorField& u, const ScalarField& rho, int j);

}  // namespace nsp
