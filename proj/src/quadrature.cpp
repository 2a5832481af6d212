#include "nsp/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace nsp {

namespace {

// 15-point Kronrod nodes on [0,1] side of [-1,1] plus center, with the
// embedded 7-point Gauss rule (QUADPACK dqk15 constants).
constexpr double xgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                           0.741531185599394, 0.586087235467691, 0.405845151377397,
                           0.207784955007898, 0.0};
constexpr double wgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                           0.140653259715525, 0.169004726639267, 0.190350578064785,
                           0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                          0.417959183673469};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * xgk[i]);
        fv[14 - i] = f(c + h * xgk[i]);
    }
    fv[7] = f(c);
    double kron = 0.0;
    for (int i = 0; i < 8; ++i) kron += wgk[i] * (i == 7 ? fv[7] : fv[i] + fv[14 - i]);
    double gauss = 0.0;
    for (int i = 0; i < 4; ++i) {
        const int j = 2 * i + 1;  // Gauss nodes sit at the odd Kronrod indices
        gauss += wg[i] * (j == 7 ? fv[7] : fv[j] + fv[14 - j]);
    }
    Panel p;
    p.a = a;
    p.b = b;
    p.value = kron * h;
    const double diff = std::abs(kron - gauss) * h;
    p.error = diff == 0.0 ? 0.0 : std::min(diff, std::pow(200.0 * diff, 1.5));
    return p;
}

}  // namespace

QuadratureResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol, int max_panels) {
    std::priority_queue<Panel> heap;
    heap.push(evaluate(f, a, b));
    double total = heap.top().value;
    double err = heap.top().error;
    int evals = 15;
    int panels = 1;
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (panels >= max_panels)
            throw DivergentIntegralError(
                "integrate_gk: panel budget exhausted (integral divergent or tolerance "
                "unreachable)");
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = evaluate(f, worst.a, mid);
        Panel right = evaluate(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        evals += 30;
        ++panels;
    }
    return {total, err, evals};
}

}  // namespace nsp
