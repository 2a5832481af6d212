#include "nsp/mat2.hpp"

namespace nsp {

cplx phi(int j, cplx z) {
    if (j == 0) return std::exp(z);
    if (std::abs(z) < 0.5) {
        // phi_j(z) = sum_k z^k / (k+j)!
        double fact = 1.0;
        for (int i = 2; i <= j; ++i) fact *= i;
        cplx term{1.0 / fact, 0.0};
        cplx sum = term;
        for (int k = 1; k <= 40; ++k) {
            term *= z / static_cast<double>(k + j);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    // phi_j(z) = (phi_{j-1}(z) - 1/(j-1)!) / z, unrolled from exp.
    cplx val = std::exp(z);
    double fact = 1.0;
    for (int i = 1; i <= j; ++i) {
        val = (val - 1.0 / fact) / z;
        fact *= i;
    }
    return val;
}

}  // namespace nsp
