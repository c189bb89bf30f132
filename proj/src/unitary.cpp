#include "qlayout/unitary.hpp"

#include <cmath>
#include <stdexcept>

namespace qlayout {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

U4Matrix swap_gate(SwapConvention convention) {
    U4Matrix m = U4Matrix::Zero();
    m(0, 0) = 1.0;
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
    m(3, 3) = convention == SwapConvention::fermionic ? -1.0 : 1.0;
    return m;
}

U4Matrix cnot_gate() {
    U4Matrix m = U4Matrix::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
    return m;
}

U4Matrix fsim_gate(double theta, double phi) {
    U4Matrix m = U4Matrix::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = std::cos(theta);
    m(1, 2) = -kI * std::sin(theta);
    m(2, 1) = -kI * std::sin(theta);
    m(2, 2) = std::cos(theta);
    m(3, 3) = std::exp(-kI * phi);
    return m;
}

double unitarity_error(const U4Matrix& u) {
    return (u.adjoint() * u - U4Matrix::Identity()).cwiseAbs().maxCoeff();
}

bool is_unitary(const U4Matrix& u, double tolerance) { return unitarity_error(u) <= tolerance; }

U4Matrix absorb_swap_matrix(const U4Matrix& w, SwapConvention convention) {
    if (!is_unitary(w)) throw std::invalid_argument("absorb_swap_matrix: input is not unitary");
    U4Matrix out = w;
    out.row(1).swap(out.row(2));
    if (convention == SwapConvention::fermionic) out.row(3) *= -1.0;
    return out;
}

}  // namespace qlayout
