#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qlayout {

/// Two-qubit gate matrix in the basis order |00>, |01>, |10>, |11>.
using U4Matrix = Eigen::Matrix4cd;

/// `standard` is the usual SWAP; `fermionic` carries -1 in the |11> corner,
/// as used by fermionic simulation circuits.
enum class SwapConvention { standard, fermionic };

U4Matrix swap_gate(SwapConvention convention = SwapConvention::standard);
U4Matrix cnot_gate();
U4Matrix fsim_gate(double theta, double phi);

/// max |(U^dagger U - I)_ij|.
double unitarity_error(const U4Matrix& u);
bool is_unitary(const U4Matrix& u, double tolerance = 1e-9);

/// SWAP * W. For the standard convention this is an exact row exchange of
/// the |01> and |10> rows. Throws std::invalid_argument if W is not unitary.
U4Matrix absorb_swap_matrix(const U4Matrix& w, SwapConvention convention = SwapConvention::standard);

}  // namespace qlayout
