#pragma once

namespace minforge {

/// Complete elliptic integral of the first kind, modulus convention:
/// K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t), 0 <= k < 1.
double elliptic_K(double k);

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

/// Jacobi elliptic functions sn, cn, dn of real argument u and modulus k in
/// [0, 1), computed with the arithmetic-geometric mean.
JacobiTriple jacobi_elliptic(double u, double k);

}  // namespace minforge
