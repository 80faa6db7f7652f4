#pragma once

namespace wva {

/// log I_ν(x) for integer order ν >= 0 and x >= 0, finite for any x that a
/// double can hold (I_ν itself overflows near x ≈ 713).
///
/// x <= 50: power series summed in log-scaled form.
/// x > 50, ν = 0: Hankel large-argument expansion.
/// x > 50, ν >= 1: Debye uniform asymptotic expansion.
///
/// Returns -inf when I_ν(x) = 0 (x = 0, ν > 0).
double log_bessel_i(int order, double x);

/// log(e^{-x} I_ν(x)). Avoids cancellation when the caller subtracts x
/// (or a number close to it) from the result.
double log_bessel_i_scaled(int order, double x);

}  // namespace wva
