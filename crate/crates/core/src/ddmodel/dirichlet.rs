use std::f64::consts::PI;

use num_complex::Complex64;

/// Periodic sinc D_Q(ν) = (1/Q) Σ_{q<Q} e^{-i2πνq}.
///
/// Evaluated as e^{-iπν(Q-1)} sin(πνQ) / (Q sin(πν)) after reducing ν to [-1/2, 1/2],
/// which keeps full relative accuracy next to the integers. When |e^{-i2πν} - 1| drops
/// below 1e-9 the quotient is replaced by its limit e^{-iπr(Q-1)}, r the reduced offset.
pub fn dirichlet(q: usize, nu: f64) -> Complex64 {
    assert!(q >= 1, "Dirichlet degree must be positive");
    let qf = q as f64;
    // D_Q has period one, so only the offset from the nearest integer matters.
    let r = nu - nu.round();
    let phase = -PI * r * (qf - 1.0);
    let den = (PI * r).sin();
    if 2.0 * den.abs() < 1e-9 {
        return Complex64::from_polar(1.0, phase);
    }
    let mag = (PI * r * qf).sin() / (qf * den);
    Complex64::from_polar(1.0, phase) * mag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(q: usize, nu: f64) -> Complex64 {
        (0..q).map(|i| Complex64::from_polar(1.0, -2.0 * PI * nu * i as f64)).sum::<Complex64>() / q as f64
    }

    #[test]
    fn reference_values() {
        for q in [1, 2, 7, 64] {
            assert!((dirichlet(q, 0.0) - 1.0).norm() < 1e-15);
        }
        assert!(dirichlet(4, 0.25).norm() < 1e-15);
        assert!((dirichlet(2, 0.25) - Complex64::new(0.5, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn agrees_with_sum_including_near_integers() {
        for q in [1usize, 3, 8, 33] {
            for &nu in &[-2.7, -1.0, -0.5, -1e-13, 0.0, 3e-11, 0.125, 0.5, 0.9999999999, 1.0, 2.0 + 1e-7, 5.31] {
                let err = (dirichlet(q, nu) - direct(q, nu)).norm();
                assert!(err < 1e-12, "q={q} nu={nu} err={err}");
            }
        }
    }
}
