//! The smooth complementarity substitution.
//!
//! With `b1 = (v + s)/2`, `b2 = (-v + s)/2`, `s = sqrt(v^2 + 4 tau0 r)`:
//! `psi1 = b1^kappa0`, `psi2 = b2^kappa0`, and `psi1 * psi2 = (tau0 r)^kappa0`
//! identically, so a pair `(gamma, lambda) = (psi1, psi2)` satisfies
//! `gamma * lambda = t * gamma0` by construction. Both functions are C^1 on
//! `R x [0, inf)` for `kappa0 > 2`.

/// Values and partial derivatives of the substitution pair at `(v, r)`.
#[derive(Debug, Clone, Copy)]
pub struct Psi {
    pub psi1: f64,
    pub psi2: f64,
    pub d1_dv: f64,
    pub d2_dv: f64,
    pub d1_dr: f64,
    pub d2_dr: f64,
}

/// Evaluate the pair. Requires `r >= 0`, `tau0 > 0`, `kappa0 > 2`.
///
/// The smaller of the two square-root branches is computed via the conjugate
/// form `2 tau0 r / (s + |v|)`, which avoids cancellation when `4 tau0 r`
/// is tiny relative to `v^2`; the product identity then holds to a few ulps.
pub fn psi(v: f64, r: f64, tau0: f64, kappa0: f64) -> Psi {
    debug_assert!(r >= 0.0 && tau0 > 0.0 && kappa0 > 2.0);
    let s = (v * v + 4.0 * tau0 * r).sqrt();
    let (b1, b2) = if v >= 0.0 {
        let b1 = (v + s) / 2.0;
        let b2 = if b1 > 0.0 { tau0 * r / b1 } else { 0.0 };
        (b1, b2)
    } else {
        let b2 = (-v + s) / 2.0;
        let b1 = if b2 > 0.0 { tau0 * r / b2 } else { 0.0 };
        (b1, b2)
    };
    let psi1 = b1.powf(kappa0);
    let psi2 = b2.powf(kappa0);
    if s == 0.0 {
        // v = 0 and r = 0: both branches and their derivatives vanish (kappa0 > 2).
        return Psi {
            psi1: 0.0,
            psi2: 0.0,
            d1_dv: 0.0,
            d2_dv: 0.0,
            d1_dr: 0.0,
            d2_dr: 0.0,
        };
    }
    Psi {
        psi1,
        psi2,
        d1_dv: kappa0 * psi1 / s,
        d2_dv: -kappa0 * psi2 / s,
        d1_dr: kappa0 * b1.powf(kappa0 - 1.0) * tau0 / s,
        d2_dr: kappa0 * b2.powf(kappa0 - 1.0) * tau0 / s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn symmetric_case_is_unity() {
        let p = psi(0.0, 1.0, 1.0, 3.0);
        assert_abs_diff_eq!(p.psi1, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.psi2, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn r_zero_collapses_to_positive_part() {
        for v in [0.3, 1.7, 42.0] {
            let p = psi(v, 0.0, 0.9, 3.0);
            assert_abs_diff_eq!(p.psi1, v.powi(3), epsilon = 1e-12 * v.powi(3));
            assert_eq!(p.psi2, 0.0);
        }
        let p = psi(-2.0, 0.0, 0.9, 3.0);
        assert_eq!(p.psi1, 0.0);
        assert_abs_diff_eq!(p.psi2, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for &(v, r, tau0, k) in &[
            (0.4, 0.7, 0.8, 3.0),
            (-1.2, 0.3, 0.5, 3.0),
            (2.0, 1.0, 1.0, 2.5),
            (-0.1, 0.05, 0.33, 4.0),
        ] {
            let p = psi(v, r, tau0, k);
            let pv = (psi(v + h, r, tau0, k).psi1 - psi(v - h, r, tau0, k).psi1) / (2.0 * h);
            let pr = (psi(v, r + h, tau0, k).psi1 - psi(v, r - h, tau0, k).psi1) / (2.0 * h);
            let qv = (psi(v + h, r, tau0, k).psi2 - psi(v - h, r, tau0, k).psi2) / (2.0 * h);
            let qr = (psi(v, r + h, tau0, k).psi2 - psi(v, r - h, tau0, k).psi2) / (2.0 * h);
            let scale = 1.0 + p.psi1.abs() + p.psi2.abs();
            assert_abs_diff_eq!(p.d1_dv, pv, epsilon = 1e-5 * scale);
            assert_abs_diff_eq!(p.d1_dr, pr, epsilon = 1e-5 * scale);
            assert_abs_diff_eq!(p.d2_dv, qv, epsilon = 1e-5 * scale);
            assert_abs_diff_eq!(p.d2_dr, qr, epsilon = 1e-5 * scale);
        }
    }

    proptest! {
        // psi1 * psi2 = (tau0 r)^kappa0 to 1e-12 relative, including r near 0.
        #[test]
        fn product_identity(
            v in -10.0f64..10.0,
            r in prop_oneof![Just(0.0), Just(1e-12), 0.0f64..1.0],
            tau0 in 0.05f64..1.5,
            kappa0 in 2.1f64..5.0,
        ) {
            let p = psi(v, r, tau0, kappa0);
            let target = (tau0 * r).powf(kappa0);
            prop_assert!(
                (p.psi1 * p.psi2 - target).abs() <= 1e-12 * (1.0 + target),
                "{} vs {}", p.psi1 * p.psi2, target
            );
        }
    }
}
