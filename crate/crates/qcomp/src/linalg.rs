//! Small dense linear-algebra helpers shared by the solver modules.
//!
//! The Hermitian solve is hand-rolled: for complex inputs nalgebra's
//! `Cholesky` accepts indefinite matrices (a complex square root always
//! exists), while the solvers here must fail loudly on a non-PD pivot.

use crate::error::{Error, Result};
use crate::types::{C64, CMat, CVec};

/// Kills round-off asymmetry: returns (A + A^H) / 2.
pub fn hermitize(a: &CMat) -> CMat {
    (a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// Lower-triangular Cholesky factor of a Hermitian positive-definite matrix,
/// with strict pivot checks.
pub struct HpdFactor {
    l: CMat,
}

impl HpdFactor {
    /// Factors `A = L L^H`. Returns `None` when a pivot is not strictly
    /// positive (indefinite or singular input). Only the lower triangle of
    /// `a` is read; callers should symmetrize first.
    pub fn new(a: &CMat) -> Option<Self> {
        let n = a.nrows();
        debug_assert_eq!(n, a.ncols());
        let mut l = a.clone_owned();
        for j in 0..n {
            let mut pivot = l[(j, j)].re;
            for k in 0..j {
                pivot -= l[(j, k)].norm_sqr();
            }
            if !(pivot > 0.0) || !pivot.is_finite() {
                return None;
            }
            let root = pivot.sqrt();
            l[(j, j)] = C64::new(root, 0.0);
            for i in (j + 1)..n {
                let mut s = l[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / root;
            }
        }
        Some(Self { l })
    }

    /// Solves `A x = b` by forward then adjoint back substitution.
    pub fn solve(&self, b: &CVec) -> CVec {
        let n = self.l.nrows();
        debug_assert_eq!(n, b.len());
        let mut x = b.clone_owned();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.l[(i, k)] * x[k];
            }
            x[i] = s / self.l[(i, i)].re;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= self.l[(k, i)].conj() * x[k];
            }
            x[i] = s / self.l[(i, i)].re;
        }
        x
    }
}

/// Solves `A x = b` for Hermitian positive-definite `A`. The input is
/// symmetrized first; failure to factor is reported with the caller's
/// context.
pub fn solve_hpd(
    a: &CMat,
    b: &CVec,
    what: &'static str,
    cell: usize,
    user: usize,
) -> Result<CVec> {
    let factor = HpdFactor::new(&hermitize(a)).ok_or(Error::NotPositiveDefinite {
        what,
        cell,
        user,
    })?;
    Ok(factor.solve(b))
}

/// Real part of the quadratic form `h^H A^{-1} h` for Hermitian PD `A`.
pub fn quad_form_inv(
    a: &CMat,
    h: &CVec,
    what: &'static str,
    cell: usize,
    user: usize,
) -> Result<f64> {
    let x = solve_hpd(a, h, what, cell, user)?;
    Ok(h.dotc(&x).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hpd_solve_recovers_solution() {
        // A = L L^H with positive diagonal L is PD by construction.
        let l = CMat::from_row_slice(
            2,
            2,
            &[
                C64::new(2.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, -0.5),
                C64::new(1.5, 0.0),
            ],
        );
        let a = &l * l.adjoint();
        let x = CVec::from_vec(vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.25)]);
        let b = &a * &x;
        let got = solve_hpd(&a, &b, "test", 0, 0).unwrap();
        for i in 0..2 {
            assert_relative_eq!(got[i].re, x[i].re, max_relative = 1e-12);
            assert_relative_eq!(got[i].im, x[i].im, max_relative = 1e-12);
        }
    }

    #[test]
    fn random_hpd_residuals_are_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1usize, 3, 8, 16] {
            let g = CMat::from_fn(n, n, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let a = &g * g.adjoint() + CMat::identity(n, n) * C64::new(0.1, 0.0);
            let x = CVec::from_fn(n, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let b = &a * &x;
            let got = solve_hpd(&a, &b, "test", 0, 0).unwrap();
            let res = (&a * &got - &b).norm() / b.norm();
            assert!(res < 1e-11, "residual {res} at n={n}");
        }
    }

    #[test]
    fn non_pd_is_reported() {
        let a = CMat::from_row_slice(1, 1, &[C64::new(-1.0, 0.0)]);
        let b = CVec::from_vec(vec![C64::new(1.0, 0.0)]);
        assert!(matches!(
            solve_hpd(&a, &b, "test", 1, 2),
            Err(Error::NotPositiveDefinite { cell: 1, user: 2, .. })
        ));
        // Indefinite 2x2: eigenvalues 3 and -1.
        let ind = CMat::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(2.0, 0.0),
                C64::new(2.0, 0.0),
                C64::new(1.0, 0.0),
            ],
        );
        assert!(solve_hpd(&ind, &CVec::zeros(2), "test", 0, 0).is_err());
    }
}
