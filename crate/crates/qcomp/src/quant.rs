//! Additive quantization noise model (AQNM) for low-resolution DACs.
//!
//! A b-bit MMSE scalar quantizer applied to a Gaussian input is linearized as
//! `x_q = alpha * x + q`, where `alpha = 1 - beta` and the distortion noise
//! `q` is uncorrelated with `x`. For a precoder matrix `W` the noise
//! covariance is diagonal: `C_qq = alpha * beta * diag(W W^H)`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DVector;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::types::CMat;

/// DAC resolution: a positive bit count or infinite (no quantization).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bits {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bits::Finite(b) => write!(f, "{b}"),
            Bits::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bits::Finite(b) => ser.serialize_u32(*b),
            Bits::Infinite => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct BitsVisitor;

        impl Visitor<'_> for BitsVisitor {
            type Value = Bits;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive integer bit count or the string \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Bits, E> {
                if v == 0 || v > u32::MAX as u64 {
                    return Err(E::custom(format!("bit count {v} out of range")));
                }
                Ok(Bits::Finite(v as u32))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Bits, E> {
                if v <= 0 {
                    return Err(E::custom(format!("bit count {v} must be positive")));
                }
                self.visit_u64(v as u64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Bits, E> {
                match v.to_ascii_lowercase().as_str() {
                    "inf" | "infinite" | "infinity" => Ok(Bits::Infinite),
                    other => Err(E::custom(format!(
                        "expected \"inf\" or an integer, got \"{other}\""
                    ))),
                }
            }
        }

        de.deserialize_any(BitsVisitor)
    }
}

/// Distortion factor of the MMSE scalar quantizer for a unit-variance
/// Gaussian input, b = 1..=5. Standard tabulated values; cross-checked
/// against a Lloyd-Max oracle in the test suite.
const BETA_TABLE: [f64; 5] = [0.3634, 0.1175, 0.034_54, 0.009_497, 0.002_499];

/// Quantization gain/distortion pair for a given resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantModel {
    bits: Bits,
    alpha: f64,
    beta: f64,
}

impl QuantModel {
    /// Looks up (or derives) the distortion factor for `bits`.
    ///
    /// Tabulated values are used for b <= 5; beyond that the asymptotic
    /// `beta = (pi * sqrt(3) / 2) * 2^(-2b)` applies so resolution sweeps do
    /// not fail. `Bits::Infinite` gives `beta = 0`.
    pub fn from_bits(bits: Bits) -> Result<Self> {
        let beta = match bits {
            Bits::Infinite => 0.0,
            Bits::Finite(0) => {
                return Err(Error::Config("quantizer resolution must be >= 1 bit".into()))
            }
            Bits::Finite(b) if b as usize <= BETA_TABLE.len() => BETA_TABLE[(b - 1) as usize],
            Bits::Finite(b) => PI * 3.0_f64.sqrt() / 2.0 * 2.0_f64.powi(-2 * b as i32),
        };
        Ok(Self {
            bits,
            alpha: 1.0 - beta,
            beta,
        })
    }

    pub fn bits(&self) -> Bits {
        self.bits
    }

    /// Quantization gain `alpha = 1 - beta`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Distortion factor `beta` in `[0, 1)`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Diagonal of the quantization-noise covariance
    /// `C_qq = alpha * beta * diag(W W^H)` for a per-cell precoder matrix
    /// `W` (antennas x users). Entries are real and nonnegative.
    pub fn quant_noise_cov(&self, w: &CMat) -> DVector<f64> {
        let scale = self.alpha * self.beta;
        DVector::from_iterator(
            w.nrows(),
            w.row_iter().map(|row| scale * row.iter().map(|c| c.norm_sqr()).sum::<f64>()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::C64;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    #[test]
    fn infinite_resolution_is_exact() {
        let q = QuantModel::from_bits(Bits::Infinite).unwrap();
        assert_eq!(q.alpha(), 1.0);
        assert_eq!(q.beta(), 0.0);
    }

    #[test]
    fn one_bit_matches_closed_form() {
        // One-bit MMSE distortion for a Gaussian input is 1 - 2/pi.
        let q = QuantModel::from_bits(Bits::Finite(1)).unwrap();
        assert_relative_eq!(q.beta(), 1.0 - 2.0 / PI, max_relative = 2e-4);
    }

    #[test]
    fn alpha_beta_sum_to_one_exactly() {
        for b in 1..=12 {
            let q = QuantModel::from_bits(Bits::Finite(b)).unwrap();
            assert_eq!(q.alpha() + q.beta(), 1.0);
            assert!(q.alpha() > 0.0 && q.alpha() <= 1.0);
        }
    }

    #[test]
    fn beta_strictly_decreases_with_resolution() {
        let mut prev = QuantModel::from_bits(Bits::Finite(1)).unwrap().beta();
        for b in 2..=12 {
            let beta = QuantModel::from_bits(Bits::Finite(b)).unwrap().beta();
            assert!(beta < prev, "beta({b}) = {beta} not below beta({}) = {prev}", b - 1);
            prev = beta;
        }
        assert!(QuantModel::from_bits(Bits::Infinite).unwrap().beta() < prev);
    }

    #[test]
    fn zero_bits_is_rejected() {
        assert!(QuantModel::from_bits(Bits::Finite(0)).is_err());
    }

    #[test]
    fn noise_cov_vanishes_without_quantization() {
        let q = QuantModel::from_bits(Bits::Infinite).unwrap();
        let w = DMatrix::from_fn(4, 2, |r, c| C64::new(r as f64, c as f64));
        assert_eq!(q.quant_noise_cov(&w).max(), 0.0);
    }

    #[test]
    fn noise_cov_scalar_case() {
        // N_b = 1, single precoder entry w = 2: C_qq = alpha*beta*4.
        let q = QuantModel::from_bits(Bits::Finite(1)).unwrap();
        let w = DMatrix::from_element(1, 1, C64::new(2.0, 0.0));
        let c = q.quant_noise_cov(&w);
        assert_relative_eq!(c[0], q.alpha() * q.beta() * 4.0, max_relative = 1e-15);
    }

    #[test]
    fn noise_cov_orthonormal_columns() {
        // W with orthonormal columns and N_u = N_b: diag(W W^H) = I.
        let q = QuantModel::from_bits(Bits::Finite(3)).unwrap();
        let n = 4;
        let w = DMatrix::from_fn(n, n, |r, c| {
            // Unitary DFT matrix.
            let phase = -2.0 * PI * (r * c) as f64 / n as f64;
            C64::new(phase.cos(), phase.sin()) / (n as f64).sqrt()
        });
        let c = q.quant_noise_cov(&w);
        for m in 0..n {
            assert_relative_eq!(c[m], q.alpha() * q.beta(), max_relative = 1e-12);
        }
    }

    #[test]
    fn transmit_power_identity() {
        // diag(alpha^2 W W^H + C_qq) = alpha * diag(W W^H), exactly:
        // alpha^2 + alpha*beta = alpha(alpha + beta) = alpha.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &b in &[Bits::Finite(1), Bits::Finite(3), Bits::Infinite] {
            let q = QuantModel::from_bits(b).unwrap();
            let w = DMatrix::from_fn(6, 3, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let c = q.quant_noise_cov(&w);
            let gram = &w * w.adjoint();
            for m in 0..6 {
                let lhs = q.alpha() * q.alpha() * gram[(m, m)].re + c[m];
                let rhs = q.alpha() * gram[(m, m)].re;
                assert_relative_eq!(lhs, rhs, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn noise_cov_is_degree_two_homogeneous() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let q = QuantModel::from_bits(Bits::Finite(2)).unwrap();
        for _ in 0..50 {
            let w = DMatrix::from_fn(5, 2, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let s: f64 = rng.random::<f64>() * 3.0;
            let scaled = q.quant_noise_cov(&(&w * C64::new(s, 0.0)));
            let base = q.quant_noise_cov(&w);
            for m in 0..5 {
                assert_relative_eq!(scaled[m], s * s * base[m], max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn bits_serde_round_trip() {
        #[derive(Serialize, Deserialize, PartialEq, Debug)]
        struct Holder {
            bits: Vec<Bits>,
        }
        let h = Holder {
            bits: vec![Bits::Finite(2), Bits::Finite(3), Bits::Infinite],
        };
        let s = toml::to_string(&h).unwrap();
        let back: Holder = toml::from_str(&s).unwrap();
        assert_eq!(h, back);
        let parsed: Holder = toml::from_str("bits = [1, \"inf\"]").unwrap();
        assert_eq!(parsed.bits, vec![Bits::Finite(1), Bits::Infinite]);
        assert!(toml::from_str::<Holder>("bits = [0]").is_err());
        assert!(toml::from_str::<Holder>("bits = [-3]").is_err());
    }
}
