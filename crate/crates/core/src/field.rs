//! Base field descriptors and the constants derived from them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base field of the matrix cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    /// Real dimension of the field.
    pub fn d(self) -> u32 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }

    pub fn from_d(d: u32) -> Result<Self> {
        match d {
            1 => Ok(Field::R),
            2 => Ok(Field::C),
            4 => Ok(Field::H),
            _ => Err(Error::validation(format!("no field of real dimension {d}"))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        };
        f.write_str(s)
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "R" | "r" | "real" => Ok(Field::R),
            "C" | "c" | "complex" => Ok(Field::C),
            "H" | "h" | "quaternion" => Ok(Field::H),
            other => Err(Error::validation(format!("unknown field '{other}'"))),
        }
    }
}

/// Field together with the rank `q` of the cone and the derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldParams {
    pub field: Field,
    pub q: usize,
}

impl FieldParams {
    pub fn new(field: Field, q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::validation("rank q must be at least 1"));
        }
        Ok(FieldParams { field, q })
    }

    pub fn d(&self) -> u32 {
        self.field.d()
    }

    pub fn d_f64(&self) -> f64 {
        self.field.d() as f64
    }

    /// Jack parameter 2/d; exact in binary for every field.
    pub fn alpha(&self) -> f64 {
        2.0 / self.d_f64()
    }

    /// Real dimension of the space of Hermitian q x q matrices.
    pub fn n(&self) -> usize {
        let q = self.q;
        q + (self.d() as usize) * q * (q - 1) / 2
    }

    /// n / q, the exponent shift in the cone's power functions.
    pub fn n_over_q(&self) -> f64 {
        self.n() as f64 / self.q as f64
    }

    /// d(q - 1/2) + 1, the exponent offset of the ball weight.
    pub fn gamma(&self) -> f64 {
        self.d_f64() * (self.q as f64 - 0.5) + 1.0
    }

    /// Same field, different rank.
    pub fn with_rank(&self, q: usize) -> Result<Self> {
        FieldParams::new(self.field, q)
    }

    /// Error unless the field has a concrete matrix realization.
    pub fn require_matrix_field(&self) -> Result<()> {
        if self.field == Field::H {
            Err(Error::Unsupported(
                "quaternionic matrices are handled only through their spectra".into(),
            ))
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_constants() {
        let r2 = FieldParams::new(Field::R, 2).unwrap();
        assert_eq!(r2.n(), 3);
        assert_eq!(r2.alpha(), 2.0);
        assert_eq!(r2.gamma(), 2.5);
        let c3 = FieldParams::new(Field::C, 3).unwrap();
        assert_eq!(c3.n(), 9);
        assert_eq!(c3.alpha(), 1.0);
        assert_eq!(c3.gamma(), 6.0);
        let h2 = FieldParams::new(Field::H, 2).unwrap();
        assert_eq!(h2.n(), 6);
        assert_eq!(h2.alpha(), 0.5);
        for field in [Field::R, Field::C, Field::H] {
            for q in 1..6 {
                let fp = FieldParams::new(field, q).unwrap();
                let d = fp.d_f64();
                assert_eq!(fp.n() as f64, q as f64 + d / 2.0 * (q * (q - 1)) as f64);
                assert_eq!(fp.gamma(), d * (q as f64 - 0.5) + 1.0);
            }
        }
    }

    #[test]
    fn rank_zero_rejected() {
        assert!(FieldParams::new(Field::R, 0).is_err());
    }

    #[test]
    fn parse_field() {
        assert_eq!("C".parse::<Field>().unwrap(), Field::C);
        assert!("Q".parse::<Field>().is_err());
        assert_eq!(Field::from_d(4).unwrap(), Field::H);
    }
}
