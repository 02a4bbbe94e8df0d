//! Spreading signature alphabets.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// A length-`L` sequence over `{-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinarySignature(Vec<i8>);

impl BinarySignature {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|&&e| e != 1 && e != -1) {
            return Err(Error::InvalidConfig(format!(
                "binary signature entry {bad} not in {{-1, +1}}"
            )));
        }
        Ok(Self(entries))
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![1; len])
    }

    /// Entrywise sign, with `sign(0) = +1`.
    pub fn from_signs(values: &[f64]) -> Self {
        Self(values.iter().map(|&x| if x < 0.0 { -1 } else { 1 }).collect())
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Self {
        Self((0..len).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&e| f64::from(e)).collect()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.0.iter().map(|&e| Complex64::new(f64::from(e), 0.0)).collect()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|&e| -e).collect())
    }

    /// Representative of the `{s, -s}` pair whose first entry is `+1`.
    pub fn canonicalized(&self) -> Self {
        match self.0.first() {
            Some(&-1) => self.negated(),
            _ => self.clone(),
        }
    }

    /// Splits into the first `n` entries and the rest.
    pub fn split_at(&self, n: usize) -> (Self, Self) {
        let (a, b) = self.0.split_at(n);
        (Self(a.to_vec()), Self(b.to_vec()))
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self([self.0.as_slice(), other.0.as_slice()].concat())
    }
}

impl fmt::Display for BinarySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i8::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// One of the four units `{1, j, -1, -j}`, i.e. `j^k` for `k = 0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuadUnit {
    One,
    J,
    MinusOne,
    MinusJ,
}

impl QuadUnit {
    pub const ALL: [QuadUnit; 4] = [QuadUnit::One, QuadUnit::J, QuadUnit::MinusOne, QuadUnit::MinusJ];

    pub fn from_exponent(k: u8) -> Self {
        Self::ALL[usize::from(k % 4)]
    }

    pub fn exponent(self) -> u8 {
        self as u8
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            QuadUnit::One => Complex64::new(1.0, 0.0),
            QuadUnit::J => Complex64::new(0.0, 1.0),
            QuadUnit::MinusOne => Complex64::new(-1.0, 0.0),
            QuadUnit::MinusJ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Self {
        Self::from_exponent(4 - self.exponent())
    }
}

impl std::ops::Mul for QuadUnit {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: QuadUnit) -> Self {
        Self::from_exponent(self.exponent() + rhs.exponent())
    }
}

impl fmt::Display for QuadUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadUnit::One => "1",
            QuadUnit::J => "j",
            QuadUnit::MinusOne => "-1",
            QuadUnit::MinusJ => "-j",
        })
    }
}

impl FromStr for QuadUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "+1" => Ok(QuadUnit::One),
            "j" | "+j" | "i" | "+i" => Ok(QuadUnit::J),
            "-1" => Ok(QuadUnit::MinusOne),
            "-j" | "-i" => Ok(QuadUnit::MinusJ),
            other => Err(Error::Parse(format!("'{other}' is not one of 1, -1, j, -j"))),
        }
    }
}

/// A length-`L` sequence over `{1, -1, j, -j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuaternarySignature(Vec<QuadUnit>);

impl QuaternarySignature {
    pub fn new(entries: Vec<QuadUnit>) -> Self {
        Self(entries)
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![QuadUnit::One; len])
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Self {
        Self(
            (0..len)
                .map(|_| QuadUnit::from_exponent(rng.random_range(0..4u8)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[QuadUnit] {
        &self.0
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.0.iter().map(|u| u.to_complex()).collect()
    }

    pub fn rotated(&self, unit: QuadUnit) -> Self {
        Self(self.0.iter().map(|u| *u * unit).collect())
    }

    /// Orbit representative whose first entry is `1`.
    pub fn canonicalized(&self) -> Self {
        match self.0.first() {
            Some(&first) => self.rotated(first.conj()),
            None => self.clone(),
        }
    }
}

impl From<&BinarySignature> for QuaternarySignature {
    fn from(b: &BinarySignature) -> Self {
        Self(
            b.entries()
                .iter()
                .map(|&e| if e > 0 { QuadUnit::One } else { QuadUnit::MinusOne })
                .collect(),
        )
    }
}

impl fmt::Display for QuaternarySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(QuadUnit::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Any signature a user can transmit. `Continuous` holds the unconstrained
/// eigenvector designs used as benchmarks.
#[derive(Debug, Clone, PartialEq)]
pub enum Signature {
    Binary(BinarySignature),
    Quaternary(QuaternarySignature),
    Continuous(Vec<Complex64>),
}

impl Signature {
    pub fn len(&self) -> usize {
        match self {
            Signature::Binary(s) => s.len(),
            Signature::Quaternary(s) => s.len(),
            Signature::Continuous(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        match self {
            Signature::Binary(s) => s.to_complex(),
            Signature::Quaternary(s) => s.to_complex(),
            Signature::Continuous(v) => v.clone(),
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Binary(s) => s.fmt(f),
            Signature::Quaternary(s) => s.fmt(f),
            Signature::Continuous(v) => {
                let parts: Vec<String> = v.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// Parses a comma- or whitespace-separated signature. All-real input
/// becomes [`Signature::Binary`], anything containing `j`/`i` becomes
/// [`Signature::Quaternary`].
pub fn parse_signature(text: &str) -> Result<Signature> {
    let tokens: Vec<&str> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(Error::Parse("empty signature".into()));
    }
    let units = tokens
        .iter()
        .map(|t| t.parse::<QuadUnit>())
        .collect::<Result<Vec<_>>>()?;
    if units.iter().all(|u| matches!(u, QuadUnit::One | QuadUnit::MinusOne)) {
        let entries = units.iter().map(|&u| if u == QuadUnit::One { 1 } else { -1 }).collect();
        Ok(Signature::Binary(BinarySignature(entries)))
    } else {
        Ok(Signature::Quaternary(QuaternarySignature(units)))
    }
}
