use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{ArithError, Scalar};

/// A primitive integer linear form in `y_1, …, y_r, z`.
///
/// Invariants: not all zero, content 1, first nonzero coefficient positive.
/// Signs and content always live in the scalar of the owning expression, so
/// two forms are equal as functions up to a unit iff they are equal here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct LinearForm(Vec<i64>);

impl LinearForm {
    /// Normalizes integer coefficients, returning the form and the integer
    /// scale with `scale * form == raw`.
    pub fn from_ints(raw: &[i64]) -> Result<(LinearForm, i64), ArithError> {
        let g = raw.iter().fold(0i64, |g, &c| g.gcd(&c));
        if g == 0 {
            return Err(ArithError::ZeroForm);
        }
        let first = raw.iter().find(|&&c| c != 0).copied().unwrap_or(1);
        let scale = if first < 0 { -g } else { g };
        Ok((LinearForm(raw.iter().map(|c| c / scale).collect()), scale))
    }

    /// Normalizes rational coefficients: `scale * form == raw`.
    pub fn normalize<S: Scalar>(raw: &[S]) -> Result<(LinearForm, S), ArithError> {
        let parts: Vec<(BigInt, BigInt)> = raw.iter().map(Scalar::to_big).collect();
        let lcm = parts.iter().fold(BigInt::one(), |l, (_, d)| l.lcm(d));
        let ints: Vec<BigInt> = parts.iter().map(|(n, d)| n * (&lcm / d)).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return Err(ArithError::ZeroForm);
        }
        let first = ints.iter().find(|c| !c.is_zero()).expect("nonzero");
        let signed_g = if first.is_negative() { -g } else { g };
        let coeffs =
            ints.iter().map(|c| (c / &signed_g).to_i64().ok_or(ArithError::Overflow)).collect::<Result<Vec<_>, _>>()?;
        let scale = S::from_big(signed_g, lcm).ok_or(ArithError::Overflow)?;
        Ok((LinearForm(coeffs), scale))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    /// Number of variables including `z`.
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn z_coeff(&self) -> i64 {
        *self.0.last().expect("forms have at least one variable")
    }

    /// Coefficients of `y_1, …, y_r`.
    pub fn y_coeffs(&self) -> &[i64] {
        &self.0[..self.0.len() - 1]
    }

    /// True when the form involves no `z` (a pole that cannot be expanded
    /// around `z = ∞`).
    pub fn is_pure_y(&self) -> bool {
        self.z_coeff() == 0
    }

    pub fn evaluate<S: Scalar>(&self, point: &[S]) -> S {
        self.0.iter().zip(point).fold(S::zero(), |acc, (&c, v)| acc + S::from_int(c) * v.clone())
    }

    /// Image under `y_i ↦ Σ_j m[i][j] y_j` (z fixed), renormalized.
    pub fn substitute(&self, m: &[Vec<i64>]) -> Result<(LinearForm, i64), ArithError> {
        let r = self.0.len() - 1;
        let mut raw = vec![0i64; r + 1];
        for (i, &c) in self.0[..r].iter().enumerate() {
            for (j, &mij) in m[i].iter().enumerate() {
                raw[j] += c * mij;
            }
        }
        raw[r] = self.z_coeff();
        LinearForm::from_ints(&raw)
    }
}

impl TryFrom<Vec<i64>> for LinearForm {
    type Error = ArithError;

    fn try_from(raw: Vec<i64>) -> Result<Self, Self::Error> {
        match LinearForm::from_ints(&raw)? {
            (form, 1) => Ok(form),
            _ => Err(ArithError::NotNormalized),
        }
    }
}

impl From<LinearForm> for Vec<i64> {
    fn from(f: LinearForm) -> Self {
        f.0
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_scalar;
    use crate::Rat;

    fn rats(v: &[&str]) -> Vec<Rat> {
        v.iter().map(|s| parse_scalar(s).unwrap()).collect()
    }

    #[test]
    fn content_extraction() {
        let (f, s) = LinearForm::normalize(&rats(&["2", "0", "2"])).unwrap();
        assert_eq!(f.coeffs(), &[1, 0, 1]);
        assert_eq!(s, Rat::from_int(2));
    }

    #[test]
    fn sign_rule() {
        let (f, s) = LinearForm::normalize(&rats(&["-1", "0", "-1"])).unwrap();
        assert_eq!(f.coeffs(), &[1, 0, 1]);
        assert_eq!(s, Rat::from_int(-1));
    }

    #[test]
    fn clears_denominators() {
        let (f, s) = LinearForm::normalize(&rats(&["1/2", "0", "3/2"])).unwrap();
        assert_eq!(f.coeffs(), &[1, 0, 3]);
        assert_eq!(s, parse_scalar::<Rat>("1/2").unwrap());
    }

    #[test]
    fn zero_form_is_an_error() {
        assert_eq!(LinearForm::normalize(&rats(&["0", "0"])), Err(ArithError::ZeroForm));
        assert_eq!(LinearForm::from_ints(&[0, 0, 0]), Err(ArithError::ZeroForm));
    }

    #[test]
    fn deserialization_rejects_unnormalized() {
        assert!(serde_json::from_str::<LinearForm>("[-1,1]").is_err());
        assert!(serde_json::from_str::<LinearForm>("[2,2]").is_err());
        let f: LinearForm = serde_json::from_str("[1,-1,0]").unwrap();
        assert_eq!(f.to_string(), "[1,-1,0]");
    }

    #[test]
    fn swap_substitution_flips_sign() {
        let (f, _) = LinearForm::from_ints(&[1, -1, 0]).unwrap();
        let swap = vec![vec![0, 1], vec![1, 0]];
        let (g, s) = f.substitute(&swap).unwrap();
        assert_eq!(g, f);
        assert_eq!(s, -1);
    }
}
