//! The symmetric group on three letters, permutation operators and
//! coefficient vectors over S₃.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64, ONE, ZERO};

/// Element of S₃.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Perm3 {
    E,
    P12,
    P13,
    P23,
    P123,
    P132,
}

impl Perm3 {
    /// Canonical order used by every coefficient vector.
    pub const ALL: [Perm3; 6] = [
        Perm3::E,
        Perm3::P12,
        Perm3::P13,
        Perm3::P23,
        Perm3::P123,
        Perm3::P132,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Zero-based images `[σ(1), σ(2), σ(3)]`.
    pub fn images(self) -> [usize; 3] {
        match self {
            Perm3::E => [0, 1, 2],
            Perm3::P12 => [1, 0, 2],
            Perm3::P13 => [2, 1, 0],
            Perm3::P23 => [0, 2, 1],
            Perm3::P123 => [1, 2, 0],
            Perm3::P132 => [2, 0, 1],
        }
    }

    pub fn from_images(img: [usize; 3]) -> Perm3 {
        *Perm3::ALL
            .iter()
            .find(|p| p.images() == img)
            .expect("not a permutation of three letters")
    }

    /// `self ∘ other`.
    pub fn compose(self, other: Perm3) -> Perm3 {
        let (s, o) = (self.images(), other.images());
        Perm3::from_images([s[o[0]], s[o[1]], s[o[2]]])
    }

    pub fn inverse(self) -> Perm3 {
        let s = self.images();
        let mut inv = [0; 3];
        for (i, &si) in s.iter().enumerate() {
            inv[si] = i;
        }
        Perm3::from_images(inv)
    }

    /// `τ σ τ⁻¹`.
    pub fn conjugate_by(self, tau: Perm3) -> Perm3 {
        tau.compose(self).compose(tau.inverse())
    }

    /// +1 for even, −1 for odd permutations.
    pub fn sign(self) -> i32 {
        match self {
            Perm3::E | Perm3::P123 | Perm3::P132 => 1,
            _ => -1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Perm3::E => "e",
            Perm3::P12 => "(12)",
            Perm3::P13 => "(13)",
            Perm3::P23 => "(23)",
            Perm3::P123 => "(123)",
            Perm3::P132 => "(132)",
        }
    }
}

impl fmt::Display for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Perm3 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        Ok(match t {
            "e" | "" | "id" => Perm3::E,
            "12" | "21" => Perm3::P12,
            "13" | "31" => Perm3::P13,
            "23" | "32" => Perm3::P23,
            "123" | "231" | "312" => Perm3::P123,
            "132" | "321" | "213" => Perm3::P132,
            _ => return Err(Error::InvalidParameter(format!("unknown permutation {s:?}"))),
        })
    }
}

/// Sign of the imaginary part `±√(AB − C²)` in the extremal families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            _ => Err(Error::InvalidParameter(format!("unknown sign {s:?}"))),
        }
    }
}

/// `V_σ = Σ |j1 j2 j3><j_σ(1) j_σ(2) j_σ(3)|` on `(C^d)^⊗3`.
pub fn perm_operator(sigma: Perm3, d: usize) -> CMat {
    let n = d * d * d;
    let img = sigma.images();
    let mut v = CMat::zeros(n, n);
    for j1 in 0..d {
        for j2 in 0..d {
            for j3 in 0..d {
                let j = [j1, j2, j3];
                let row = (j1 * d + j2) * d + j3;
                let col = (j[img[0]] * d + j[img[1]]) * d + j[img[2]];
                v[(row, col)] = ONE;
            }
        }
    }
    v
}

/// General complex coefficients `(a_σ)` in the canonical order of [`Perm3::ALL`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct S3Vec(pub [C64; 6]);

impl S3Vec {
    pub fn zero() -> Self {
        S3Vec([ZERO; 6])
    }

    /// Unit coefficient on a single permutation.
    pub fn unit(sigma: Perm3) -> Self {
        let mut v = S3Vec::zero();
        v.0[sigma.index()] = ONE;
        v
    }

    pub fn get(&self, sigma: Perm3) -> C64 {
        self.0[sigma.index()]
    }

    /// Coefficients of `V_τ (Σ a_σ V_σ) V_τ⁻¹ = Σ a_σ V_{τστ⁻¹}`.
    pub fn relabel(&self, tau: Perm3) -> Self {
        let mut out = S3Vec::zero();
        for s in Perm3::ALL {
            out.0[s.conjugate_by(tau).index()] = self.get(s);
        }
        out
    }

    /// `Σ a_σ·m_σ` for per-permutation matrices `m`.
    pub fn combine(&self, mats: &[CMat; 6]) -> CMat {
        CMat::combination(&self.0, mats)
    }

    /// True when `a_e, a_12, a_13, a_23` are real and `a_132 = conj(a_123)`.
    pub fn is_hermitian_pattern(&self, tol: f64) -> bool {
        self.0[..4].iter().all(|z| z.im.abs() <= tol)
            && (self.get(Perm3::P132) - self.get(Perm3::P123).conj()).norm() <= tol
    }
}

/// Hermitian-pattern coefficients over S₃: `a_e, a_12, a_13, a_23` real,
/// `a_123` complex and `a_132 = conj(a_123)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct S3Coeffs {
    pub d: usize,
    pub ae: f64,
    pub a12: f64,
    pub a13: f64,
    pub a23: f64,
    pub a123: C64,
}

impl S3Coeffs {
    /// From `(a_e, a_12, a_13, a_23, Re a_123, Im a_123)`.
    pub fn new(d: usize, t: [f64; 6]) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedDimension {
                d,
                reason: "tripartite families need d >= 2",
            });
        }
        if let Some(x) = t.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite coefficient {x}")));
        }
        Ok(S3Coeffs {
            d,
            ae: t[0],
            a12: t[1],
            a13: t[2],
            a23: t[3],
            a123: C64::new(t[4], t[5]),
        })
    }

    pub fn tuple(&self) -> [f64; 6] {
        [
            self.ae, self.a12, self.a13, self.a23, self.a123.re, self.a123.im,
        ]
    }

    pub fn to_vec(&self) -> S3Vec {
        S3Vec([
            C64::new(self.ae, 0.0),
            C64::new(self.a12, 0.0),
            C64::new(self.a13, 0.0),
            C64::new(self.a23, 0.0),
            self.a123,
            self.a123.conj(),
        ])
    }

    /// Inverse of [`S3Coeffs::to_vec`]; fails unless the pattern is Hermitian.
    pub fn from_vec(d: usize, v: &S3Vec, tol: f64) -> Result<Self> {
        if !v.is_hermitian_pattern(tol) {
            return Err(Error::InvalidParameter(
                "coefficients do not have the Hermitian pattern".into(),
            ));
        }
        let a = v.get(Perm3::P123);
        let b = v.get(Perm3::P132).conj();
        let m = (a + b) * 0.5;
        S3Coeffs::new(
            d,
            [v.0[0].re, v.0[1].re, v.0[2].re, v.0[3].re, m.re, m.im],
        )
    }

    pub fn relabel(&self, tau: Perm3) -> Self {
        S3Coeffs::from_vec(self.d, &self.to_vec().relabel(tau), f64::INFINITY)
            .expect("relabelling preserves the Hermitian pattern")
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut t = self.tuple();
        for x in &mut t {
            *x *= s;
        }
        S3Coeffs::new(self.d, t).expect("finite scaling")
    }

    /// `d²a_e + d(a_12 + a_13 + a_23) + 2 Re a_123`: the trace-preservation
    /// sum, equal to `Tr(Σ a_σ V_σ)/d`.
    pub fn tp_sum(&self) -> f64 {
        let d = self.d as f64;
        d * d * self.ae + d * (self.a12 + self.a13 + self.a23) + 2.0 * self.a123.re
    }

    /// `Σ a_σ V_σ`.
    pub fn perm_combination(&self) -> CMat {
        let mats = perm_operators(self.d);
        self.to_vec().combine(&mats)
    }
}

/// All six permutation operators in canonical order.
pub fn perm_operators(d: usize) -> [CMat; 6] {
    Perm3::ALL.map(|s| perm_operator(s, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_table_is_a_group() {
        for a in Perm3::ALL {
            assert_eq!(a.compose(a.inverse()), Perm3::E);
            for b in Perm3::ALL {
                for c in Perm3::ALL {
                    assert_eq!(a.compose(b).compose(c), a.compose(b.compose(c)));
                }
            }
        }
        assert_eq!(Perm3::P123.inverse(), Perm3::P132);
    }

    #[test]
    fn operators_represent_composition() {
        let d = 2;
        for a in Perm3::ALL {
            for b in Perm3::ALL {
                let lhs = &perm_operator(a, d) * &perm_operator(b, d);
                let ab = perm_operator(a.compose(b), d);
                let ba = perm_operator(b.compose(a), d);
                assert!(lhs == ab || lhs == ba);
            }
        }
    }

    #[test]
    fn conjugation_matches_relabel() {
        let d = 3;
        let c = S3Coeffs::new(d, [0.3, -0.2, 0.5, 0.1, 0.7, -0.4]).unwrap();
        let x = c.perm_combination();
        for tau in [Perm3::P12, Perm3::P13, Perm3::P23] {
            let v = perm_operator(tau, d);
            let conj = &(&v * &x) * &v;
            let relabelled = c.relabel(tau).perm_combination();
            assert!(conj.approx_eq(&relabelled, 1e-14), "tau = {tau}");
        }
    }

    #[test]
    fn parse_labels() {
        for p in Perm3::ALL {
            assert_eq!(p.label().parse::<Perm3>().unwrap(), p);
        }
        assert!("(14)".parse::<Perm3>().is_err());
    }

    #[test]
    fn hermitian_pattern_gives_hermitian_operator() {
        let c = S3Coeffs::new(3, [0.3, -0.2, 0.5, 0.1, 0.7, -0.4]).unwrap();
        assert!(c.perm_combination().hermiticity_defect() < 1e-15);
        let back = S3Coeffs::from_vec(3, &c.to_vec(), 0.0).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn trace_matches_tp_sum() {
        let c = S3Coeffs::new(3, [0.3, -0.2, 0.5, 0.1, 0.7, -0.4]).unwrap();
        let tr = c.perm_combination().trace();
        assert!((tr.re - 3.0 * c.tp_sum()).abs() < 1e-12 && tr.im.abs() < 1e-12);
    }
}
