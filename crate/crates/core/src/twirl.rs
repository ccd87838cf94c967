//! Twirling as the Hilbert–Schmidt projection onto the span of an invariant
//! operator basis, and the explicit O⊗O twirl.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::choi::{flip, max_entangled};
use crate::error::{Error, Result};
use crate::hh;
use crate::linalg::{herm_eigvals, CMat, Tolerances, C64, ZERO};
use crate::quo;
use crate::s3::{perm_operator, Perm3};

/// Largest accepted condition number of a Gram matrix.
pub const MAX_CONDITION: f64 = 1e12;

/// The symmetry families with a known invariant basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    /// `H⊗H` for signed permutations `H`, on `d²`.
    Hh,
    /// `U⊗U⊗U`, on `d³`.
    Uuu,
    /// `U⊗Ū⊗U`, on `d³`.
    Uubaru,
    /// `O⊗O` for real orthogonal `O`, on `d²`.
    Oo,
    /// The five partially transposed permutations without `(13)`, on `d³`.
    Qorth,
}

impl Symmetry {
    pub const ALL: [Symmetry; 5] = [
        Symmetry::Hh,
        Symmetry::Uuu,
        Symmetry::Uubaru,
        Symmetry::Oo,
        Symmetry::Qorth,
    ];

    /// Number of tensor factors the representation acts on.
    pub fn parties(self) -> u32 {
        match self {
            Symmetry::Hh | Symmetry::Oo => 2,
            _ => 3,
        }
    }

    /// Local dimension for a square matrix of side `n`.
    pub fn local_dim(self, n: usize) -> Result<usize> {
        let k = self.parties();
        let d = (n as f64).powf(1.0 / k as f64).round() as usize;
        if d < 2 || d.pow(k) != n {
            return Err(Error::Dimension(format!(
                "{self} acts on d^{k}-dimensional spaces with d >= 2; {n} is not of that form"
            )));
        }
        Ok(d)
    }

    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Hh => "hh",
            Symmetry::Uuu => "uuu",
            Symmetry::Uubaru => "uubaru",
            Symmetry::Oo => "oo",
            Symmetry::Qorth => "qorth",
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Symmetry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Symmetry::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown symmetry family {s:?}")))
    }
}

/// Linearly independent operators spanning an invariant algebra.
#[derive(Clone, Debug)]
pub struct InvBasis {
    name: String,
    dim: usize,
    elements: Vec<CMat>,
    gram: CMat,
    condition: f64,
}

/// Result of projecting onto an invariant span.
#[derive(Clone, Debug)]
pub struct Projection {
    pub matrix: CMat,
    pub coeffs: Vec<C64>,
    /// `‖x − E(x)‖_F`.
    pub residual_norm: f64,
}

impl InvBasis {
    pub fn new(name: impl Into<String>, elements: Vec<CMat>) -> Result<Self> {
        let name = name.into();
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidParameter(format!("basis {name} is empty")))?;
        let dim = first.rows();
        if elements.iter().any(|e| e.rows() != dim || e.cols() != dim) {
            return Err(Error::Dimension(format!(
                "basis {name} mixes matrix sizes"
            )));
        }
        let k = elements.len();
        let gram = CMat::from_fn(k, k, |i, j| elements[i].hs_inner(&elements[j]));
        let eigs = herm_eigvals(&gram, &Tolerances::default())?;
        let (lo, hi) = (eigs[0], eigs[k - 1]);
        let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        if condition > MAX_CONDITION {
            return Err(Error::IllConditioned(condition));
        }
        Ok(InvBasis {
            name,
            dim,
            elements,
            gram,
            condition,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Coefficients `c = G⁻¹v` with `v_i = Tr(B_i† x)`.
    pub fn coefficients(&self, x: &CMat) -> Result<Vec<C64>> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::Dimension(format!(
                "basis {} acts on {2}x{2} matrices, got {}x{}",
                self.name,
                x.rows(),
                self.dim
            )));
        }
        let v: Vec<C64> = self.elements.iter().map(|b| b.hs_inner(x)).collect();
        solve(&self.gram, &v)
    }

    pub fn project(&self, x: &CMat) -> Result<Projection> {
        let coeffs = self.coefficients(x)?;
        let matrix = CMat::combination(&coeffs, &self.elements);
        let residual_norm = (x - &matrix).frobenius_norm();
        Ok(Projection {
            matrix,
            coeffs,
            residual_norm,
        })
    }
}

/// Gaussian elimination with partial pivoting.
fn solve(a: &CMat, b: &[C64]) -> Result<Vec<C64>> {
    let n = a.rows();
    let mut m: Vec<Vec<C64>> = (0..n)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r]);
            row
        })
        .collect();
    let scale = a.max_abs();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .expect("non-empty range");
        if m[pivot][col].norm() <= scale * 1e-300 {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        m.swap(col, pivot);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f == ZERO {
                continue;
            }
            for c in col..=n {
                let v = m[col][c];
                m[r][c] -= f * v;
            }
        }
    }
    let mut x = vec![ZERO; n];
    for r in (0..n).rev() {
        let mut s = m[r][n];
        for c in r + 1..n {
            s -= m[r][c] * x[c];
        }
        x[r] = s / m[r][r];
    }
    Ok(x)
}

/// Trace-preserving conditional expectation onto the span of `basis`.
pub fn cond_expect(x: &CMat, basis: &InvBasis) -> Result<CMat> {
    Ok(basis.project(x)?.matrix)
}

fn require_d2(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "invariant bases need d >= 2",
        });
    }
    Ok(())
}

/// Unnormalized Choi matrices of `ψ₀..ψ₃`.
pub fn hh_basis(d: usize) -> Result<InvBasis> {
    require_d2(d)?;
    InvBasis::new("hh", hh::basis_chois(d).to_vec())
}

/// `{V_σ}`; at `d = 2` `V_e` is dropped since it is a combination of the others.
pub fn uuu_basis(d: usize) -> Result<InvBasis> {
    require_d2(d)?;
    let els = Perm3::ALL
        .iter()
        .filter(|&&s| d > 2 || s != Perm3::E)
        .map(|&s| perm_operator(s, d))
        .collect();
    InvBasis::new("uuu", els)
}

/// `{T_σ = V_σ^{T_B}}`; at `d = 2` `T_e` is dropped.
pub fn uubaru_basis(d: usize) -> Result<InvBasis> {
    require_d2(d)?;
    let els = Perm3::ALL
        .iter()
        .filter(|&&s| d > 2 || s != Perm3::E)
        .map(|&s| quo::build_t(s, d))
        .collect();
    InvBasis::new("uubaru", els)
}

/// `{T_σ : σ ≠ (13)}`.
pub fn qorth_basis(d: usize) -> Result<InvBasis> {
    require_d2(d)?;
    let els = Perm3::ALL
        .iter()
        .filter(|&&s| s != Perm3::P13)
        .map(|&s| quo::build_t(s, d))
        .collect();
    InvBasis::new("qorth", els)
}

/// `{Π₁, Π₂, Π₃}`.
pub fn oo_basis(d: usize) -> Result<InvBasis> {
    require_d2(d)?;
    let p = OOProjections::new(d);
    InvBasis::new("oo", vec![p.p1, p.p2, p.p3])
}

pub fn std_basis(sym: Symmetry, d: usize) -> Result<InvBasis> {
    match sym {
        Symmetry::Hh => hh_basis(d),
        Symmetry::Uuu => uuu_basis(d),
        Symmetry::Uubaru => uubaru_basis(d),
        Symmetry::Oo => oo_basis(d),
        Symmetry::Qorth => qorth_basis(d),
    }
}

/// The invariant bases at one dimension.
#[derive(Clone, Debug)]
pub struct StdBases {
    pub hh: InvBasis,
    pub uuu: InvBasis,
    pub uubaru: InvBasis,
    pub qorth: InvBasis,
}

pub fn std_bases(d: usize) -> Result<StdBases> {
    Ok(StdBases {
        hh: hh_basis(d)?,
        uuu: uuu_basis(d)?,
        uubaru: uubaru_basis(d)?,
        qorth: qorth_basis(d)?,
    })
}

/// Orthogonal projections spanning the `O⊗O`-invariant algebra:
/// `Π₁ = |Ω><Ω|`, `Π₂ = (Id+F)/2 − |Ω><Ω|`, `Π₃ = (Id−F)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct OOProjections {
    pub d: usize,
    pub p1: CMat,
    pub p2: CMat,
    pub p3: CMat,
}

impl OOProjections {
    pub fn new(d: usize) -> Self {
        let n = d * d;
        let id = CMat::identity(n);
        let f = flip(d);
        let omega = max_entangled(d);
        let sym = (&id + &f).scale_re(0.5);
        let p2 = &sym - &omega;
        let p3 = (&id - &f).scale_re(0.5);
        OOProjections {
            d,
            p1: omega,
            p2,
            p3,
        }
    }

    pub fn all(&self) -> [&CMat; 3] {
        [&self.p1, &self.p2, &self.p3]
    }

    pub fn ranks(&self) -> [usize; 3] {
        let d = self.d;
        [1, d * (d + 1) / 2 - 1, d * (d - 1) / 2]
    }
}

/// `Σ Tr(Π_i x) Π_i / rank(Π_i)`.
pub fn twirl_oo(x: &CMat, d: usize) -> Result<CMat> {
    require_d2(d)?;
    if x.rows() != d * d || x.cols() != d * d {
        return Err(Error::Dimension(format!(
            "O⊗O twirl at d = {d} needs a {n}x{n} matrix, got {}x{}",
            x.rows(),
            x.cols(),
            n = d * d
        )));
    }
    let p = OOProjections::new(d);
    let mut out = CMat::zeros(d * d, d * d);
    for (pi, rank) in p.all().into_iter().zip(p.ranks()) {
        let w = pi.hs_inner(x) / rank as f64;
        out.add_scaled(w, pi);
    }
    Ok(out)
}

/// Projection for a named symmetry; the `O⊗O` case uses [`twirl_oo`].
pub fn twirl(sym: Symmetry, x: &CMat) -> Result<Projection> {
    let d = sym.local_dim(x.rows())?;
    if sym == Symmetry::Oo {
        let p = OOProjections::new(d);
        let matrix = twirl_oo(x, d)?;
        let coeffs = p
            .all()
            .iter()
            .zip(p.ranks())
            .map(|(pi, r)| pi.hs_inner(x) / r as f64)
            .collect();
        let residual_norm = (x - &matrix).frobenius_norm();
        return Ok(Projection {
            matrix,
            coeffs,
            residual_norm,
        });
    }
    std_basis(sym, d)?.project(x)
}
