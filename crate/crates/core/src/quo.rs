//! `U⊗Ū⊗U` and quantum orthogonal symmetry: the partially transposed
//! permutation operators `T_σ = V_σ^{T_B}`, the covariant maps
//! `M_σ = (T ⊗ id)∘L_σ`, their positivity, CP and CCP conditions, extremal
//! maps and the A-BC separability decision for invariant states.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Check, Evidence, Verdict};
use crate::choi::{LinMapSpec, Structured};
use crate::error::{Error, Result};
use crate::linalg::{herm_eigvals, is_psd, partial_transpose, CMat, Dims, Tolerances, ZERO};
use crate::region::{Constraint, RegionCheck};
use crate::s3::{perm_operator, Perm3, S3Coeffs, S3Vec, Sign};
use crate::werner3::{extremal_s, g_iso, perm_entries, tp_normalize};
use crate::witness::{grid_params, SweepSummary, WitnessFamily, WitnessImages};

/// `T_σ = V_σ^{T_B}`.
pub fn build_t(sigma: Perm3, d: usize) -> CMat {
    let dims = Dims::uniform(d, 3).expect("d >= 1");
    partial_transpose(&perm_operator(sigma, d), &dims, 1).expect("matching dimensions")
}

/// `M_σ`, whose unnormalized Choi matrix is `T_σ`.
pub fn build_m(sigma: Perm3, d: usize) -> LinMapSpec {
    map_of_vec(&S3Vec::unit(sigma), d)
}

pub fn map_of_vec(coeffs: &S3Vec, d: usize) -> LinMapSpec {
    LinMapSpec::structured(Structured::Quo {
        d,
        coeffs: *coeffs,
        adjoint: false,
    })
}

/// `(Σ a_σ M_σ)(X)`: `Σ a_σ L_σ(X)` with the first output factor transposed.
pub fn apply_m(coeffs: &S3Vec, d: usize, x: &CMat) -> CMat {
    let mut out = CMat::zeros(d * d, d * d);
    for s in Perm3::ALL {
        let a = coeffs.get(s);
        if a == ZERO {
            continue;
        }
        for (r, c) in perm_entries(s, d) {
            out[(c[1] * d + r[2], r[1] * d + c[2])] += a * x[(r[0], c[0])];
        }
    }
    out
}

/// Dual map with `Tr(M(X) Y) = Tr(X M*(Y))`.
pub fn apply_m_adjoint(coeffs: &S3Vec, d: usize, y: &CMat) -> CMat {
    let mut out = CMat::zeros(d, d);
    for s in Perm3::ALL {
        let a = coeffs.get(s);
        if a == ZERO {
            continue;
        }
        for (r, c) in perm_entries(s, d) {
            out[(c[0], r[0])] += a * y[(r[1] * d + c[2], c[1] * d + r[2])];
        }
    }
    out
}

/// Coefficients over `{T_σ}` (equivalently `{M_σ}`). At `d = 2` the
/// antisymmetrizer vanishes, `T_e = T_12 + T_13 + T_23 − T_123 − T_132`,
/// and `a_e` is folded into the other five coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuoCoeffs(S3Coeffs);

impl QuoCoeffs {
    pub fn new(c: S3Coeffs) -> Self {
        if c.d != 2 || c.ae == 0.0 {
            return QuoCoeffs(c);
        }
        let mut t = c.tuple();
        let ae = t[0];
        t[0] = 0.0;
        for x in &mut t[1..4] {
            *x += ae;
        }
        t[4] -= ae;
        QuoCoeffs(S3Coeffs::new(c.d, t).expect("finite shift"))
    }

    pub fn from_tuple(d: usize, t: [f64; 6]) -> Result<Self> {
        Ok(QuoCoeffs::new(S3Coeffs::new(d, t)?))
    }

    pub fn coeffs(&self) -> &S3Coeffs {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0.d
    }

    pub fn map(&self) -> LinMapSpec {
        map_of_vec(&self.0.to_vec(), self.0.d)
    }

    /// `Σ a_σ T_σ`.
    pub fn operator(&self) -> CMat {
        let mats = Perm3::ALL.map(|s| build_t(s, self.0.d));
        self.0.to_vec().combine(&mats)
    }

    pub fn scale(&self, s: f64) -> Self {
        QuoCoeffs(self.0.scale(s))
    }
}

/// Positivity region, equivalent to `M(e₁₁) ⪰ 0`.
pub fn positivity_check_quo(q: &QuoCoeffs) -> RegionCheck {
    let c = q.coeffs();
    let d = c.d as f64;
    let r = c.a123.re;
    let cross = (c.a123 + c.a23).norm_sqr();
    if c.d == 2 {
        let s = c.a12 + c.a13 + c.a23 + 2.0 * r;
        return RegionCheck::new(vec![
            Constraint::new("a_12 >= 0", c.a12).tagged(1),
            Constraint::new("a_13 >= 0", c.a13).tagged(1),
            Constraint::new("a_23 >= 0", c.a23).tagged(1),
            Constraint::new("a_12 + a_13 + a_23 + 2 Re a_123 >= 0", s).tagged(2),
            Constraint::new("(a_12 + a_13 + a_23 + 2 Re a_123) a_23 >= |a_23 + a_123|^2", s * c.a23 - cross)
                .tagged(3),
        ]);
    }
    let c3 = c.ae + c.a12 + c.a13 + c.a23 + 2.0 * r;
    let c4 = c.ae + (d - 1.0) * c.a23;
    RegionCheck::new(vec![
        Constraint::new("a_e >= 0", c.ae).tagged(1),
        Constraint::new("a_e + a_12 >= 0", c.ae + c.a12).tagged(2),
        Constraint::new("a_e + a_13 >= 0", c.ae + c.a13).tagged(2),
        Constraint::new("a_e + a_12 + a_13 + a_23 + 2 Re a_123 >= 0", c3).tagged(3),
        Constraint::new("a_e + (d-1) a_23 >= 0", c4).tagged(4),
        Constraint::new(
            "(a_e + a_12 + a_13 + a_23 + 2 Re a_123)(a_e + (d-1) a_23) >= (d-1)|a_23 + a_123|^2",
            c3 * c4 - (d - 1.0) * cross,
        )
        .tagged(5),
    ])
}

pub fn is_positive_quo(q: &QuoCoeffs) -> bool {
    positivity_check_quo(q).holds()
}

fn numeric_check(label: &str, x: &CMat, tol: &Tolerances) -> Result<RegionCheck> {
    let min = herm_eigvals(x, tol)?[0];
    Ok(RegionCheck::new(vec![Constraint::new(label, min)]))
}

/// CP: `Σ a_σ T_σ ⪰ 0`. Closed form for `d ≥ 3`, eigensolver at `d = 2`.
pub fn cp_check_quo(q: &QuoCoeffs, tol: &Tolerances) -> Result<RegionCheck> {
    let c = q.coeffs();
    if c.d == 2 {
        return numeric_check("Choi matrix >= 0", &q.operator(), tol);
    }
    Ok(g_iso(&c.to_vec().relabel(Perm3::P12), c.d)?.check("CP"))
}

/// CCP: `(Σ a_σ T_σ)^{T_A} ⪰ 0`. Closed form for `d ≥ 3`, eigensolver at `d = 2`.
pub fn ccp_check_quo(q: &QuoCoeffs, tol: &Tolerances) -> Result<RegionCheck> {
    let c = q.coeffs();
    if c.d == 2 {
        let pt = partial_transpose(&q.operator(), &Dims::uniform(2, 3)?, 0)?;
        return numeric_check("partially transposed Choi matrix >= 0", &pt, tol);
    }
    Ok(g_iso(&c.to_vec().relabel(Perm3::P13), c.d)?.check("CCP"))
}

pub fn is_cp_quo(q: &QuoCoeffs, tol: &Tolerances) -> Result<bool> {
    Ok(cp_check_quo(q, tol)?.holds())
}

pub fn is_ccp_quo(q: &QuoCoeffs, tol: &Tolerances) -> Result<bool> {
    Ok(ccp_check_quo(q, tol)?.holds())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuoType {
    I,
    II,
    III,
    IV,
    /// `d = 2`, CP.
    D2I,
    /// `d = 2`, CCP.
    D2II,
}

impl QuoType {
    pub const HIGHER: [QuoType; 4] = [QuoType::I, QuoType::II, QuoType::III, QuoType::IV];
    pub const QUBIT: [QuoType; 2] = [QuoType::D2I, QuoType::D2II];

    pub fn for_dim(d: usize) -> &'static [QuoType] {
        if d == 2 {
            &Self::QUBIT
        } else {
            &Self::HIGHER
        }
    }

    /// Whether the type has free `(A, B, C)` parameters.
    pub fn is_parametric(self) -> bool {
        !matches!(self, QuoType::I | QuoType::II)
    }

    pub fn name(self) -> &'static str {
        match self {
            QuoType::I => "I",
            QuoType::II => "II",
            QuoType::III => "III",
            QuoType::IV => "IV",
            QuoType::D2I => "I'",
            QuoType::D2II => "II'",
        }
    }
}

impl std::str::FromStr for QuoType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            QuoType::I,
            QuoType::II,
            QuoType::III,
            QuoType::IV,
            QuoType::D2I,
            QuoType::D2II,
        ]
        .into_iter()
        .find(|t| t.name() == s)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown extremal type {s:?}")))
    }
}

/// Trace-preserving extremal positive map of the family.
#[derive(Clone, Debug, PartialEq)]
pub struct QuoExtremal {
    pub kind: QuoType,
    pub params: [f64; 3],
    pub sign: Sign,
    pub coeffs: QuoCoeffs,
    pub cp: bool,
    pub ccp: bool,
}

/// Unnormalized extremal tuple of the given type.
pub fn extremal_tuple_quo(kind: QuoType, a: f64, b: f64, c: f64, sign: Sign, d: usize) -> Result<QuoCoeffs> {
    let qubit = matches!(kind, QuoType::D2I | QuoType::D2II);
    if qubit != (d == 2) || d < 2 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "types I-IV need d >= 3 and the primed types need d = 2",
        });
    }
    let s = sign.value() * extremal_s(a, b, c)?;
    let df = d as f64;
    let t = match kind {
        QuoType::I => [df - 1.0, -1.0, 1.0 - df, -1.0, 1.0, 0.0],
        QuoType::II => [df - 1.0, 1.0 - df, -1.0, -1.0, 1.0, 0.0],
        QuoType::III | QuoType::D2I => [0.0, a + b - 2.0 * c, 0.0, b, c - b, s],
        QuoType::IV | QuoType::D2II => [0.0, 0.0, a + b - 2.0 * c, b, c - b, s],
    };
    QuoCoeffs::from_tuple(d, t)
}

pub fn extremal_quo(kind: QuoType, a: f64, b: f64, c: f64, sign: Sign, d: usize) -> Result<QuoExtremal> {
    let raw = extremal_tuple_quo(kind, a, b, c, sign, d)?;
    let coeffs = QuoCoeffs(tp_normalize(*raw.coeffs())?);
    let pos = positivity_check_quo(&coeffs);
    if !pos.holds() {
        let t = pos.tightest();
        return Err(Error::Contract(format!(
            "extremal tuple fails positivity: {} by {:e}",
            t.label, -t.slack
        )));
    }
    let tol = Tolerances::default();
    Ok(QuoExtremal {
        kind,
        params: [a, b, c],
        sign,
        cp: is_cp_quo(&coeffs, &tol)?,
        ccp: is_ccp_quo(&coeffs, &tol)?,
        coeffs,
    })
}

/// Checks that `q` describes a density operator, returning `Σ a_σ T_σ`.
fn require_state(q: &QuoCoeffs, tol: &Tolerances) -> Result<CMat> {
    let c = q.coeffs();
    let tr = c.d as f64 * c.tp_sum();
    if (tr - 1.0).abs() > tol.psd_tol {
        return Err(Error::InvalidParameter(format!(
            "not a state: trace {tr} differs from 1"
        )));
    }
    let psd = cp_check_quo(q, tol)?;
    if psd.verdict(tol.psd_tol) == Verdict::False {
        let t = psd.tightest();
        return Err(Error::InvalidParameter(format!(
            "not a state: {} fails by {:e}",
            t.label, -t.slack
        )));
    }
    Ok(q.operator())
}

/// Extremal witness families evaluated by [`decide_quo`].
pub fn witness_families(d: usize, grid: usize) -> Result<Vec<WitnessFamily>> {
    let mut fams = Vec::new();
    for &kind in QuoType::for_dim(d) {
        let mut members = Vec::new();
        if kind.is_parametric() {
            for [a, b, c] in grid_params(grid) {
                for sign in Sign::BOTH {
                    let e = extremal_quo(kind, a, b, c, sign, d)?;
                    members.push((vec![a, b, c, sign.value()], e.coeffs.coeffs().to_vec()));
                }
            }
        } else {
            let e = extremal_quo(kind, 0.0, 0.0, 0.0, Sign::Plus, d)?;
            members.push((Vec::new(), e.coeffs.coeffs().to_vec()));
        }
        fams.push((format!("type{}", kind.name()), members));
    }
    Ok(fams)
}

/// A-BC separability certificate: separable exactly when the A-BC partial
/// transpose is PSD, confirmed by a sweep of extremal witnesses `(id ⊗ M*)(ρ)`.
pub fn decide_quo(q: &QuoCoeffs, grid: usize, tol: &Tolerances, seed: u64) -> Result<Certificate> {
    let d = q.d();
    let rho = require_state(q, tol)?;
    let band = tol.psd_tol;
    let mut cert = Certificate::new("quo", d, q.coeffs().tuple().to_vec(), tol, seed);
    cert.insert("state_psd", cp_check_quo(q, tol)?.to_check(band));

    let region = ccp_check_quo(q, tol)?;
    let pt = partial_transpose(&rho, &Dims::uniform(d, 3)?, 0)?;
    let num = is_psd(&pt, tol)?;
    let mut ppt = region.to_check(band);
    ppt.evidence = ppt.evidence.with_min_eig(num.min_eig);
    cert.insert("ppt_abc", ppt.clone());
    for (key, party) in [("ppt_bac", 1), ("ppt_cab", 2)] {
        let pt = partial_transpose(&rho, &Dims::uniform(d, 3)?, party)?;
        cert.insert(key, Check::from_psd(is_psd(&pt, tol)?));
    }

    let images = WitnessImages::new(&rho, d, |s| build_m(s, d).adjoint())?;
    let mut sweep = SweepSummary::default();
    for (id, members) in witness_families(d, grid)? {
        sweep.record_worst(&images, &id, members, tol)?;
    }
    let worst = sweep.worst().expect("at least one witness").clone();
    let note = format!(
        "{} of {} witnesses detect entanglement; worst {}",
        sweep.failures, sweep.evaluated, worst.id
    );
    cert.insert(
        "witnesses",
        Check::new(
            Verdict::from_bool(sweep.all_passed()),
            Evidence::min_eig(worst.min_eig).with_note(note),
        ),
    );
    let mut separable = ppt.clone();
    separable.evidence = separable
        .evidence
        .with_note("separable across A-BC exactly when the A-BC partial transpose is PSD");
    cert.insert("separable_abc", separable);
    cert.witness_evidence = sweep.records;
    cert.verdict = match ppt.verdict {
        Verdict::True => "SEPARABLE",
        Verdict::False => "ENTANGLED",
        _ => "BOUNDARY",
    }
    .into();
    Ok(cert)
}

/// Invariant state drawn by rejection: the coefficients are sampled in a box
/// and kept when both `Σ a_σ T_σ` and its A-BC partial transpose are PSD.
pub fn random_ppt_state<R: Rng + ?Sized>(r: &mut R, d: usize, tol: &Tolerances) -> Result<QuoCoeffs> {
    if d < 2 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "tripartite families need d >= 2",
        });
    }
    for _ in 0..1_000_000 {
        let ae: f64 = r.random_range(0.0..1.0);
        let mut t = [ae, 0.0, 0.0, 0.0, 0.0, 0.0];
        for x in &mut t[1..] {
            *x = r.random_range(-1.0..1.0) * ae;
        }
        let q = QuoCoeffs::from_tuple(d, t)?;
        let tr = d as f64 * q.coeffs().tp_sum();
        if tr <= 1e-6 {
            continue;
        }
        let q = q.scale(1.0 / tr);
        if cp_check_quo(&q, tol)?.min_slack() > 0.0 && ccp_check_quo(&q, tol)?.min_slack() > 0.0 {
            return Ok(q);
        }
    }
    Err(Error::Contract("rejection sampler found no PPT state".into()))
}
