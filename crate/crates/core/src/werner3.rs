//! Tripartite Werner symmetry: `U⊗U⊗U`-invariant operators, the covariant
//! maps `L_σ : M_d → M_d ⊗ M_d`, their closed-form positivity, CP and CCP
//! conditions, extremal maps and the PPT-entangled family `ρ_t`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Check, Evidence, Verdict};
use crate::choi::{LinMapSpec, Structured};
use crate::error::{Error, Result};
use crate::linalg::{is_psd, min_eig_2x2, partial_transpose, CMat, Dims, Tolerances, C64, ZERO};
use crate::region::{Constraint, RegionCheck};
use crate::s3::{perm_operator, Perm3, S3Coeffs, S3Vec, Sign};
use crate::witness::{grid_params, SweepSummary, WitnessFamily, WitnessImages};

/// Default witness grid resolution per axis.
pub const DEFAULT_GRID: usize = 64;

pub(crate) fn require_d3(d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "the six permutation operators are linearly dependent at d = 2",
        });
    }
    Ok(())
}

/// Row `(j1, j2, j3)` and column `(j_σ(1), j_σ(2), j_σ(3))` of every nonzero entry of `V_σ`.
pub(crate) fn perm_entries(sigma: Perm3, d: usize) -> impl Iterator<Item = ([usize; 3], [usize; 3])> {
    let img = sigma.images();
    (0..d * d * d).map(move |r| {
        let j = [r / (d * d), (r / d) % d, r % d];
        (j, [j[img[0]], j[img[1]], j[img[2]]])
    })
}

/// `V_σ` on `(C^d)^⊗3`.
pub fn build_v(sigma: Perm3, d: usize) -> CMat {
    perm_operator(sigma, d)
}

/// `L_σ`, whose unnormalized Choi matrix is `V_σ`.
pub fn build_l(sigma: Perm3, d: usize) -> LinMapSpec {
    map_of_vec(&S3Vec::unit(sigma), d)
}

/// `Σ a_σ L_σ`.
pub fn map_of(c: &S3Coeffs) -> LinMapSpec {
    map_of_vec(&c.to_vec(), c.d)
}

pub fn map_of_vec(coeffs: &S3Vec, d: usize) -> LinMapSpec {
    LinMapSpec::structured(Structured::Werner3 {
        d,
        coeffs: *coeffs,
        adjoint: false,
    })
}

/// `(Σ a_σ L_σ)(X)` for `X ∈ M_d`.
pub fn apply_l(coeffs: &S3Vec, d: usize, x: &CMat) -> CMat {
    let mut out = CMat::zeros(d * d, d * d);
    for s in Perm3::ALL {
        let a = coeffs.get(s);
        if a == ZERO {
            continue;
        }
        for (r, c) in perm_entries(s, d) {
            out[(r[1] * d + r[2], c[1] * d + c[2])] += a * x[(r[0], c[0])];
        }
    }
    out
}

/// Dual map with `Tr(L(X) Y) = Tr(X L*(Y))` for `Y ∈ M_d ⊗ M_d`.
pub fn apply_l_adjoint(coeffs: &S3Vec, d: usize, y: &CMat) -> CMat {
    let mut out = CMat::zeros(d, d);
    for s in Perm3::ALL {
        let a = coeffs.get(s);
        if a == ZERO {
            continue;
        }
        for (r, c) in perm_entries(s, d) {
            out[(c[0], r[0])] += a * y[(c[1] * d + c[2], r[1] * d + r[2])];
        }
    }
    out
}

/// Positivity region: `a_e ≥ max(−a_12, −a_13, |a_23|)`,
/// `a_e + a_12 + a_13 + a_23 + 2 Re a_123 ≥ 0` and
/// `(a_e + a_12)(a_e + a_13) ≥ |a_23 + a_123|²`.
pub fn positivity_check_w3(c: &S3Coeffs) -> Result<RegionCheck> {
    require_d3(c.d)?;
    Ok(RegionCheck::new(vec![
        Constraint::new("a_e + a_12 >= 0", c.ae + c.a12).tagged(2),
        Constraint::new("a_e + a_13 >= 0", c.ae + c.a13).tagged(2),
        Constraint::new("a_e >= |a_23|", c.ae - c.a23.abs()).tagged(2),
        Constraint::new(
            "a_e + a_12 + a_13 + a_23 + 2 Re a_123 >= 0",
            c.ae + c.a12 + c.a13 + c.a23 + 2.0 * c.a123.re,
        )
        .tagged(3),
        Constraint::new(
            "(a_e + a_12)(a_e + a_13) >= |a_23 + a_123|^2",
            (c.ae + c.a12) * (c.ae + c.a13) - (c.a123 + c.a23).norm_sqr(),
        )
        .tagged(4),
    ]))
}

pub fn is_positive_w3(c: &S3Coeffs) -> Result<bool> {
    Ok(positivity_check_w3(c)?.holds())
}

/// Image of `Σ a_σ V_σ` under a block isomorphism: two scalar blocks and a 2×2 block.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoBlock {
    pub s1: C64,
    pub s2: C64,
    pub m: [[C64; 2]; 2],
}

impl IsoBlock {
    /// PSD conditions of the blocks, assuming the Hermitian pattern.
    pub fn constraints(&self, prefix: &str) -> Vec<Constraint> {
        vec![
            Constraint::new(format!("{prefix} scalar block 1 >= 0"), self.s1.re),
            Constraint::new(format!("{prefix} scalar block 2 >= 0"), self.s2.re),
            Constraint::new(
                format!("{prefix} 2x2 block >= 0"),
                min_eig_2x2(self.m[0][0].re, self.m[0][1], self.m[1][1].re),
            ),
        ]
    }

    pub fn check(&self, prefix: &str) -> RegionCheck {
        RegionCheck::new(self.constraints(prefix))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.s1.im.abs() <= tol
            && self.s2.im.abs() <= tol
            && self.m[0][0].im.abs() <= tol
            && self.m[1][1].im.abs() <= tol
            && (self.m[0][1] - self.m[1][0].conj()).norm() <= tol
    }
}

fn omega() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// Block isomorphism for `X = Σ a_σ V_σ`.
pub fn f_iso(v: &S3Vec, d: usize) -> Result<IsoBlock> {
    require_d3(d)?;
    let [ae, a12, a13, a23, a123, a132] = v.0;
    let w = omega();
    let wb = w.conj();
    Ok(IsoBlock {
        s1: ae + a12 + a13 + a23 + a123 + a132,
        s2: ae - a12 - a13 - a23 + a123 + a132,
        m: [
            [ae + wb * a123 + w * a132, wb * a12 + w * a13 + a23],
            [w * a12 + wb * a13 + a23, ae + w * a123 + wb * a132],
        ],
    })
}

/// Block isomorphism for `X^{T_A}` with `X = Σ a_σ V_σ`.
pub fn g_iso(v: &S3Vec, d: usize) -> Result<IsoBlock> {
    require_d3(d)?;
    let [ae, a12, a13, a23, a123, a132] = v.0;
    let df = d as f64;
    let k = (df * df - 1.0).sqrt() / 2.0;
    Ok(IsoBlock {
        s1: ae + a23,
        s2: ae - a23,
        m: [
            [
                ae + a23 + (a12 + a13 + a123 + a132) * ((df + 1.0) / 2.0),
                (a12 - a13 - a123 + a132) * k,
            ],
            [
                (a12 - a13 + a123 - a132) * k,
                ae - a23 + (a12 + a13 - a123 - a132) * ((df - 1.0) / 2.0),
            ],
        ],
    })
}

/// `Σ a_σ V_σ ⪰ 0`, equivalently `Σ a_σ L_σ` is CP.
pub fn cp_check_w3(c: &S3Coeffs) -> Result<RegionCheck> {
    Ok(f_iso(&c.to_vec(), c.d)?.check("F"))
}

/// `(Σ a_σ V_σ)^{T_A} ⪰ 0`, equivalently `Σ a_σ L_σ` is CCP.
pub fn ccp_check_w3(c: &S3Coeffs) -> Result<RegionCheck> {
    Ok(g_iso(&c.to_vec(), c.d)?.check("G"))
}

pub fn is_cp_w3(c: &S3Coeffs) -> Result<bool> {
    Ok(cp_check_w3(c)?.holds())
}

pub fn is_ccp_w3(c: &S3Coeffs) -> Result<bool> {
    Ok(ccp_check_w3(c)?.holds())
}

/// Partial-transpose checks of an invariant state for the three bipartitions.
#[derive(Clone, Debug, PartialEq)]
pub struct PptPartitions {
    pub a_bc: RegionCheck,
    pub b_ac: RegionCheck,
    pub c_ab: RegionCheck,
}

impl PptPartitions {
    pub fn holds(&self) -> [bool; 3] {
        [self.a_bc.holds(), self.b_ac.holds(), self.c_ab.holds()]
    }
}

/// `ρ^{T_B}` and `ρ^{T_C}` are unitarily equivalent to the `T_A` case of the
/// coefficients relabelled by `(12)` and `(13)`.
pub fn ppt_w3(c: &S3Coeffs) -> Result<PptPartitions> {
    let v = c.to_vec();
    Ok(PptPartitions {
        a_bc: g_iso(&v, c.d)?.check("A-BC"),
        b_ac: g_iso(&v.relabel(Perm3::P12), c.d)?.check("B-AC"),
        c_ab: g_iso(&v.relabel(Perm3::P13), c.d)?.check("C-AB"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum W3Type {
    I,
    II,
    III,
}

impl std::str::FromStr for W3Type {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(W3Type::I),
            "II" | "2" => Ok(W3Type::II),
            "III" | "3" => Ok(W3Type::III),
            _ => Err(Error::InvalidParameter(format!("unknown extremal type {s:?}"))),
        }
    }
}

/// Trace-preserving extremal positive map of the family.
#[derive(Clone, Debug, PartialEq)]
pub struct W3Extremal {
    pub kind: W3Type,
    pub params: [f64; 3],
    pub sign: Sign,
    pub coeffs: S3Coeffs,
    pub cp: bool,
    pub ccp: bool,
}

/// Checks `A, B ≥ 0` and `AB ≥ C²`, returning `√(AB − C²)`.
pub(crate) fn extremal_s(a: f64, b: f64, c: f64) -> Result<f64> {
    let gap = a * b - c * c;
    if !(a.is_finite() && b.is_finite() && c.is_finite()) || a < 0.0 || b < 0.0 || gap < -1e-12 {
        return Err(Error::InvalidParameter(format!(
            "extremal parameters need A, B >= 0 and AB >= C^2, got ({a}, {b}, {c})"
        )));
    }
    Ok(gap.max(0.0).sqrt())
}

/// Divides by the trace-preservation sum, rejecting degenerate rays.
pub(crate) fn tp_normalize(raw: S3Coeffs) -> Result<S3Coeffs> {
    let n = raw.tp_sum();
    if n <= 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "degenerate extremal ray: trace-preservation normalizer {n:e}"
        )));
    }
    Ok(raw.scale(1.0 / n))
}

/// Unnormalized extremal tuple of the given type.
pub fn extremal_tuple_w3(kind: W3Type, a: f64, b: f64, c: f64, sign: Sign, d: usize) -> Result<S3Coeffs> {
    require_d3(d)?;
    let s = sign.value() * extremal_s(a, b, c)?;
    let t = match kind {
        W3Type::I => [1.0, -1.0, -1.0, -1.0, 1.0, 0.0],
        W3Type::II => [0.0, a, b, 0.0, c, s],
        W3Type::III => [
            (a + b + 2.0 * c) / 2.0,
            (a - b - 2.0 * c) / 2.0,
            (-a + b - 2.0 * c) / 2.0,
            (a + b + 2.0 * c) / 2.0,
            -(a + b) / 2.0,
            s,
        ],
    };
    S3Coeffs::new(d, t)
}

pub fn extremal_w3(kind: W3Type, a: f64, b: f64, c: f64, sign: Sign, d: usize) -> Result<W3Extremal> {
    let coeffs = tp_normalize(extremal_tuple_w3(kind, a, b, c, sign, d)?)?;
    let pos = positivity_check_w3(&coeffs)?;
    if !pos.holds() {
        let t = pos.tightest();
        return Err(Error::Contract(format!(
            "extremal tuple fails positivity: {} by {:e}",
            t.label, -t.slack
        )));
    }
    Ok(W3Extremal {
        kind,
        params: [a, b, c],
        sign,
        cp: is_cp_w3(&coeffs)?,
        ccp: is_ccp_w3(&coeffs)?,
        coeffs,
    })
}

/// Unnormalized witness coefficients `(1, 1, −1, 1, −1, 0)`.
pub fn l0_coeffs(d: usize) -> Result<S3Coeffs> {
    require_d3(d)?;
    S3Coeffs::new(d, [1.0, 1.0, -1.0, 1.0, -1.0, 0.0])
}

/// Trace-normalized `((d+t)/d)·Id + V_(13) + (t/d)(V_(123) + V_(132))`.
pub fn rho_t(d: usize, t: f64) -> Result<(S3Coeffs, CMat)> {
    require_d3(d)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("rho_t needs t > 0, got {t}")));
    }
    let df = d as f64;
    let n = df.powi(3) + (t + 1.0) * df * df + 2.0 * t;
    let c = S3Coeffs::new(d, [(df + t) / df / n, 0.0, 1.0 / n, 0.0, t / df / n, 0.0])?;
    let m = c.perm_combination();
    Ok((c, m))
}

/// Largest `t` for which `ρ_t` is A-BC PPT, to within `resolution`.
pub fn t_max(d: usize, resolution: f64) -> Result<f64> {
    if resolution.is_nan() || resolution <= 0.0 {
        return Err(Error::InvalidParameter("bisection resolution must be positive".into()));
    }
    let ppt = |t: f64| -> Result<bool> { Ok(ppt_w3(&rho_t(d, t)?.0)?.a_bc.holds()) };
    let (mut lo, mut hi) = (0.0, 1.0);
    while ppt(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::Contract("rho_t stays PPT for every tested t".into()));
        }
    }
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if ppt(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Checks that `c` describes a density operator, returning `Σ a_σ V_σ`.
fn require_state(c: &S3Coeffs, tol: &Tolerances) -> Result<CMat> {
    let tr = c.d as f64 * c.tp_sum();
    if (tr - 1.0).abs() > tol.psd_tol {
        return Err(Error::InvalidParameter(format!(
            "not a state: trace {tr} differs from 1"
        )));
    }
    let psd = cp_check_w3(c)?;
    if psd.verdict(tol.psd_tol) == Verdict::False {
        let t = psd.tightest();
        return Err(Error::InvalidParameter(format!(
            "not a state: {} fails by {:e}",
            t.label, -t.slack
        )));
    }
    Ok(c.perm_combination())
}

/// PPT check with the numerically computed partial-transpose spectrum as evidence.
fn ppt_entry(region: &RegionCheck, rho: &CMat, d: usize, party: usize, tol: &Tolerances) -> Result<Check> {
    let pt = partial_transpose(rho, &Dims::uniform(d, 3)?, party)?;
    let num = is_psd(&pt, tol)?;
    let mut check = region.to_check(tol.psd_tol);
    check.evidence = check.evidence.with_min_eig(num.min_eig);
    Ok(check)
}

/// Extremal witness families evaluated by [`detect_entanglement_w3`].
pub fn witness_families(d: usize, grid: usize) -> Result<Vec<WitnessFamily>> {
    let mut fams = Vec::new();
    fams.push((
        "L0".to_string(),
        vec![(vec![1.0, 0.0, 0.0, 1.0], l0_coeffs(d)?.to_vec())],
    ));
    let one = extremal_w3(W3Type::I, 0.0, 0.0, 0.0, Sign::Plus, d)?;
    fams.push(("typeI".to_string(), vec![(Vec::new(), one.coeffs.to_vec())]));
    for kind in [W3Type::II, W3Type::III] {
        let mut members = Vec::new();
        for [a, b, c] in grid_params(grid) {
            for sign in Sign::BOTH {
                let e = extremal_w3(kind, a, b, c, sign, d)?;
                members.push((vec![a, b, c, sign.value()], e.coeffs.to_vec()));
            }
        }
        fams.push((format!("type{kind:?}"), members));
    }
    Ok(fams)
}

/// A-BC entanglement certificate for an invariant state: PPT checks for the
/// three bipartitions and the sweep of extremal witnesses `(id ⊗ L*)(ρ)`.
pub fn detect_entanglement_w3(c: &S3Coeffs, grid: usize, tol: &Tolerances, seed: u64) -> Result<Certificate> {
    require_d3(c.d)?;
    let d = c.d;
    let rho = require_state(c, tol)?;
    let band = tol.psd_tol;
    let mut cert = Certificate::new("werner3", d, c.tuple().to_vec(), tol, seed);
    cert.insert("state_psd", cp_check_w3(c)?.to_check(band));
    let ppt = ppt_w3(c)?;
    cert.insert("ppt_a_bc", ppt_entry(&ppt.a_bc, &rho, d, 0, tol)?);
    cert.insert("ppt_b_ac", ppt_entry(&ppt.b_ac, &rho, d, 1, tol)?);
    cert.insert("ppt_c_ab", ppt_entry(&ppt.c_ab, &rho, d, 2, tol)?);

    let images = WitnessImages::new(&rho, d, |s| build_l(s, d).adjoint())?;
    let mut sweep = SweepSummary::default();
    for (id, members) in witness_families(d, grid)? {
        if members.len() == 1 {
            let (params, coeffs) = members.into_iter().next().expect("one member");
            sweep.record(&images, &id, params, &coeffs, tol)?;
        } else {
            sweep.record_worst(&images, &id, members, tol)?;
        }
    }
    let worst = sweep.worst().expect("at least one witness").clone();
    let npt = ppt.a_bc.verdict(band) == Verdict::False;
    let detected = !sweep.all_passed();
    let note = format!(
        "{} of {} witnesses detect entanglement; worst {}",
        sweep.failures, sweep.evaluated, worst.id
    );
    let separable = if npt {
        Check::new(Verdict::False, Evidence::note("A-BC partial transpose is not PSD").with_min_eig(worst.min_eig))
    } else if detected {
        Check::new(Verdict::False, Evidence::min_eig(worst.min_eig).with_note(note))
    } else {
        Check::new(
            Verdict::Inconclusive,
            Evidence::min_eig(worst.min_eig).with_note(format!("{note}; grid {grid}x{grid}")),
        )
    };
    cert.insert("separable_a_bc", separable);
    cert.witness_evidence = sweep.records;
    cert.verdict = if npt {
        "NPT-ENTANGLED"
    } else if detected {
        "ENTANGLED"
    } else {
        "INCONCLUSIVE-AT-RESOLUTION"
    }
    .into();
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::ChoiScale;
    use crate::linalg::{herm_eigvals, kron, partial_transpose};
    use crate::random::{random_matrix, rng};
    use rand::Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn coeffs(d: usize, t: [f64; 6]) -> S3Coeffs {
        S3Coeffs::new(d, t).unwrap()
    }

    #[test]
    fn choi_of_l_sigma_is_v_sigma() {
        for d in [2, 3] {
            for s in Perm3::ALL {
                let c = build_l(s, d).choi(ChoiScale::Unnormalized);
                assert!(c.approx_eq(&build_v(s, d), 1e-12), "{s} d={d}");
            }
        }
        assert_eq!(build_v(Perm3::E, 3), CMat::identity(27));
    }

    #[test]
    fn l12_is_transpose_tensor_identity() {
        let mut r = rng(1);
        let x = random_matrix(&mut r, 3, 3);
        let out = build_l(Perm3::P12, 3).apply(&x).unwrap();
        assert!(out.approx_eq(&kron(&x.transpose(), &CMat::identity(3)).unwrap(), 1e-15));
    }

    #[test]
    fn adjoint_pairing() {
        let mut r = rng(2);
        let d = 3;
        for s in Perm3::ALL {
            let l = build_l(s, d);
            let x = random_matrix(&mut r, d, d);
            let y = random_matrix(&mut r, d * d, d * d);
            let lhs = (&l.apply(&x).unwrap() * &y).trace();
            let rhs = (&x * &l.adjoint().apply(&y).unwrap()).trace();
            assert!((lhs - rhs).norm() < 1e-12);
            assert_eq!(l.adjoint().to_choi_backed(), l.to_choi_backed().adjoint());
        }
    }

    #[test]
    fn positivity_examples() {
        assert!(is_positive_w3(&coeffs(3, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0])).unwrap());
        assert!(is_positive_w3(&l0_coeffs(3).unwrap()).unwrap());
        let bad = positivity_check_w3(&coeffs(3, [1.0, -1.0, -1.0, -1.5, 0.0, 0.0])).unwrap();
        assert!(!bad.holds());
        assert_eq!(bad.first_violated().unwrap().label, "a_e >= |a_23|");
        let img = map_of(&coeffs(3, [1.0, -1.0, -1.0, -1.5, 0.0, 0.0]))
            .apply(&CMat::unit(3, 0, 0))
            .unwrap();
        assert!(herm_eigvals(&img, &tol()).unwrap()[0] < 0.0);
        assert!(is_positive_w3(&coeffs(2, [1.0; 6])).is_err());
    }

    #[test]
    fn positivity_matches_orbit_oracle() {
        let mut r = rng(3);
        for d in [3, 4] {
            for _ in 0..300 {
                let t: [f64; 6] = std::array::from_fn(|_| r.random_range(-1.0..1.0));
                let c = coeffs(d, t);
                let region = positivity_check_w3(&c).unwrap();
                let img = map_of(&c).apply(&CMat::unit(d, 0, 0)).unwrap();
                let min = herm_eigvals(&img, &tol()).unwrap()[0];
                if region.min_slack().abs() > 1e-9 && min.abs() > 1e-9 {
                    assert_eq!(region.holds(), min >= 0.0, "{t:?}");
                }
            }
        }
    }

    #[test]
    fn iso_block_rows() {
        let f = f_iso(&S3Vec::unit(Perm3::E), 3).unwrap();
        assert_eq!((f.s1, f.s2), (C64::new(1.0, 0.0), C64::new(1.0, 0.0)));
        assert!((f.m[0][0] - 1.0).norm() < 1e-15 && f.m[0][1].norm() < 1e-15);
        let f = f_iso(&S3Vec::unit(Perm3::P23), 3).unwrap();
        assert_eq!((f.s1.re, f.s2.re), (1.0, -1.0));
        assert!(f.m[0][0].norm() < 1e-15 && (f.m[0][1] - 1.0).norm() < 1e-15);
        let g = g_iso(&S3Vec::unit(Perm3::P12), 3).unwrap();
        assert_eq!((g.s1.re, g.s2.re), (0.0, 0.0));
        let k = 8f64.sqrt() / 2.0;
        assert!((g.m[0][0] - 2.0).norm() < 1e-15 && (g.m[1][1] - 1.0).norm() < 1e-15);
        assert!((g.m[0][1] - k).norm() < 1e-15 && (g.m[1][0] - k).norm() < 1e-15);
    }

    #[test]
    fn blocks_match_spectra() {
        let mut r = rng(4);
        for d in [3, 4] {
            let dims = Dims::uniform(d, 3).unwrap();
            for _ in 0..40 {
                let t: [f64; 6] = std::array::from_fn(|_| r.random_range(-1.0..1.0));
                let c = coeffs(d, t);
                let x = c.perm_combination();
                let eigs = herm_eigvals(&x, &tol()).unwrap();
                let f = f_iso(&c.to_vec(), d).unwrap();
                assert!(f.is_hermitian(1e-12));
                let fmin = cp_check_w3(&c).unwrap().min_slack();
                assert!((eigs[0] - fmin).abs() < 1e-9, "F d={d}");
                let pt = partial_transpose(&x, &dims, 0).unwrap();
                let eigs = herm_eigvals(&pt, &tol()).unwrap();
                let gmin = ccp_check_w3(&c).unwrap().min_slack();
                assert!((eigs[0] - gmin).abs() < 1e-9, "G d={d}");
            }
        }
    }

    #[test]
    fn extremal_examples() {
        let l0 = extremal_w3(W3Type::III, 1.0, 0.0, 0.0, Sign::Plus, 3).unwrap();
        let raw = l0_coeffs(3).unwrap();
        let ratio = l0.coeffs.ae / raw.ae;
        for (x, y) in l0.coeffs.tuple().iter().zip(raw.tuple()) {
            assert!((x - ratio * y).abs() < 1e-15);
        }
        assert!(!l0.cp && !l0.ccp);
        let one = extremal_w3(W3Type::I, 0.0, 0.0, 0.0, Sign::Plus, 3).unwrap();
        assert!(one.cp && !one.ccp);
        assert!((one.coeffs.tp_sum() - 1.0).abs() < 1e-15);
        let eq = extremal_w3(W3Type::III, 1.0, 1.0, 1.0, Sign::Plus, 3).unwrap();
        assert!(eq.cp && !eq.ccp);
        let anti = extremal_w3(W3Type::III, 1.0, 1.0, -1.0, Sign::Minus, 4).unwrap();
        assert!(anti.ccp && !anti.cp);
        let two = extremal_w3(W3Type::II, 0.3, 0.7, 0.1, Sign::Minus, 3).unwrap();
        assert!(two.ccp && !two.cp);
        assert!(extremal_w3(W3Type::II, 1.0, 1.0, 2.0, Sign::Plus, 3).is_err());
        assert!(extremal_w3(W3Type::II, 0.0, 0.0, 0.0, Sign::Plus, 3).is_err());
    }

    #[test]
    fn rho_t_properties() {
        let (c, m) = rho_t(3, 1.0).unwrap();
        assert!((c.ae - 4.0 / 3.0 / 47.0).abs() < 1e-16);
        for d in [3, 4] {
            for t in [0.5, 1.0, 3.89] {
                let (_, m) = rho_t(d, t).unwrap();
                assert!((m.trace().re - 1.0).abs() < 1e-12);
                assert!(m.hermiticity_defect() < 1e-15);
            }
        }
        assert!(herm_eigvals(&m, &tol()).unwrap()[0] >= -1e-12);
        let v13 = build_v(Perm3::P13, 3);
        assert!((&(&v13 * &m) * &v13).approx_eq(&m, 1e-12));
        assert_eq!(ppt_w3(&c).unwrap().holds(), [true, false, true]);
        assert!(rho_t(3, 0.0).is_err());
    }

    #[test]
    fn t_max_at_three() {
        let t = t_max(3, 1e-4).unwrap();
        assert!(t >= 3.89 && (t - 5.5073).abs() < 1e-3, "{t}");
    }

    #[test]
    fn detects_rho_t() {
        let (c, _) = rho_t(3, 1.0).unwrap();
        let cert = detect_entanglement_w3(&c, 8, &tol(), 0).unwrap();
        assert_eq!(cert.verdict, "ENTANGLED");
        let l0 = cert.witness_evidence.iter().find(|w| w.id == "L0").unwrap();
        assert!((l0.min_eig + 2.0 / 3.0 / 47.0).abs() < 1e-9, "{}", l0.min_eig);
        assert_eq!(cert.verdict_of("ppt_b_ac"), Some(Verdict::False));
        cert.validate().unwrap();
    }

    #[test]
    fn maximally_mixed_is_inconclusive() {
        let c = coeffs(3, [1.0 / 27.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let cert = detect_entanglement_w3(&c, 8, &tol(), 0).unwrap();
        assert_eq!(cert.verdict, "INCONCLUSIVE-AT-RESOLUTION");
        assert!(cert.witness_evidence.iter().all(|w| w.passed));
    }

    #[test]
    fn npt_beyond_t_max() {
        let (c, _) = rho_t(3, 6.0).unwrap();
        let cert = detect_entanglement_w3(&c, 4, &tol(), 0).unwrap();
        assert_eq!(cert.verdict, "NPT-ENTANGLED");
        assert!(cert.get("ppt_a_bc").unwrap().evidence.min_eig.unwrap() < 0.0);
    }

    #[test]
    fn rejects_non_states() {
        let c = coeffs(3, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(detect_entanglement_w3(&c, 4, &tol(), 0).is_err());
        let c = coeffs(3, [0.0, 0.0, 0.0, 1.0 / 9.0, 0.0, 0.0]);
        assert!(detect_entanglement_w3(&c, 4, &tol(), 0).is_err());
    }
}
