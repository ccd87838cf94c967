//! Hyperoctahedral covariant maps `ψ_{a,b,c} = aψ₀ + bψ₁ + cψ₂ + (1−a−b−c)ψ₃`
//! with `ψ₀(X) = Tr(X)/d·Id`, `ψ₁(X) = X`, `ψ₂(X) = Xᵀ` and `ψ₃` the
//! diagonal pinching.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Check, Evidence, Verdict, WitnessRecord};
use crate::choi::{flip, ChoiScale, LinMapSpec, Structured};
use crate::error::{Error, Result};
use crate::linalg::{is_psd, psd_threshold, CMat, Tolerances, C64, ONE};
use crate::region::{check_halfspaces, enumerate_vertices, Halfspace, RegionCheck};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HhCoeffs {
    pub d: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HhCoeffs {
    pub fn new(d: usize, a: f64, b: f64, c: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedDimension {
                d,
                reason: "the hyperoctahedral family needs d >= 2",
            });
        }
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite coefficients ({a}, {b}, {c})"
            )));
        }
        Ok(HhCoeffs { d, a, b, c })
    }

    pub fn from_point(d: usize, p: [f64; 3]) -> Result<Self> {
        HhCoeffs::new(d, p[0], p[1], p[2])
    }

    pub fn point(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Coefficient of the pinching `ψ₃`.
    pub fn pinching_coeff(&self) -> f64 {
        1.0 - self.a - self.b - self.c
    }

    /// Parameters of `T∘ψ_{a,b,c} = ψ_{a,c,b}`.
    pub fn swap_bc(&self) -> Self {
        HhCoeffs {
            b: self.c,
            c: self.b,
            ..*self
        }
    }
}

fn df(d: usize) -> f64 {
    d as f64
}

/// Direct action of `ψ_{a,b,c}`.
pub fn apply_psi(c: &HhCoeffs, x: &CMat) -> CMat {
    let d = c.d;
    let tr = x.trace() / df(d);
    let p = c.pinching_coeff();
    CMat::from_fn(d, d, |i, j| {
        let mut v = x[(i, j)] * c.b + x[(j, i)] * c.c;
        if i == j {
            v += tr * c.a + x[(i, i)] * p;
        }
        v
    })
}

pub fn build_psi(c: &HhCoeffs) -> LinMapSpec {
    LinMapSpec::structured(Structured::Hh(*c))
}

/// Unnormalized Choi matrices of `ψ₀, ψ₁, ψ₂, ψ₃`:
/// `Id⊗Id/d`, `d|Ω><Ω|`, `F`, `Σ e_ii⊗e_ii`.
pub fn basis_chois(d: usize) -> [CMat; 4] {
    let n = d * d;
    let id = CMat::identity(n).scale_re(1.0 / df(d));
    let mut omega = CMat::zeros(n, n);
    let mut diag = CMat::zeros(n, n);
    for i in 0..d {
        diag[(i * d + i, i * d + i)] = ONE;
        for j in 0..d {
            omega[(i * d + i, j * d + j)] = ONE;
        }
    }
    [id, omega, flip(d), diag]
}

/// Choi matrix assembled from the basis Chois.
pub fn choi(c: &HhCoeffs, scale: ChoiScale) -> CMat {
    let basis = basis_chois(c.d);
    let w = [c.a, c.b, c.c, c.pinching_coeff()].map(|x| C64::new(x, 0.0));
    let m = CMat::combination(&w, &basis);
    match scale {
        ChoiScale::Unnormalized => m,
        ChoiScale::Normalized => m.scale_re(1.0 / df(c.d)),
    }
}

/// CPTP region of `(a, x, y)` where `x` multiplies `ψ₁` and `y` multiplies `ψ₂`;
/// `swapped` expresses the same system in the original `(a, b, c)` axes with
/// `x = c`, `y = b`.
fn cptp_system(d: usize, swapped: bool) -> Vec<Halfspace> {
    let d = df(d);
    let (x, y) = if swapped { ("c", "b") } else { ("b", "c") };
    let lift = |n: [f64; 3]| if swapped { [n[0], n[2], n[1]] } else { n };
    vec![
        Halfspace::new([-1.0, 0.0, 0.0], 0.0, "a >= 0"),
        Halfspace::new([1.0, 0.0, 0.0], d / (d - 1.0), "a <= d/(d-1)"),
        Halfspace::new(
            lift([1.0 / d, -1.0, 0.0]),
            1.0 / (d - 1.0),
            format!("{x} >= a/d - 1/(d-1)"),
        ),
        Halfspace::new(
            lift([(d - 1.0) / d, 1.0, 0.0]),
            1.0,
            format!("{x} <= 1 - (d-1)a/d"),
        ),
        Halfspace::new(lift([-1.0 / d, 0.0, -1.0]), 0.0, format!("{y} >= -a/d")),
        Halfspace::new(lift([-1.0 / d, 0.0, 1.0]), 0.0, format!("{y} <= a/d")),
    ]
}

/// Inequalities of the CPTP region.
pub fn cptp_halfspaces(d: usize) -> Vec<Halfspace> {
    cptp_system(d, false)
}

/// Inequalities of the CCP (copositive) region.
pub fn ccp_halfspaces(d: usize) -> Vec<Halfspace> {
    cptp_system(d, true)
}

/// Inequalities of the PPT polytope, CPTP ∩ CCP with the shared `a` bounds once.
pub fn ppt_halfspaces(d: usize) -> Vec<Halfspace> {
    let mut hs = cptp_system(d, false);
    hs.extend(cptp_system(d, true).into_iter().skip(2));
    hs
}

/// Inequalities of the positivity region for `d ≥ 3`, each tagged with the
/// row of the counterexample table whose vector detects its violation.
pub fn positivity_halfspaces(d: usize) -> Vec<Halfspace> {
    let k = (df(d) - 2.0) / df(d);
    let d = df(d);
    vec![
        Halfspace::new([-1.0, 0.0, 0.0], 0.0, "a >= 0").tagged(1),
        Halfspace::new([1.0, 0.0, 0.0], d / (d - 1.0), "a <= d/(d-1)").tagged(1),
        Halfspace::new([k, 1.0, 1.0], 1.0, "(d-2)a/d + b + c <= 1").tagged(2),
        Halfspace::new([k, 1.0, -1.0], 1.0, "(d-2)a/d + b - c <= 1").tagged(3),
        Halfspace::new([k, -1.0, 1.0], 1.0, "(d-2)a/d - b + c <= 1").tagged(3),
        Halfspace::new([0.0, -1.0, -1.0], 1.0 / (d - 1.0), "b + c >= -1/(d-1)").tagged(4),
        Halfspace::new([0.0, 1.0, -(d - 1.0)], 1.0, "b - (d-1)c <= 1").tagged(5),
        Halfspace::new([0.0, -(d - 1.0), 1.0], 1.0, "(d-1)b - c >= -1").tagged(6),
    ]
}

pub fn cptp_check(c: &HhCoeffs) -> RegionCheck {
    check_halfspaces(&cptp_halfspaces(c.d), c.point())
}

pub fn ccp_check(c: &HhCoeffs) -> RegionCheck {
    check_halfspaces(&ccp_halfspaces(c.d), c.point())
}

pub fn ppt_check(c: &HhCoeffs) -> RegionCheck {
    check_halfspaces(&ppt_halfspaces(c.d), c.point())
}

pub fn is_cptp(c: &HhCoeffs) -> bool {
    cptp_check(c).holds()
}

pub fn is_ccp(c: &HhCoeffs) -> bool {
    ccp_check(c).holds()
}

pub fn is_ppt(c: &HhCoeffs) -> bool {
    ppt_check(c).holds()
}

/// Positivity verdict with the counterexample-table tag of the first
/// violated inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct PositivityCheck {
    pub positive: bool,
    pub violated_tag: Option<u8>,
    pub region: RegionCheck,
}

fn require_d3(d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "positivity of the hyperoctahedral family is characterized for d >= 3 only",
        });
    }
    Ok(())
}

pub fn positivity_check(c: &HhCoeffs) -> Result<RegionCheck> {
    require_d3(c.d)?;
    Ok(check_halfspaces(&positivity_halfspaces(c.d), c.point()))
}

pub fn is_positive(c: &HhCoeffs) -> Result<PositivityCheck> {
    let region = positivity_check(c)?;
    let violated_tag = region.first_violated().and_then(|v| v.tag);
    Ok(PositivityCheck {
        positive: region.holds(),
        violated_tag,
        region,
    })
}

/// Unit vector whose projector is mapped to a non-PSD matrix whenever the
/// inequality with this tag fails.
pub fn counterexample_vector(tag: u8, d: usize) -> Result<Vec<C64>> {
    if d < 2 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "counterexample vectors need d >= 2",
        });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![C64::new(0.0, 0.0); d];
    match tag {
        1 => v[0] = ONE,
        2 => {
            v[0] = C64::new(s, 0.0);
            v[1] = C64::new(s, 0.0);
        }
        3 => {
            v[0] = C64::new(s, 0.0);
            v[1] = C64::new(0.0, s);
        }
        4 => v.iter_mut().for_each(|z| *z = C64::new(1.0 / df(d).sqrt(), 0.0)),
        5 | 6 => {
            for (j, z) in v.iter_mut().enumerate() {
                *z = C64::from_polar(1.0 / df(d).sqrt(), 2.0 * PI * (j + 1) as f64 / df(d));
            }
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "counterexample tags are 1..=6, got {tag}"
            )))
        }
    }
    Ok(v)
}

/// The four extremal CP channels, with their CCP partners `Ψ_i∘T`.
pub fn cp_vertices(d: usize) -> [HhCoeffs; 4] {
    let e = 1.0 / (df(d) - 1.0);
    let top = df(d) * e;
    [[0.0, 1.0, 0.0], [top, 0.0, e], [0.0, -e, 0.0], [top, 0.0, -e]]
        .map(|p| HhCoeffs::from_point(d, p).expect("d >= 2"))
}

pub fn ccp_vertices(d: usize) -> [HhCoeffs; 4] {
    cp_vertices(d).map(|c| c.swap_bc())
}

/// Vertices `v₀..v₇` of the PPT polytope.
pub fn ppt_vertices(d: usize) -> [[f64; 3]; 8] {
    let d = df(d);
    let h = 1.0 / (2.0 * (d - 1.0));
    let m = d * h;
    let q = 1.0 / (d * (d - 1.0));
    [
        [0.0, 0.0, 0.0],
        [m, h, -h],
        [m, -h, h],
        [m, -h, -h],
        [1.0, 1.0 / d, 1.0 / d],
        [1.0, 1.0 / d, -q],
        [1.0, -q, 1.0 / d],
        [d / (d - 1.0), 0.0, 0.0],
    ]
}

/// Extremal points `w₁..w₄` of the PPT Werner–Holevo channels as `(b, c)`.
pub fn wh_vertices_bc(d: usize) -> [[f64; 2]; 4] {
    let d = df(d);
    let n = d * d + d - 2.0;
    [
        [1.0 / (d + 2.0), 1.0 / (d + 2.0)],
        [-2.0 / n, d / n],
        [-1.0 / n, -1.0 / n],
        [d / n, -2.0 / n],
    ]
}

/// `w₁..w₄` as channel parameters with `a = 1 − b − c`.
pub fn wh_vertices(d: usize) -> Result<[HhCoeffs; 4]> {
    let w = wh_vertices_bc(d);
    let mut out = [HhCoeffs::new(d, 0.0, 0.0, 0.0)?; 4];
    for (slot, [b, c]) in out.iter_mut().zip(w) {
        *slot = HhCoeffs::new(d, 1.0 - b - c, b, c)?;
    }
    Ok(out)
}

/// Extremal data of the family at dimension `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct HhExtremals {
    pub d: usize,
    pub cp: [HhCoeffs; 4],
    pub ccp: [HhCoeffs; 4],
    pub ppt: [[f64; 3]; 8],
    pub werner_holevo: [[f64; 2]; 4],
}

pub fn extremals(d: usize) -> Result<HhExtremals> {
    HhCoeffs::new(d, 0.0, 0.0, 0.0)?;
    Ok(HhExtremals {
        d,
        cp: cp_vertices(d),
        ccp: ccp_vertices(d),
        ppt: ppt_vertices(d),
        werner_holevo: wh_vertices_bc(d),
    })
}

/// Deviations in the two Werner–Holevo identities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WhIdentityReport {
    /// `‖C_{Φ_{w₂}} − twirl_oo(|ξξ><ξξ|)‖_max` with `ξ = (|1> + i|2>)/√2`.
    pub w2_deviation: f64,
    /// `‖A₁ − (|v><v| + 2·Id)/(d+2)‖_max` with `v` the all-ones vector.
    pub a1_deviation: f64,
}

pub fn wh_identity_report(d: usize) -> Result<WhIdentityReport> {
    let w = wh_vertices(d)?;
    let lhs = choi(&w[1], ChoiScale::Normalized);
    let xi = counterexample_vector(3, d)?;
    let xixi: Vec<C64> = xi
        .iter()
        .flat_map(|&p| xi.iter().map(move |&q| p * q))
        .collect();
    let rhs = crate::twirl::twirl_oo(&CMat::projector(&xixi), d)?;
    let a1 = doc_triple(&w[0]).a;
    let ones = vec![ONE; d];
    let mut expect = CMat::projector(&ones).scale_re(1.0 / (df(d) + 2.0));
    expect.add_scaled(C64::new(2.0 / (df(d) + 2.0), 0.0), &CMat::identity(d));
    Ok(WhIdentityReport {
        w2_deviation: lhs.max_abs_diff(&rhs),
        a1_deviation: a1.max_abs_diff(&expect),
    })
}

/// True when both identities hold within `eq_tol`.
pub fn wh_w2_identity(d: usize, tol: &Tolerances) -> Result<bool> {
    let r = wh_identity_report(d)?;
    Ok(r.w2_deviation <= tol.eq_tol && r.a1_deviation <= tol.eq_tol)
}

/// Matrices `(A, B, C)` describing `ψ_{a,b,c}` as a diagonal orthogonal
/// covariant map.
#[derive(Clone, Debug, PartialEq)]
pub struct DocTriple {
    pub a: CMat,
    pub b: CMat,
    pub c: CMat,
}

pub fn doc_triple(h: &HhCoeffs) -> DocTriple {
    let d = h.d;
    let diag = h.a / df(d) + 1.0 - h.a;
    let build = |off: f64| {
        CMat::from_fn(d, d, |i, j| C64::new(if i == j { diag } else { off }, 0.0))
    };
    DocTriple {
        a: build(h.a / df(d)),
        b: build(h.b),
        c: build(h.c),
    }
}

/// CPTP conditions of a DOC map: `A ≥ 0` entrywise with unit column sums,
/// `B ⪰ 0`, `C = C†` and `|C_ij|² ≤ A_ij A_ji`.
pub fn doc_cptp(t: &DocTriple, tol: &Tolerances) -> Result<bool> {
    let d = t.a.rows();
    let eps = tol.eq_tol;
    for j in 0..d {
        let mut col = 0.0;
        for i in 0..d {
            let aij = t.a[(i, j)];
            if aij.re < -eps || aij.im.abs() > eps {
                return Ok(false);
            }
            col += aij.re;
        }
        if (col - 1.0).abs() > eps {
            return Ok(false);
        }
    }
    if t.c.hermiticity_defect() > eps {
        return Ok(false);
    }
    for i in 0..d {
        for j in 0..d {
            if i != j && t.c[(i, j)].norm_sqr() > (t.a[(i, j)] * t.a[(j, i)]).re + eps {
                return Ok(false);
            }
        }
    }
    Ok(is_psd(&t.b, tol)?.psd)
}

/// Identifiers of the eight extremal witnesses used by [`decide`].
pub fn witness_set(d: usize) -> Vec<(String, HhCoeffs)> {
    let mut out = Vec::with_capacity(8);
    for (i, c) in cp_vertices(d).iter().enumerate() {
        out.push((format!("Psi{}", i + 1), *c));
    }
    for (i, c) in ccp_vertices(d).iter().enumerate() {
        out.push((format!("Psi{}_T", i + 1), *c));
    }
    out
}

/// Applies the eight extremal positive maps to the normalized Choi matrix.
pub fn witness_sweep(c: &HhCoeffs, tol: &Tolerances) -> Result<Vec<WitnessRecord>> {
    let rho = choi(c, ChoiScale::Normalized);
    let mut out = Vec::with_capacity(8);
    for (id, w) in witness_set(c.d) {
        let img = build_psi(&w).id_tensor_apply(&rho, c.d)?;
        let min_eig = is_psd(&img, tol)?.min_eig;
        out.push(WitnessRecord {
            id,
            params: w.point().to_vec(),
            min_eig,
            passed: min_eig >= psd_threshold(img.frobenius_norm(), tol),
        });
    }
    Ok(out)
}

/// Positivity, CP, CCP, PPT and entanglement-breaking certificate for a
/// channel of the family, with the extremal witness sweep on its Choi matrix.
pub fn decide(c: &HhCoeffs, tol: &Tolerances, seed: u64) -> Result<Certificate> {
    require_d3(c.d)?;
    let band = tol.psd_tol;
    let cp = cptp_check(c);
    if cp.verdict(band) == Verdict::False {
        let v = cp.first_violated().expect("false verdict has a violation");
        return Err(Error::Contract(format!(
            "({}, {}, {}) is not a channel at d = {}: {} fails by {:e}; see the CPTP region inequalities",
            c.a, c.b, c.c, c.d, v.label, -v.slack
        )));
    }
    let mut cert = Certificate::new("hh", c.d, c.point().to_vec(), tol, seed);
    cert.insert("positive", positivity_check(c)?.to_check(band));
    cert.insert("cp", cp.to_check(band));
    let ppt = ppt_check(c).to_check(band);
    cert.insert("ccp", ccp_check(c).to_check(band));
    cert.insert("eb", ppt.clone());
    cert.insert("ppt", ppt.clone());

    let witnesses = witness_sweep(c, tol)?;
    let worst = witnesses
        .iter()
        .min_by(|a, b| a.min_eig.total_cmp(&b.min_eig))
        .expect("eight witnesses");
    let all_pass = witnesses.iter().all(|w| w.passed);
    let evidence = Evidence::min_eig(worst.min_eig).with_note(format!("worst witness {}", worst.id));
    cert.insert("separable_choi", Check::new(Verdict::from_bool(all_pass), evidence));
    cert.witness_evidence = witnesses;
    cert.verdict = match ppt.verdict {
        Verdict::True => "EB",
        Verdict::False => "NOT-EB",
        _ => "BOUNDARY",
    }
    .into();
    Ok(cert)
}

/// One grid point of a region sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub positive: Verdict,
    pub cp: Verdict,
    pub ccp: Verdict,
    pub ppt: Verdict,
    pub eb: Verdict,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Bounding box of the positivity region: `a ∈ [0, d/(d−1)]`, `b, c ∈ [−1/(d−1), 1]`.
pub fn sweep_box(d: usize) -> [(f64, f64); 3] {
    let d = df(d);
    [(0.0, d / (d - 1.0)), (-1.0 / (d - 1.0), 1.0), (-1.0 / (d - 1.0), 1.0)]
}

/// Closed-form verdicts on an `n³` grid over [`sweep_box`], or an `n²` grid
/// at a fixed `a`. Rows are ordered by `a`, then `b`, then `c`.
pub fn sweep(d: usize, n: usize, fixed_a: Option<f64>, tol: &Tolerances) -> Result<Vec<SweepRow>> {
    require_d3(d)?;
    if n == 0 {
        return Err(Error::InvalidParameter("grid size must be positive".into()));
    }
    let bx = sweep_box(d);
    let avals = match fixed_a {
        Some(a) if a.is_finite() => vec![a],
        Some(a) => return Err(Error::InvalidParameter(format!("non-finite a = {a}"))),
        None => linspace(bx[0].0, bx[0].1, n),
    };
    let bvals = linspace(bx[1].0, bx[1].1, n);
    let cvals = linspace(bx[2].0, bx[2].1, n);
    let band = tol.psd_tol;
    let mut rows = Vec::with_capacity(avals.len() * n * n);
    for &a in &avals {
        for &b in &bvals {
            for &c in &cvals {
                let h = HhCoeffs::new(d, a, b, c)?;
                let ppt = ppt_check(&h).verdict(band);
                rows.push(SweepRow {
                    a,
                    b,
                    c,
                    positive: positivity_check(&h)?.verdict(band),
                    cp: cptp_check(&h).verdict(band),
                    ccp: ccp_check(&h).verdict(band),
                    ppt,
                    eb: ppt,
                });
            }
        }
    }
    Ok(rows)
}

/// Named inequality systems and their vertices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionSummary {
    pub name: String,
    pub inequalities: Vec<Halfspace>,
    pub vertices: Vec<[f64; 3]>,
}

pub fn regions(d: usize) -> Result<Vec<RegionSummary>> {
    require_d3(d)?;
    let systems = [
        ("cptp", cptp_halfspaces(d)),
        ("ccp", ccp_halfspaces(d)),
        ("ppt", ppt_halfspaces(d)),
        ("positive", positivity_halfspaces(d)),
    ];
    Ok(systems
        .into_iter()
        .map(|(name, hs)| RegionSummary {
            name: name.into(),
            vertices: enumerate_vertices(&hs, 1e-12),
            inequalities: hs,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::max_entangled;
    use crate::random::{random_matrix, rng};

    fn h(d: usize, a: f64, b: f64, c: f64) -> HhCoeffs {
        HhCoeffs::new(d, a, b, c).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_and_transpose_members() {
        for d in 2..6 {
            let id = build_psi(&h(d, 0.0, 1.0, 0.0)).choi(ChoiScale::Normalized);
            assert!(id.approx_eq(&max_entangled(d), 1e-15));
            let t = build_psi(&h(d, 0.0, 0.0, 1.0)).choi(ChoiScale::Unnormalized);
            assert!(t.approx_eq(&flip(d), 1e-15));
        }
    }

    #[test]
    fn psi2_choi_is_scaled_projector() {
        let d = 3;
        let psi2 = cp_vertices(d)[1];
        assert_eq!(psi2.point(), [1.5, 0.0, 0.5]);
        let c = build_psi(&psi2).choi(ChoiScale::Unnormalized);
        let p = c.scale_re((df(d) - 1.0) / 2.0);
        assert!((&p * &p).approx_eq(&p, 1e-14));
        let rank = p.trace().re;
        assert!((rank - 3.0).abs() < 1e-14);
        let normalized = build_psi(&psi2).choi(ChoiScale::Normalized);
        assert!(normalized.approx_eq(&p.scale_re(1.0 / rank), 1e-14));
    }

    #[test]
    fn direct_choi_matches_generic_construction() {
        let c = h(4, 0.3, -0.2, 0.45);
        let direct = choi(&c, ChoiScale::Unnormalized);
        let generic = build_psi(&c).choi(ChoiScale::Unnormalized);
        assert!(direct.approx_eq(&generic, 1e-15));
    }

    #[test]
    fn psi0_applies_trace_formula() {
        let mut r = rng(1);
        let x = random_matrix(&mut r, 3, 3);
        let m = LinMapSpec::from_choi(3, 3, basis_chois(3)[0].clone()).unwrap();
        let expect = CMat::identity(3).scale(x.trace() / 3.0);
        assert!(m.apply(&x).unwrap().approx_eq(&expect, 1e-15));
    }

    #[test]
    fn family_is_self_adjoint() {
        let mut r = rng(2);
        let m = build_psi(&h(3, 1.0, 0.0, 0.0));
        let a = m.adjoint();
        let x = random_matrix(&mut r, 3, 3);
        let y = random_matrix(&mut r, 3, 3);
        let lhs = (&m.apply(&x).unwrap() * &y).trace();
        let rhs = (&x * &a.apply(&y).unwrap()).trace();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn positivity_examples() {
        assert!(is_positive(&h(3, 0.0, 1.0, 0.0)).unwrap().positive);
        assert!(is_positive(&h(3, 0.0, -0.5, 0.0)).unwrap().positive);
        let p = is_positive(&h(3, 0.0, -0.6, 0.0)).unwrap();
        assert!(!p.positive);
        assert_eq!(p.violated_tag, Some(4));
        assert!(matches!(
            is_positive(&h(2, 0.0, 1.0, 0.0)),
            Err(Error::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn table_vector_exposes_violation() {
        let c = h(3, 0.0, -0.6, 0.0);
        let v = counterexample_vector(4, 3).unwrap();
        let out = apply_psi(&c, &CMat::projector(&v));
        assert!(is_psd(&out, &tol()).unwrap().min_eig < -1e-3);
        assert!(counterexample_vector(7, 3).is_err());
        let v3 = counterexample_vector(3, 3).unwrap();
        assert_eq!(v3[1], C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2));
    }

    #[test]
    fn cptp_examples() {
        assert!(is_cptp(&h(3, 0.0, 1.0, 0.0)));
        assert!(is_cptp(&h(3, 1.5, 0.0, 0.5)));
        assert!(!is_cptp(&h(3, 0.0, 0.0, 1.0)));
        assert!(is_ccp(&h(3, 0.0, 0.0, 1.0)));
        assert!(is_ppt(&h(3, 1.0, 1.0 / 3.0, 1.0 / 3.0)));
        assert!(!is_ppt(&h(3, 0.0, 1.0, 0.0)));
    }

    #[test]
    fn vertex_enumeration_reproduces_listed_vertices() {
        for d in 3..7 {
            let sorted = |v: Vec<[f64; 3]>| {
                let mut v: Vec<[f64; 3]> = v.into_iter().map(|p| p.map(|x| x + 0.0)).collect();
                v.sort_by(|a, b| {
                    a[0].total_cmp(&b[0])
                        .then(a[1].total_cmp(&b[1]))
                        .then(a[2].total_cmp(&b[2]))
                });
                v
            };
            let close = |x: &[[f64; 3]], y: &[[f64; 3]]| {
                x.len() == y.len()
                    && y.iter().all(|q| {
                        x.iter()
                            .any(|p| (0..3).all(|i| (p[i] - q[i]).abs() < 1e-12))
                    })
            };
            let cp = enumerate_vertices(&cptp_halfspaces(d), 1e-12);
            let expect_cp = sorted(cp_vertices(d).iter().map(|c| c.point()).collect());
            assert!(close(&cp, &expect_cp), "d = {d}: {cp:?}");
            let ppt = enumerate_vertices(&ppt_halfspaces(d), 1e-12);
            assert!(close(&ppt, &sorted(ppt_vertices(d).to_vec())), "d = {d}");
            let pos = enumerate_vertices(&positivity_halfspaces(d), 1e-12);
            let mut expect_pos: Vec<[f64; 3]> = cp_vertices(d).iter().map(|c| c.point()).collect();
            expect_pos.extend(ccp_vertices(d).iter().map(|c| c.point()));
            assert!(close(&pos, &sorted(expect_pos)), "d = {d}: {pos:?}");
        }
    }

    #[test]
    fn doc_triple_examples() {
        let t = doc_triple(&h(3, 0.0, 1.0, 0.0));
        assert_eq!(t.a, CMat::identity(3));
        assert!(doc_cptp(&t, &tol()).unwrap());
        assert!(doc_cptp(&doc_triple(&h(3, 1.5, 0.0, 0.5)), &tol()).unwrap());
        assert!(!doc_cptp(&doc_triple(&h(3, 0.0, 0.0, 1.0)), &tol()).unwrap());
    }

    #[test]
    fn werner_holevo_vertices_and_identities() {
        let w = wh_vertices_bc(3);
        assert_eq!(w[0], [0.2, 0.2]);
        for d in [2, 3, 6] {
            assert!(wh_w2_identity(d, &tol()).unwrap(), "d = {d}");
            for v in wh_vertices(d).unwrap() {
                assert!(is_ppt(&v));
            }
        }
    }

    #[test]
    fn decide_examples() {
        let t = tol();
        let id = decide(&h(3, 0.0, 1.0, 0.0), &t, 0).unwrap();
        assert_eq!(id.verdict_of("cp"), Some(Verdict::True));
        assert_eq!(id.verdict_of("ccp"), Some(Verdict::False));
        assert_eq!(id.verdict_of("ppt"), Some(Verdict::False));
        assert_eq!(id.verdict_of("eb"), Some(Verdict::False));
        assert_eq!(id.verdict_of("separable_choi"), Some(Verdict::False));
        assert!(id
            .witness_evidence
            .iter()
            .any(|w| w.id.ends_with("_T") && !w.passed));
        let v7 = ppt_vertices(3)[7];
        let c = decide(&HhCoeffs::from_point(3, v7).unwrap(), &t, 0).unwrap();
        assert_eq!(c.verdict_of("eb"), Some(Verdict::True));
        assert!(c.witness_evidence.iter().all(|w| w.passed));
        let (p, q) = (ppt_vertices(4)[1], ppt_vertices(4)[4]);
        let mid = HhCoeffs::new(4, (p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0, (p[2] + q[2]) / 2.0).unwrap();
        let c = decide(&mid, &t, 0).unwrap();
        assert_eq!(c.verdict, "EB");
        assert_eq!(c.verdict_of("separable_choi"), Some(Verdict::True));
        assert!(matches!(
            decide(&h(3, 0.0, 0.0, 1.0), &t, 0),
            Err(Error::Contract(_))
        ));
        assert!(c.validate().is_ok());
    }

    #[test]
    fn sweep_row_counts() {
        let t = tol();
        assert_eq!(sweep(3, 5, None, &t).unwrap().len(), 125);
        assert_eq!(sweep(3, 5, Some(1.0), &t).unwrap().len(), 25);
    }
}
