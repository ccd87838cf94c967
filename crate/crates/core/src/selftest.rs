//! Oracle-agreement self test: every closed-form decision is compared with an
//! independent numerical computation on random or gridded inputs.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::choi::{ChoiScale, LinMapSpec};
use crate::error::{Error, Result};
use crate::hh::{self, HhCoeffs};
use crate::linalg::{herm_eigvals, is_psd, partial_transpose, CMat, Dims, Tolerances, C64};
use crate::oracle::{brute_positive_sample, haar_twirl_mc};
use crate::quo::{self, QuoCoeffs, QuoType};
use crate::random::{random_hermitian, random_matrix, random_state, substream, Rng64};
use crate::region::enumerate_vertices;
use crate::s3::{perm_operator, Perm3, S3Coeffs, Sign};
use crate::twirl::{self, cond_expect, std_basis, OOProjections, Symmetry};
use crate::werner3;
use crate::witness::grid_params;

/// Constraints or eigenvalues within this distance of zero are excluded
/// from agreement counts.
pub const BAND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn pick(self, full: usize, quick: usize) -> usize {
        match self {
            Level::Full => full,
            Level::Quick => quick,
        }
    }
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(Error::InvalidParameter(format!("unknown level {s:?}; use quick or full"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {} ({:.2} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.seconds,
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "hh CPTP region vs Choi spectrum"),
    (2, "hh positivity facets and counterexample vectors"),
    (3, "hh extremal accounting"),
    (4, "hh PPT equals entanglement breaking"),
    (5, "werner3 positivity vs orbit oracle"),
    (6, "werner3 block isomorphisms"),
    (7, "rho_t certificate"),
    (8, "rho_t PPT threshold"),
    (9, "quo extremals are CP or CCP; PPT states pass witnesses"),
    (10, "O(d) twirl identities"),
    (11, "twirl projector laws and Monte Carlo convergence"),
    (12, "qubit basis relation and quo qubit positivity"),
];

type Outcome = Result<(bool, String)>;

/// Runs one criterion; errors count as failures.
pub fn run_criterion(id: u8, level: Level, seed: u64) -> CriterionResult {
    let title = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, t)| *t)
        .unwrap_or("unknown criterion");
    let mut r = substream(seed, id as u64);
    let start = Instant::now();
    let outcome: Outcome = match id {
        1 => hh_cptp(level, &mut r),
        2 => hh_positivity(level, &mut r),
        3 => hh_extremals(),
        4 => hh_ppt_eb(level, &mut r),
        5 => w3_positivity(level, &mut r),
        6 => w3_blocks(level, &mut r),
        7 => rho_t_certificate(),
        8 => rho_t_threshold(),
        9 => quo_decomposable(level, &mut r),
        10 => oo_identities(),
        11 => twirl_laws(level, &mut r),
        12 => qubit_relation(level, &mut r),
        _ => Err(Error::InvalidParameter(format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        title,
        passed,
        detail,
        seconds,
    }
}

pub fn run(level: Level, seed: u64) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|(id, _)| run_criterion(*id, level, seed))
        .collect()
}

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Counts disagreements between two verdicts, skipping in-band points.
#[derive(Default)]
struct Agreement {
    agree: usize,
    disagree: usize,
    in_band: usize,
}

impl Agreement {
    fn record(&mut self, closed: bool, numeric: bool, in_band: bool) {
        if in_band {
            self.in_band += 1;
        } else if closed == numeric {
            self.agree += 1;
        } else {
            self.disagree += 1;
        }
    }

    fn summary(&self) -> String {
        format!(
            "{} agree, {} disagree, {} in band",
            self.agree, self.disagree, self.in_band
        )
    }
}

fn hh_cptp(level: Level, r: &mut Rng64) -> Outcome {
    let n = level.pick(10_000, 1_000);
    let t = tol();
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for d in [3, 4, 5] {
        let mut agr = Agreement::default();
        for _ in 0..n {
            let p: [f64; 3] = std::array::from_fn(|_| r.random_range(-2.0..2.0));
            let c = HhCoeffs::from_point(d, p)?;
            let region = hh::cptp_check(&c);
            let num = is_psd(&hh::choi(&c, ChoiScale::Normalized), &t)?;
            agr.record(region.holds(), num.psd, region.min_slack().abs() <= BAND);
        }
        ok &= agr.disagree == 0;
        parts.push(format!("d={d}: {}", agr.summary()));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 30.0;
    Ok((ok, format!("{}; {secs:.2} s", parts.join("; "))))
}

/// Random convex combination of `points`.
fn convex_combination(r: &mut Rng64, points: &[[f64; 3]]) -> [f64; 3] {
    let w: Vec<f64> = points.iter().map(|_| -r.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = w.iter().sum();
    let mut p = [0.0; 3];
    for (wi, q) in w.iter().zip(points) {
        for k in 0..3 {
            p[k] += wi / total * q[k];
        }
    }
    p
}

fn hh_positivity(level: Level, r: &mut Rng64) -> Outcome {
    let n_out = level.pick(1_000, 100);
    let n_in = level.pick(1_000, 50);
    let samples = level.pick(1_000, 200);
    let t = tol();
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [3, 4] {
        let hs = hh::positivity_halfspaces(d);
        let verts = enumerate_vertices(&hs, 1e-12);
        let mut worst_outside = f64::NEG_INFINITY;
        let mut missed = 0;
        for h in &hs {
            let facet: Vec<[f64; 3]> = verts.iter().copied().filter(|v| h.slack(*v).abs() <= 1e-9).collect();
            let v = hh::counterexample_vector(h.tag.expect("tagged facet"), d)?;
            let norm = h.normal.iter().map(|x| x * x).sum::<f64>().sqrt();
            for _ in 0..n_out {
                let base = convex_combination(r, &facet);
                let delta = r.random_range(1e-4..1e-2);
                let p: [f64; 3] = std::array::from_fn(|k| base[k] + delta * h.normal[k] / norm);
                let c = HhCoeffs::from_point(d, p)?;
                let img = hh::build_psi(&c).apply(&CMat::projector(&v))?;
                let min = herm_eigvals(&img, &t)?[0];
                worst_outside = worst_outside.max(min);
                missed += usize::from(min >= -BAND);
            }
        }
        let mut worst_inside = f64::INFINITY;
        let centroid = {
            let mut c = [0.0; 3];
            for v in &verts {
                for k in 0..3 {
                    c[k] += v[k] / verts.len() as f64;
                }
            }
            c
        };
        for i in 0..n_in {
            let q = convex_combination(r, &verts);
            let p: [f64; 3] = std::array::from_fn(|k| centroid[k] + 0.999 * (q[k] - centroid[k]));
            let c = HhCoeffs::from_point(d, p)?;
            let res = brute_positive_sample(&hh::build_psi(&c), samples, r.random::<u64>() ^ i as u64, &t)?;
            worst_inside = worst_inside.min(res.worst_eig);
        }
        ok &= missed == 0 && worst_inside >= -BAND;
        parts.push(format!(
            "d={d}: {} facets, {missed} outside points undetected (largest min eig {worst_outside:.3e}), inside worst {worst_inside:.3e}",
            hs.len()
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn hh_extremals() -> Outcome {
    let t = tol();
    let eq = 1e-10;
    let mut ok = true;
    let mut parts = Vec::new();
    for d in 3..=6 {
        let e = hh::extremals(d)?;
        let dims = Dims::uniform(d, 2)?;
        let maps: Vec<HhCoeffs> = e.cp.iter().chain(e.ccp.iter()).copied().collect();
        let mut n_cp = 0;
        let mut n_ccp = 0;
        for c in &maps {
            let choi = hh::choi(c, ChoiScale::Normalized);
            n_cp += usize::from(is_psd(&choi, &t)?.min_eig >= -eq);
            n_ccp += usize::from(is_psd(&partial_transpose(&choi, &dims, 1)?, &t)?.min_eig >= -eq);
            ok &= hh::positivity_check(c)?.min_slack() >= -eq;
        }
        let mut distinct = maps.clone();
        distinct.dedup_by(|a, b| a.point() == b.point());
        let both = |p: [f64; 3]| -> Result<bool> {
            let c = HhCoeffs::from_point(d, p)?;
            Ok(hh::cptp_check(&c).min_slack() >= -eq && hh::ccp_check(&c).min_slack() >= -eq)
        };
        let mut vertices_ok = 0;
        for v in e.ppt {
            vertices_ok += usize::from(both(v)?);
        }
        let mut mids_ok = 0;
        let mut mids = 0;
        for i in 0..8 {
            for j in i + 1..8 {
                let m: [f64; 3] = std::array::from_fn(|k| 0.5 * (e.ppt[i][k] + e.ppt[j][k]));
                mids += 1;
                mids_ok += usize::from(hh::ppt_check(&HhCoeffs::from_point(d, m)?).min_slack() >= -eq);
            }
        }
        ok &= maps.len() == 8 && n_cp == 4 && n_ccp == 4 && vertices_ok == 8 && mids == 28 && mids_ok == 28;
        parts.push(format!(
            "d={d}: {} extremals, {n_cp} CP, {n_ccp} CCP, {vertices_ok}/8 vertices in both systems, {mids_ok}/{mids} midpoints PPT",
            maps.len()
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn hh_ppt_eb(level: Level, r: &mut Rng64) -> Outcome {
    let n = level.pick(10_000, 1_000);
    let d = 3;
    let t = tol();
    let df = d as f64;
    let mut agr = Agreement::default();
    let mut drawn = 0;
    while drawn < n {
        let a = r.random_range(0.0..df / (df - 1.0));
        let b = r.random_range(-1.0 / (df - 1.0)..1.0);
        let c = r.random_range(-1.0 / (df - 1.0)..1.0 / (df - 1.0));
        let h = HhCoeffs::new(d, a, b, c)?;
        if !hh::is_cptp(&h) {
            continue;
        }
        drawn += 1;
        let ppt = hh::ppt_check(&h);
        let w = hh::witness_sweep(&h, &t)?;
        let worst = w.iter().map(|x| x.min_eig).fold(f64::INFINITY, f64::min);
        let sep = w.iter().all(|x| x.passed);
        agr.record(ppt.holds(), sep, ppt.min_slack().abs() <= BAND || worst.abs() <= BAND);
    }
    Ok((agr.disagree == 0, format!("d=3, {n} channels: {}", agr.summary())))
}

fn random_tuple(r: &mut Rng64, scale_e: f64) -> [f64; 6] {
    let mut t: [f64; 6] = std::array::from_fn(|_| r.random_range(-1.0..1.0));
    t[0] = r.random_range(-1.0..1.0) * scale_e;
    t
}

fn w3_positivity(level: Level, r: &mut Rng64) -> Outcome {
    let n = level.pick(10_000, 1_000);
    let t = tol();
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [3, 4, 5] {
        let mut agr = Agreement::default();
        let mut positive = 0;
        for i in 0..n {
            let c = S3Coeffs::new(d, random_tuple(r, if i % 2 == 0 { 1.0 } else { 3.0 }))?;
            let region = werner3::positivity_check_w3(&c)?;
            let img = werner3::map_of(&c).apply(&CMat::unit(d, 0, 0))?;
            let min = herm_eigvals(&img, &t)?[0];
            positive += usize::from(region.holds());
            agr.record(region.holds(), min >= 0.0, region.min_slack().abs() <= BAND || min.abs() <= BAND);
        }
        ok &= agr.disagree == 0;
        parts.push(format!("d={d}: {} ({positive} positive)", agr.summary()));
    }
    Ok((ok, parts.join("; ")))
}

fn w3_blocks(level: Level, r: &mut Rng64) -> Outcome {
    let n = level.pick(1_000, 100);
    let t = tol();
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [3, 4] {
        let dims = Dims::uniform(d, 3)?;
        let mut f_agr = Agreement::default();
        let mut g_agr = Agreement::default();
        let (mut f_pos, mut g_pos) = (0, 0);
        for i in 0..n {
            let c = S3Coeffs::new(d, random_tuple(r, if i % 2 == 0 { 1.0 } else { 4.0 }))?;
            let x = c.perm_combination();
            let fx = werner3::cp_check_w3(&c)?;
            let ex = herm_eigvals(&x, &t)?[0];
            f_pos += usize::from(fx.holds());
            f_agr.record(fx.holds(), ex >= 0.0, fx.min_slack().abs() <= BAND || ex.abs() <= BAND);
            let gx = werner3::ccp_check_w3(&c)?;
            let eg = herm_eigvals(&partial_transpose(&x, &dims, 0)?, &t)?[0];
            g_pos += usize::from(gx.holds());
            g_agr.record(gx.holds(), eg >= 0.0, gx.min_slack().abs() <= BAND || eg.abs() <= BAND);
        }
        ok &= f_agr.disagree == 0 && g_agr.disagree == 0 && f_pos > 0 && g_pos > 0 && f_pos < n && g_pos < n;
        parts.push(format!(
            "d={d}: F {} ({f_pos} PSD), G {} ({g_pos} PSD)",
            f_agr.summary(),
            g_agr.summary()
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn rho_t_certificate() -> Outcome {
    let t = tol();
    let (c, rho) = werner3::rho_t(3, 1.0)?;
    let ppt = werner3::ppt_w3(&c)?;
    let [a, b, cc] = ppt.holds();
    let l0 = LinMapSpec::from_choi(3, 9, werner3::l0_coeffs(3)?.perm_combination())?.adjoint();
    let direct = herm_eigvals(&l0.id_tensor_apply(&rho, 3)?, &t)?[0];
    let expected = -(2.0 / 3.0) / 47.0;
    let cert = werner3::detect_entanglement_w3(&c, werner3::DEFAULT_GRID, &t, 0)?;
    let reported = cert
        .witness_evidence
        .iter()
        .find(|w| w.id == "L0")
        .map(|w| w.min_eig)
        .unwrap_or(f64::NAN);
    let ok = a
        && cc
        && !b
        && (direct - expected).abs() <= 1e-9
        && (reported - direct).abs() <= 1e-9
        && cert.verdict == "ENTANGLED";
    Ok((
        ok,
        format!(
            "A-BC {a}, B-AC {b}, C-AB {cc}; L0 min eig {reported:.12e} (spectrum {direct:.12e}, expected {expected:.12e}); verdict {}",
            cert.verdict
        ),
    ))
}

fn rho_t_threshold() -> Outcome {
    let t = werner3::t_max(3, 1e-4)?;
    Ok((t >= 3.89, format!("t_max(3) = {t:.6}")))
}

/// Extremal of a type is CP or CCP by the spectra of its Choi matrix and
/// the partial transpose.
fn numerically_decomposable(q: &QuoCoeffs, t: &Tolerances) -> Result<bool> {
    let x = q.operator();
    if is_psd(&x, t)?.psd {
        return Ok(true);
    }
    Ok(is_psd(&partial_transpose(&x, &Dims::uniform(q.d(), 3)?, 0)?, t)?.psd)
}

fn quo_decomposable(level: Level, r: &mut Rng64) -> Outcome {
    let grid = level.pick(32, 8);
    let n_states = level.pick(10_000, 500);
    let t = tol();
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [2, 3, 4] {
        let mut checked = 0;
        let mut failed = 0;
        for &kind in QuoType::for_dim(d) {
            let params: Vec<[f64; 3]> = if kind.is_parametric() {
                grid_params(grid)
            } else {
                vec![[0.0; 3]]
            };
            for [a, b, c] in params {
                for sign in Sign::BOTH {
                    let e = quo::extremal_quo(kind, a, b, c, sign, d)?;
                    checked += 1;
                    failed += usize::from(!numerically_decomposable(&e.coeffs, &t)?);
                }
            }
        }
        ok &= failed == 0;
        parts.push(format!("d={d}: {checked} extremals, {failed} neither CP nor CCP"));
    }
    let mut violations = 0;
    let mut non_separable = 0;
    for i in 0..n_states {
        let d = [2, 3, 4][i % 3];
        let q = quo::random_ppt_state(r, d, &t)?;
        let cert = quo::decide_quo(&q, 8, &t, 0)?;
        violations += cert.witness_evidence.iter().filter(|w| !w.passed).count();
        non_separable += usize::from(cert.verdict != "SEPARABLE");
    }
    ok &= violations == 0 && non_separable == 0;
    parts.push(format!(
        "{n_states} random PPT states: {violations} witness violations, {non_separable} not separable"
    ));
    Ok((ok, parts.join("; ")))
}

fn oo_identities() -> Outcome {
    let mut worst_pi = 0.0f64;
    let mut worst_a1 = 0.0f64;
    for d in 3..=6 {
        let xi = hh::counterexample_vector(3, d)?;
        let xixi: Vec<C64> = xi.iter().flat_map(|&p| xi.iter().map(move |&q| p * q)).collect();
        let tw = twirl::twirl_oo(&CMat::projector(&xixi), d)?;
        let p = OOProjections::new(d);
        let target = p.p2.scale_re(1.0 / p.ranks()[1] as f64);
        worst_pi = worst_pi.max(tw.max_abs_diff(&target));
        worst_a1 = worst_a1.max(hh::wh_identity_report(d)?.a1_deviation);
    }
    Ok((
        worst_pi <= 1e-12 && worst_a1 <= 1e-12,
        format!("d=3..6: twirl deviation {worst_pi:.3e}, A1 deviation {worst_a1:.3e}"),
    ))
}

fn twirl_laws(level: Level, r: &mut Rng64) -> Outcome {
    let mut worst = 0.0f64;
    for sym in Symmetry::ALL {
        for d in [2usize, 3] {
            let n = d.pow(sym.parties());
            for _ in 0..level.pick(5, 2) {
                let x = random_matrix(r, n, n);
                let e1 = twirl::twirl(sym, &x)?.matrix;
                let e2 = twirl::twirl(sym, &e1)?.matrix;
                worst = worst.max(e2.max_abs_diff(&e1));
                worst = worst.max((e1.trace() - x.trace()).norm());
                let h = random_hermitian(r, n);
                worst = worst.max(twirl::twirl(sym, &h)?.matrix.hermiticity_defect());
            }
        }
    }
    let samples = level.pick(100_000, 10_000);
    let mut mc_worst = 0.0f64;
    for sym in [Symmetry::Uuu, Symmetry::Uubaru, Symmetry::Oo, Symmetry::Hh] {
        let n = 3usize.pow(sym.parties());
        let x = random_state(r, n);
        let mc = haar_twirl_mc(&x, sym, samples, r.random())?;
        let exact = cond_expect(&x, &std_basis(sym, 3)?)?;
        mc_worst = mc_worst.max(mc.max_abs_diff(&exact));
    }
    Ok((
        worst <= 1e-10 && mc_worst <= 1e-2,
        format!("projector-law defect {worst:.3e}; Monte Carlo deviation at n={samples}: {mc_worst:.3e}"),
    ))
}

fn qubit_relation(level: Level, r: &mut Rng64) -> Outcome {
    let mut sum = CMat::zeros(8, 8);
    for s in Perm3::ALL {
        sum = &sum + &perm_operator(s, 2).scale_re(s.sign() as f64);
    }
    let relation = sum.max_abs();
    let n = level.pick(10_000, 1_000);
    let t = tol();
    let mut agr = Agreement::default();
    for _ in 0..n {
        let q = QuoCoeffs::from_tuple(2, random_tuple(r, 1.0))?;
        let region = quo::positivity_check_quo(&q);
        let min = herm_eigvals(&q.map().apply(&CMat::unit(2, 0, 0))?, &t)?[0];
        agr.record(region.holds(), min >= 0.0, region.min_slack().abs() <= BAND || min.abs() <= BAND);
    }
    Ok((
        relation == 0.0 && agr.disagree == 0,
        format!("relation max entry {relation}; d=2 positivity: {}", agr.summary()),
    ))
}
