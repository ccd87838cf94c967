//! Brute-force verifiers: orbit and sampling positivity tests and Monte Carlo
//! Haar twirling.

use serde::{Deserialize, Serialize};

use crate::choi::{LinMapSpec, MapKind, Structured};
use crate::error::{Error, Result};
use crate::hh::counterexample_vector;
use crate::linalg::{conjugate_local, herm_eigvals, is_psd, psd_threshold, CMat, Dims, PsdCheck, Tolerances};
use crate::random::{haar_orthogonal, haar_pure_state, haar_unitary, rng, signed_permutation};
use crate::twirl::Symmetry;

/// `L(e₁₁) ⪰ 0`, which decides positivity when the symmetry group acts
/// transitively on pure input states.
pub fn brute_positive_orbit(map: &LinMapSpec, tol: &Tolerances) -> Result<PsdCheck> {
    match map.kind() {
        MapKind::Structured(Structured::Werner3 { adjoint: false, .. })
        | MapKind::Structured(Structured::Quo { adjoint: false, .. }) => {}
        _ => {
            return Err(Error::Contract(
                "the orbit test needs a werner3 or quo map, whose symmetry group is transitive on pure states"
                    .into(),
            ))
        }
    }
    is_psd(&map.apply(&CMat::unit(map.d_in(), 0, 0))?, tol)
}

/// Outcome of a sampling positivity test; a violation is conclusive, its
/// absence is not.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleResult {
    pub violation: bool,
    pub worst_eig: f64,
    pub samples: usize,
}

/// Minimum over pure states of the smallest eigenvalue of `L(|ψ><ψ|)`. For
/// the hh family the designated counterexample vectors come first.
pub fn brute_positive_sample(map: &LinMapSpec, n: usize, seed: u64, tol: &Tolerances) -> Result<SampleResult> {
    let d = map.d_in();
    let mut vectors = Vec::new();
    if let MapKind::Structured(Structured::Hh(c)) = map.kind() {
        if c.d >= 3 {
            for tag in 1..=6 {
                vectors.push(counterexample_vector(tag, d)?);
            }
        }
    }
    let mut r = rng(seed);
    vectors.extend((0..n).map(|_| haar_pure_state(&mut r, d)));
    let mut worst = f64::INFINITY;
    let mut violation = false;
    for v in &vectors {
        let img = map.apply(&CMat::projector(v))?;
        let min = herm_eigvals(&img, tol)?[0];
        violation |= min < psd_threshold(img.frobenius_norm(), tol);
        worst = worst.min(min);
    }
    Ok(SampleResult {
        violation,
        worst_eig: worst,
        samples: vectors.len(),
    })
}

/// Empirical average of `g x g*` over `n` sampled group elements `g`.
pub fn haar_twirl_mc(x: &CMat, sym: Symmetry, n: usize, seed: u64) -> Result<CMat> {
    if n == 0 {
        return Err(Error::InvalidParameter("twirl needs at least one sample".into()));
    }
    let d = sym.local_dim(x.rows())?;
    let dims = Dims::uniform(d, sym.parties() as usize)?;
    let mut r = rng(seed);
    let mut acc = CMat::zeros(x.rows(), x.cols());
    for _ in 0..n {
        let locals = match sym {
            Symmetry::Hh => {
                let h = signed_permutation(&mut r, d);
                vec![h.clone(), h]
            }
            Symmetry::Oo => {
                let o = haar_orthogonal(&mut r, d);
                vec![o.clone(), o]
            }
            Symmetry::Uuu => {
                let u = haar_unitary(&mut r, d);
                vec![u.clone(), u.clone(), u]
            }
            Symmetry::Uubaru => {
                let u = haar_unitary(&mut r, d);
                vec![u.clone(), u.conj(), u]
            }
            Symmetry::Qorth => {
                return Err(Error::InvalidParameter(
                    "the quantum orthogonal twirl has no group to sample; use cond_expect".into(),
                ))
            }
        };
        let y = conjugate_local(x, &dims, &locals)?;
        acc.add_scaled(crate::linalg::ONE, &y);
    }
    Ok(acc.scale_re(1.0 / n as f64))
}
