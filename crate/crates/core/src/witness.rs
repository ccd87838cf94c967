//! Witness sweeps over S₃-coefficient families.
//!
//! A witness `W = Σ a_σ W_σ` acts linearly in its coefficients, so
//! `(id ⊗ W)(ρ) = Σ a_σ (id ⊗ W_σ)(ρ)` is assembled from six precomputed images.

use crate::certificate::WitnessRecord;
use crate::choi::LinMapSpec;
use crate::error::Result;
use crate::linalg::{herm_eigvals, psd_threshold, CMat, Tolerances};
use crate::s3::{Perm3, S3Vec};

/// Parameters `(A, B, C)` of a two-parameter extremal family with `A + B = 1`:
/// `A − B` and `C/√(AB)` both run over `n` evenly spaced values in `[−1, 1]`.
pub fn grid_params(n: usize) -> Vec<[f64; 3]> {
    let pts: Vec<f64> = match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64)
            .collect(),
    };
    let mut out = Vec::with_capacity(n * n);
    for &u in &pts {
        let (a, b) = ((1.0 + u) / 2.0, (1.0 - u) / 2.0);
        for &v in &pts {
            out.push([a, b, v * (a * b).sqrt()]);
        }
    }
    out
}

/// A named witness family: parameters and coefficient vector of each member.
pub type WitnessFamily = (String, Vec<(Vec<f64>, S3Vec)>);

/// `(id ⊗ W_σ)(ρ)` for the six basis witnesses.
pub struct WitnessImages {
    images: [CMat; 6],
}

impl WitnessImages {
    pub fn new(rho: &CMat, d_id: usize, basis: impl Fn(Perm3) -> LinMapSpec) -> Result<Self> {
        let mut images = Vec::with_capacity(6);
        for s in Perm3::ALL {
            images.push(basis(s).id_tensor_apply(rho, d_id)?);
        }
        Ok(WitnessImages {
            images: images.try_into().expect("six images"),
        })
    }

    pub fn image(&self, coeffs: &S3Vec) -> CMat {
        coeffs.combine(&self.images)
    }

    /// Smallest eigenvalue of `(id ⊗ W)(ρ)` and whether it clears the PSD threshold.
    pub fn evaluate(&self, coeffs: &S3Vec, tol: &Tolerances) -> Result<(f64, bool)> {
        let img = self.image(coeffs);
        let min = herm_eigvals(&img, tol)?[0];
        Ok((min, min >= psd_threshold(img.frobenius_norm(), tol)))
    }
}

/// Worst witness per family plus counts.
#[derive(Clone, Debug, Default)]
pub struct SweepSummary {
    pub records: Vec<WitnessRecord>,
    pub evaluated: usize,
    pub failures: usize,
}

impl SweepSummary {
    /// Evaluates one witness and records it unconditionally.
    pub fn record(
        &mut self,
        images: &WitnessImages,
        id: &str,
        params: Vec<f64>,
        coeffs: &S3Vec,
        tol: &Tolerances,
    ) -> Result<()> {
        let (min_eig, passed) = images.evaluate(coeffs, tol)?;
        self.evaluated += 1;
        self.failures += usize::from(!passed);
        self.records.push(WitnessRecord {
            id: id.into(),
            params,
            min_eig,
            passed,
        });
        Ok(())
    }

    /// Evaluates a family of witnesses and records only the worst one.
    pub fn record_worst<I>(&mut self, images: &WitnessImages, id: &str, family: I, tol: &Tolerances) -> Result<()>
    where
        I: IntoIterator<Item = (Vec<f64>, S3Vec)>,
    {
        let mut worst: Option<WitnessRecord> = None;
        for (params, coeffs) in family {
            let (min_eig, passed) = images.evaluate(&coeffs, tol)?;
            self.evaluated += 1;
            self.failures += usize::from(!passed);
            if worst.as_ref().is_none_or(|w| min_eig < w.min_eig) {
                worst = Some(WitnessRecord {
                    id: id.into(),
                    params,
                    min_eig,
                    passed,
                });
            }
        }
        self.records.extend(worst);
        Ok(())
    }

    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }

    pub fn worst(&self) -> Option<&WitnessRecord> {
        self.records
            .iter()
            .min_by(|a, b| a.min_eig.total_cmp(&b.min_eig))
    }
}
