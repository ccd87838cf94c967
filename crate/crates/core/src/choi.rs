//! Choi matrices, map application, adjoints and the map JSON format.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hh::{self, HhCoeffs};
use crate::linalg::{CMat, C64, ONE, ZERO};
use crate::quo;
use crate::s3::{S3Coeffs, S3Vec};
use crate::werner3;

/// Scaling of a Choi matrix: `Σ e_ij ⊗ L(e_ij)`, optionally divided by `d_in`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ChoiScale {
    #[default]
    Normalized,
    Unnormalized,
}

/// Coefficient-carrying map families whose action is computed directly.
#[derive(Clone, Debug, PartialEq)]
pub enum Structured {
    /// `a ψ₀ + b ψ₁ + c ψ₂ + (1−a−b−c) ψ₃` on `M_d`.
    Hh(HhCoeffs),
    /// `Σ a_σ L_σ : M_d → M_d ⊗ M_d`, or its adjoint.
    Werner3 { d: usize, coeffs: S3Vec, adjoint: bool },
    /// `Σ a_σ M_σ : M_d → M_d ⊗ M_d` with `M_σ = (T ⊗ id)∘L_σ`, or its adjoint.
    Quo { d: usize, coeffs: S3Vec, adjoint: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapKind {
    /// Unnormalized Choi matrix of size `(d_in·d_out)²`.
    ChoiBacked(CMat),
    Structured(Structured),
}

/// Linear map `M_{d_in} → M_{d_out}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinMapSpec {
    d_in: usize,
    d_out: usize,
    kind: MapKind,
}

/// `|Ω_d><Ω_d| = (1/d) Σ e_ij ⊗ e_ij`.
pub fn max_entangled(d: usize) -> CMat {
    let mut m = CMat::zeros(d * d, d * d);
    let w = C64::new(1.0 / d as f64, 0.0);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = w;
        }
    }
    m
}

/// Flip operator `F = Σ e_ij ⊗ e_ji`.
pub fn flip(d: usize) -> CMat {
    let mut m = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + j, j * d + i)] = ONE;
        }
    }
    m
}

fn square_side(x: &CMat, what: &str) -> Result<usize> {
    if !x.is_square() {
        return Err(Error::Dimension(format!(
            "{what} must be square, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    Ok(x.rows())
}

impl LinMapSpec {
    pub fn from_choi(d_in: usize, d_out: usize, choi_unnormalized: CMat) -> Result<Self> {
        let n = d_in
            .checked_mul(d_out)
            .ok_or_else(|| Error::SizeOverflow(format!("{d_in}·{d_out}")))?;
        if d_in == 0 || d_out == 0 || choi_unnormalized.rows() != n || choi_unnormalized.cols() != n
        {
            return Err(Error::Dimension(format!(
                "Choi matrix of a map M_{d_in} -> M_{d_out} must be {n}x{n}, got {}x{}",
                choi_unnormalized.rows(),
                choi_unnormalized.cols()
            )));
        }
        Ok(LinMapSpec {
            d_in,
            d_out,
            kind: MapKind::ChoiBacked(choi_unnormalized),
        })
    }

    pub fn structured(s: Structured) -> Self {
        let (d_in, d_out) = match &s {
            Structured::Hh(c) => (c.d, c.d),
            Structured::Werner3 { d, adjoint, .. } | Structured::Quo { d, adjoint, .. } => {
                if *adjoint {
                    (d * d, *d)
                } else {
                    (*d, d * d)
                }
            }
        };
        LinMapSpec {
            d_in,
            d_out,
            kind: MapKind::Structured(s),
        }
    }

    pub fn identity(d: usize) -> Self {
        LinMapSpec::from_choi(d, d, max_entangled(d).scale_re(d as f64)).expect("square Choi")
    }

    pub fn transpose(d: usize) -> Self {
        LinMapSpec::from_choi(d, d, flip(d)).expect("square Choi")
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    /// `L(x)`.
    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        let n = square_side(x, "map input")?;
        if n != self.d_in {
            return Err(Error::Dimension(format!(
                "map expects {0}x{0} input, got {n}x{n}",
                self.d_in
            )));
        }
        Ok(match &self.kind {
            MapKind::ChoiBacked(c) => apply_choi(c, self.d_in, self.d_out, x),
            MapKind::Structured(Structured::Hh(c)) => hh::apply_psi(c, x),
            MapKind::Structured(Structured::Werner3 { d, coeffs, adjoint }) => {
                if *adjoint {
                    werner3::apply_l_adjoint(coeffs, *d, x)
                } else {
                    werner3::apply_l(coeffs, *d, x)
                }
            }
            MapKind::Structured(Structured::Quo { d, coeffs, adjoint }) => {
                if *adjoint {
                    quo::apply_m_adjoint(coeffs, *d, x)
                } else {
                    quo::apply_m(coeffs, *d, x)
                }
            }
        })
    }

    /// Choi matrix `Σ e_ij ⊗ L(e_ij)`, divided by `d_in` when normalized.
    pub fn choi(&self, scale: ChoiScale) -> CMat {
        let c = match &self.kind {
            MapKind::ChoiBacked(c) => c.clone(),
            MapKind::Structured(_) => {
                let (di, dout) = (self.d_in, self.d_out);
                let n = di * dout;
                let mut c = CMat::zeros(n, n);
                for i in 0..di {
                    for j in 0..di {
                        let out = self
                            .apply(&CMat::unit(di, i, j))
                            .expect("matrix unit has the input size");
                        for k in 0..dout {
                            for l in 0..dout {
                                c[(i * dout + k, j * dout + l)] = out[(k, l)];
                            }
                        }
                    }
                }
                c
            }
        };
        match scale {
            ChoiScale::Unnormalized => c,
            ChoiScale::Normalized => c.scale_re(1.0 / self.d_in as f64),
        }
    }

    /// Choi-backed copy of this map.
    pub fn to_choi_backed(&self) -> Self {
        LinMapSpec {
            d_in: self.d_in,
            d_out: self.d_out,
            kind: MapKind::ChoiBacked(self.choi(ChoiScale::Unnormalized)),
        }
    }

    /// Adjoint with respect to `Tr(L(X) Y) = Tr(X L*(Y))`.
    pub fn adjoint(&self) -> Self {
        let kind = match &self.kind {
            MapKind::ChoiBacked(c) => {
                let (di, dout) = (self.d_in, self.d_out);
                // C*[(l,j),(k,i)] = C[(i,k),(j,l)]
                let n = di * dout;
                let mut a = CMat::zeros(n, n);
                for i in 0..di {
                    for j in 0..di {
                        for k in 0..dout {
                            for l in 0..dout {
                                a[(l * di + j, k * di + i)] = c[(i * dout + k, j * dout + l)];
                            }
                        }
                    }
                }
                MapKind::ChoiBacked(a)
            }
            MapKind::Structured(Structured::Hh(c)) => MapKind::Structured(Structured::Hh(*c)),
            MapKind::Structured(Structured::Werner3 { d, coeffs, adjoint }) => {
                MapKind::Structured(Structured::Werner3 {
                    d: *d,
                    coeffs: *coeffs,
                    adjoint: !adjoint,
                })
            }
            MapKind::Structured(Structured::Quo { d, coeffs, adjoint }) => {
                MapKind::Structured(Structured::Quo {
                    d: *d,
                    coeffs: *coeffs,
                    adjoint: !adjoint,
                })
            }
        };
        LinMapSpec {
            d_in: self.d_out,
            d_out: self.d_in,
            kind,
        }
    }

    /// `(id_{d_id} ⊗ L)(rho)`.
    pub fn id_tensor_apply(&self, rho: &CMat, d_id: usize) -> Result<CMat> {
        let n = square_side(rho, "state")?;
        if d_id == 0 || n != d_id * self.d_in {
            return Err(Error::Dimension(format!(
                "(id_{d_id} ⊗ L) needs a {0}x{0} input, got {n}x{n}",
                d_id * self.d_in
            )));
        }
        let (di, dout) = (self.d_in, self.d_out);
        let m = d_id * dout;
        let mut out = CMat::zeros(m, m);
        for a in 0..d_id {
            for b in 0..d_id {
                let block = CMat::from_fn(di, di, |i, j| rho[(a * di + i, b * di + j)]);
                if block.data().iter().all(|&z| z == ZERO) {
                    continue;
                }
                let img = self.apply(&block)?;
                for k in 0..dout {
                    for l in 0..dout {
                        out[(a * dout + k, b * dout + l)] = img[(k, l)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Map JSON value.
    pub fn to_json(&self) -> Value {
        match &self.kind {
            MapKind::ChoiBacked(c) => serde_json::json!({
                "d_in": self.d_in,
                "d_out": self.d_out,
                "choi_unnormalized": c,
            }),
            MapKind::Structured(Structured::Hh(c)) => serde_json::json!({
                "family": "hh",
                "d": c.d,
                "coeffs": [c.a, c.b, c.c],
            }),
            MapKind::Structured(Structured::Werner3 { d, coeffs, adjoint }) => {
                family_json("werner3-L", *d, coeffs, *adjoint)
            }
            MapKind::Structured(Structured::Quo { d, coeffs, adjoint }) => {
                family_json("quo-M", *d, coeffs, *adjoint)
            }
        }
    }

    /// Parses a map JSON value.
    pub fn from_json(v: &Value) -> Result<Self> {
        let raw: MapJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::Format(format!("map JSON: {e}")))?;
        match raw {
            MapJson::Choi {
                d_in,
                d_out,
                choi_unnormalized,
            } => LinMapSpec::from_choi(d_in, d_out, choi_unnormalized),
            MapJson::Family {
                family,
                d,
                coeffs,
                coeffs_complex,
                adjoint,
            } => {
                let d = d.ok_or_else(|| Error::Format("family map JSON needs \"d\"".into()))?;
                match family.as_str() {
                    "hh" => {
                        let c = coeffs.unwrap_or_default();
                        if c.len() != 3 {
                            return Err(Error::Format("hh coefficients are [a, b, c]".into()));
                        }
                        if adjoint {
                            return Err(Error::Format(
                                "hh maps are self-adjoint; drop \"adjoint\"".into(),
                            ));
                        }
                        let h = HhCoeffs::new(d, c[0], c[1], c[2])?;
                        Ok(LinMapSpec::structured(Structured::Hh(h)))
                    }
                    "werner3-L" | "quo-M" => {
                        let s3 = match (coeffs, coeffs_complex) {
                            (Some(c), None) => {
                                let t: [f64; 6] = c.try_into().map_err(|_| {
                                    Error::Format(
                                        "coefficients are [ae, a12, a13, a23, re a123, im a123]"
                                            .into(),
                                    )
                                })?;
                                S3Coeffs::new(d, t)?.to_vec()
                            }
                            (None, Some(c)) => {
                                if c.len() != 6 {
                                    return Err(Error::Format(
                                        "coeffs_complex needs six [re, im] pairs".into(),
                                    ));
                                }
                                let mut v = S3Vec::zero();
                                for (slot, [r, i]) in v.0.iter_mut().zip(c) {
                                    *slot = C64::new(r, i);
                                }
                                v
                            }
                            _ => {
                                return Err(Error::Format(
                                    "give exactly one of \"coeffs\" and \"coeffs_complex\"".into(),
                                ))
                            }
                        };
                        if d < 2 {
                            return Err(Error::UnsupportedDimension {
                                d,
                                reason: "tripartite families need d >= 2",
                            });
                        }
                        let s = if family == "werner3-L" {
                            Structured::Werner3 {
                                d,
                                coeffs: s3,
                                adjoint,
                            }
                        } else {
                            Structured::Quo {
                                d,
                                coeffs: s3,
                                adjoint,
                            }
                        };
                        Ok(LinMapSpec::structured(s))
                    }
                    other => Err(Error::Format(format!("unknown map family {other:?}"))),
                }
            }
        }
    }
}

fn family_json(name: &str, d: usize, coeffs: &S3Vec, adjoint: bool) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("family".into(), name.into());
    obj.insert("d".into(), d.into());
    match S3Coeffs::from_vec(d, coeffs, 0.0) {
        Ok(c) => {
            obj.insert("coeffs".into(), serde_json::json!(c.tuple()));
        }
        Err(_) => {
            let pairs: Vec<[f64; 2]> = coeffs.0.iter().map(|z| [z.re, z.im]).collect();
            obj.insert("coeffs_complex".into(), serde_json::json!(pairs));
        }
    }
    if adjoint {
        obj.insert("adjoint".into(), true.into());
    }
    Value::Object(obj)
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum MapJson {
    Choi {
        d_in: usize,
        d_out: usize,
        choi_unnormalized: CMat,
    },
    Family {
        family: String,
        d: Option<usize>,
        coeffs: Option<Vec<f64>>,
        coeffs_complex: Option<Vec<[f64; 2]>>,
        #[serde(default)]
        adjoint: bool,
    },
}

/// `L(X)_kl = Σ_ij X_ij C[(i,k),(j,l)]`.
fn apply_choi(c: &CMat, di: usize, dout: usize, x: &CMat) -> CMat {
    let mut out = CMat::zeros(dout, dout);
    for i in 0..di {
        for j in 0..di {
            let xij = x[(i, j)];
            if xij == ZERO {
                continue;
            }
            for k in 0..dout {
                for l in 0..dout {
                    out[(k, l)] += xij * c[(i * dout + k, j * dout + l)];
                }
            }
        }
    }
    out
}

/// Convenience wrapper for [`LinMapSpec::choi`].
pub fn choi_of(map: &LinMapSpec, scale: ChoiScale) -> CMat {
    map.choi(scale)
}
