//! Inequality systems, closed-form membership checks and vertex
//! enumeration for three-parameter polytopes.

use serde::{Deserialize, Serialize};

use crate::certificate::{Check, Evidence, Verdict};

/// Slack above which a point counts as a member of a closed region.
pub const MEMBERSHIP_EPS: f64 = 1e-12;

/// One inequality evaluated at a point; satisfied iff `slack ≥ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub label: String,
    pub slack: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<u8>,
}

impl Constraint {
    pub fn new(label: impl Into<String>, slack: f64) -> Self {
        Constraint {
            label: label.into(),
            slack,
            tag: None,
        }
    }

    pub fn tagged(mut self, tag: u8) -> Self {
        self.tag = Some(tag);
        self
    }
}

/// All constraints of a region evaluated at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionCheck {
    pub constraints: Vec<Constraint>,
}

impl RegionCheck {
    pub fn new(constraints: Vec<Constraint>) -> Self {
        assert!(!constraints.is_empty(), "region without constraints");
        RegionCheck { constraints }
    }

    /// Membership in the closed region.
    pub fn holds(&self) -> bool {
        self.min_slack() >= -MEMBERSHIP_EPS
    }

    pub fn min_slack(&self) -> f64 {
        self.tightest().slack
    }

    pub fn tightest(&self) -> &Constraint {
        self.constraints
            .iter()
            .min_by(|a, b| a.slack.total_cmp(&b.slack))
            .expect("non-empty")
    }

    /// First constraint, in declaration order, that fails.
    pub fn first_violated(&self) -> Option<&Constraint> {
        self.constraints
            .iter()
            .find(|c| c.slack < -MEMBERSHIP_EPS)
    }

    /// True for members, false beyond `band` outside, boundary in between.
    pub fn verdict(&self, band: f64) -> Verdict {
        let s = self.min_slack();
        if s >= -MEMBERSHIP_EPS {
            Verdict::True
        } else if s < -band {
            Verdict::False
        } else {
            Verdict::Boundary
        }
    }

    /// Certificate entry; failures name the violated constraint and points
    /// within `band` of a facet name the near-tight one.
    pub fn to_check(&self, band: f64) -> Check {
        let verdict = self.verdict(band);
        let t = match verdict {
            Verdict::False => self.first_violated().unwrap_or(self.tightest()),
            _ => self.tightest(),
        };
        let evidence = if verdict != Verdict::True || t.slack <= band {
            Evidence::constraint(&t.label, t.slack)
        } else {
            Evidence::default()
        };
        Check { verdict, evidence }
    }
}

/// Halfspace `normal · x ≤ offset` in R³.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: [f64; 3],
    pub offset: f64,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<u8>,
}

impl Halfspace {
    pub fn new(normal: [f64; 3], offset: f64, label: impl Into<String>) -> Self {
        Halfspace {
            normal,
            offset,
            label: label.into(),
            tag: None,
        }
    }

    pub fn tagged(mut self, tag: u8) -> Self {
        self.tag = Some(tag);
        self
    }

    pub fn slack(&self, p: [f64; 3]) -> f64 {
        self.offset - (self.normal[0] * p[0] + self.normal[1] * p[1] + self.normal[2] * p[2])
    }

    pub fn constraint(&self, p: [f64; 3]) -> Constraint {
        Constraint {
            label: self.label.clone(),
            slack: self.slack(p),
            tag: self.tag,
        }
    }
}

pub fn check_halfspaces(hs: &[Halfspace], p: [f64; 3]) -> RegionCheck {
    RegionCheck::new(hs.iter().map(|h| h.constraint(p)).collect())
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Vertices of the bounded polytope `{x : normal_i · x ≤ offset_i}`,
/// found by intersecting every triple of facet planes and keeping the
/// feasible intersection points. Sorted lexicographically, duplicates merged.
pub fn enumerate_vertices(hs: &[Halfspace], tol: f64) -> Vec<[f64; 3]> {
    let mut verts: Vec<[f64; 3]> = Vec::new();
    let n = hs.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let m = [hs[i].normal, hs[j].normal, hs[k].normal];
                let det = det3(m);
                if det.abs() < 1e-12 {
                    continue;
                }
                let rhs = [hs[i].offset, hs[j].offset, hs[k].offset];
                let mut p = [0.0; 3];
                for (col, slot) in p.iter_mut().enumerate() {
                    let mut mc = m;
                    for row in 0..3 {
                        mc[row][col] = rhs[row];
                    }
                    *slot = det3(mc) / det + 0.0;
                }
                if hs.iter().all(|h| h.slack(p) >= -tol)
                    && !verts
                        .iter()
                        .any(|v| (0..3).all(|t| (v[t] - p[t]).abs() <= tol))
                {
                    verts.push(p);
                }
            }
        }
    }
    verts.sort_by(|a, b| {
        a[0].total_cmp(&b[0])
            .then(a[1].total_cmp(&b[1]))
            .then(a[2].total_cmp(&b[2]))
    });
    verts
}
