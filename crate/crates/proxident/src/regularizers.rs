//! Nonsmooth regularizers with exact proximal operators.
//!
//! Each prox call reports the structure of its output as a byproduct of
//! the closed-form branch taken: zero coordinates for the l1 norm, the
//! post-threshold rank for the nuclear norm, sphere membership for the
//! distance-to-p-ball terms. No floating-point membership test is ever
//! run on the output point afterwards.

use std::collections::BTreeSet;
use std::ops::Range;

use crate::error::Error;
use crate::linalg::{svd, DenseMatrix, DenseVector};

/// A candidate structure manifold.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ManifoldId {
    /// Coordinate `i` is exactly zero.
    ZeroCoordinate(usize),
    /// Matrix iterate has rank exactly `r`.
    RankEquals(usize),
    /// Group `g` lies on the unit p-sphere.
    GroupOnSphere(usize),
}

/// The exact set of candidate manifolds certified by a prox evaluation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureSignature {
    members: BTreeSet<ManifoldId>,
}

impl StructureSignature {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: ManifoldId) {
        self.members.insert(id);
    }

    pub fn contains(&self, id: &ManifoldId) -> bool {
        self.members.contains(id)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ManifoldId> {
        self.members.iter()
    }

    /// Members of `self` absent from `other`.
    pub fn difference(&self, other: &StructureSignature) -> StructureSignature {
        StructureSignature {
            members: self.members.difference(&other.members).cloned().collect(),
        }
    }

    pub fn intersection_len(&self, other: &StructureSignature) -> usize {
        self.members.intersection(&other.members).count()
    }

    /// Order-independent 64-bit hash (FNV-1a over the canonical encoding),
    /// stable across runs and platforms.
    pub fn stable_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut byte = |b: u8| {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        };
        for m in &self.members {
            let (tag, idx) = match m {
                ManifoldId::ZeroCoordinate(i) => (1u8, *i as u64),
                ManifoldId::RankEquals(r) => (2u8, *r as u64),
                ManifoldId::GroupOnSphere(g) => (3u8, *g as u64),
            };
            byte(tag);
            for b in idx.to_le_bytes() {
                byte(b);
            }
        }
        h
    }
}

impl FromIterator<ManifoldId> for StructureSignature {
    fn from_iter<T: IntoIterator<Item = ManifoldId>>(iter: T) -> Self {
        Self {
            members: iter.into_iter().collect(),
        }
    }
}

/// Prox output together with the certified structure of the point.
#[derive(Debug, Clone)]
pub struct ProxResult {
    pub point: DenseVector,
    pub signature: StructureSignature,
}

// Post-threshold singular values below this multiple of the largest one
// count as zero: Jacobi SVD noise floor.
const RANK_FLOOR: f64 = 1e-12;

/// Nonsmooth term g. Matrix-variable regularizers act on the flattened
/// (row-major) vector; the weight lambda is absorbed at call sites via the
/// effective step `gamma_eff = gamma * lambda`.
#[derive(Debug, Clone)]
pub enum Regularizer {
    /// l1 norm.
    L1,
    /// Nuclear norm of the `rows x cols` reshaping of the variable.
    Nuclear { rows: usize, cols: usize },
    /// max(0, ||x||_p - 1), p > 1.
    DistPBall { p: f64 },
    /// Sum of per-group distances to the unit p-ball; `groups` partition
    /// the coordinate index set.
    GroupDistPBall { p: f64, groups: Vec<Range<usize>> },
}

impl Regularizer {
    fn check_dims(&self, x: &DenseVector) -> Result<(), Error> {
        let expected = match self {
            Regularizer::L1 | Regularizer::DistPBall { .. } => return Ok(()),
            Regularizer::Nuclear { rows, cols } => rows * cols,
            Regularizer::GroupDistPBall { groups, .. } => {
                groups.iter().map(|g| g.len()).sum()
            }
        };
        if x.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &DenseVector) -> Result<f64, Error> {
        self.check_dims(x)?;
        Ok(match self {
            Regularizer::L1 => x.as_slice().iter().map(|v| v.abs()).sum(),
            Regularizer::Nuclear { rows, cols } => {
                let m = DenseMatrix::new(*rows, *cols, x.as_slice().to_vec())?;
                svd(&m).singulars.as_slice().iter().sum()
            }
            Regularizer::DistPBall { p } => (x.norm_p(*p) - 1.0).max(0.0),
            Regularizer::GroupDistPBall { p, groups } => groups
                .iter()
                .map(|g| {
                    let sub = DenseVector::new(x.as_slice()[g.clone()].to_vec()).unwrap();
                    (sub.norm_p(*p) - 1.0).max(0.0)
                })
                .sum(),
        })
    }

    pub fn prox(&self, u: &DenseVector, gamma_eff: f64) -> Result<ProxResult, Error> {
        if gamma_eff <= 0.0 {
            return Err(Error::InvalidArgument(
                "prox: gamma_eff must be positive".into(),
            ));
        }
        self.check_dims(u)?;
        Ok(match self {
            Regularizer::L1 => prox_l1(u, gamma_eff),
            Regularizer::Nuclear { rows, cols } => prox_nuclear(u, gamma_eff, *rows, *cols)?,
            Regularizer::DistPBall { p } => {
                let full = 0..u.len();
                prox_pball_groups(u, gamma_eff, *p, std::slice::from_ref(&full))
            }
            Regularizer::GroupDistPBall { p, groups } => {
                prox_pball_groups(u, gamma_eff, *p, groups)
            }
        })
    }

    /// The candidate manifold collection for this regularizer on a
    /// variable of `dim` flattened coordinates.
    pub fn candidate_collection(&self, dim: usize) -> Vec<ManifoldId> {
        match self {
            Regularizer::L1 => (0..dim).map(ManifoldId::ZeroCoordinate).collect(),
            Regularizer::Nuclear { rows, cols } => {
                (0..=*rows.min(cols)).map(ManifoldId::RankEquals).collect()
            }
            Regularizer::DistPBall { .. } => vec![ManifoldId::GroupOnSphere(0)],
            Regularizer::GroupDistPBall { groups, .. } => {
                (0..groups.len()).map(ManifoldId::GroupOnSphere).collect()
            }
        }
    }
}

fn prox_l1(u: &DenseVector, gamma: f64) -> ProxResult {
    let mut out = Vec::with_capacity(u.len());
    let mut sig = StructureSignature::empty();
    for (i, &ui) in u.as_slice().iter().enumerate() {
        if (-gamma..=gamma).contains(&ui) {
            out.push(0.0);
            sig.insert(ManifoldId::ZeroCoordinate(i));
        } else {
            out.push(ui - gamma * ui.signum());
        }
    }
    ProxResult {
        point: DenseVector::new(out).expect("finite by construction"),
        signature: sig,
    }
}

fn prox_nuclear(
    u: &DenseVector,
    gamma: f64,
    rows: usize,
    cols: usize,
) -> Result<ProxResult, Error> {
    let m = DenseMatrix::new(rows, cols, u.as_slice().to_vec())?;
    let mut dec = svd(&m);
    let sing = dec.singulars.as_mut_slice();
    for s in sing.iter_mut() {
        *s = (*s - gamma).max(0.0);
    }
    let smax = sing.iter().cloned().fold(0.0_f64, f64::max);
    let mut rank = 0;
    for s in sing.iter_mut() {
        if *s <= RANK_FLOOR * smax {
            *s = 0.0;
        } else {
            rank += 1;
        }
    }
    let point = DenseVector::new(dec.reconstruct().as_slice().to_vec())?;
    let mut sig = StructureSignature::empty();
    sig.insert(ManifoldId::RankEquals(rank));
    Ok(ProxResult {
        point,
        signature: sig,
    })
}

// Closed-form radial operator for the distance-to-unit-p-ball term,
// applied per group. Boundary ties go to the on-sphere branch.
fn prox_pball_groups(
    u: &DenseVector,
    gamma: f64,
    p: f64,
    groups: &[Range<usize>],
) -> ProxResult {
    let mut out = u.as_slice().to_vec();
    let mut sig = StructureSignature::empty();
    for (gi, range) in groups.iter().enumerate() {
        let sub = DenseVector::new(u.as_slice()[range.clone()].to_vec()).unwrap();
        let nrm = sub.norm_p(p);
        if nrm < 1.0 {
            // inside the ball: unchanged
        } else if nrm <= 1.0 + gamma {
            for (dst, &v) in out[range.clone()].iter_mut().zip(sub.as_slice()) {
                *dst = v / nrm;
            }
            sig.insert(ManifoldId::GroupOnSphere(gi));
        } else {
            let shrink = 1.0 - gamma / nrm;
            for (dst, &v) in out[range.clone()].iter_mut().zip(sub.as_slice()) {
                *dst = v * shrink;
            }
        }
    }
    ProxResult {
        point: DenseVector::new(out).expect("finite by construction"),
        signature: sig,
    }
}
