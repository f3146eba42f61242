use crate::calculus::weighted_lp_norm;
use crate::error::{Phi4Error, Result};
use crate::field::{weight_field, Field};
use crate::lattice::Weight;
use crate::partition::{lp_all, DyadicPartition};

/// Parameters of a weighted Besov norm
/// `( sum_j 2^(alpha j q) |rho . block_j f|_{L^p}^q )^(1/q)`,
/// with `p` or `q` infinite meaning the sup.
#[derive(Clone, Copy, Debug)]
pub struct BesovParams {
    pub alpha: f64,
    pub p: f64,
    pub q: f64,
    pub weight: Weight,
    pub weight_power: f64,
}

impl BesovParams {
    pub fn new(alpha: f64, p: f64, q: f64, weight: Weight, weight_power: f64) -> Result<Self> {
        if !(p >= 1.0) || !(q >= 1.0) {
            return Err(Phi4Error::Argument(format!(
                "Besov exponents need p, q >= 1; got p={p}, q={q}"
            )));
        }
        if !weight_power.is_finite() {
            return Err(Phi4Error::Argument("weight power must be finite".into()));
        }
        Ok(Self {
            alpha,
            p,
            q,
            weight,
            weight_power,
        })
    }

    /// Hoelder-type space: B with p = q = inf.
    pub fn holder(alpha: f64, weight: Weight, weight_power: f64) -> Self {
        Self::new(alpha, f64::INFINITY, f64::INFINITY, weight, weight_power).unwrap()
    }

    /// Sobolev-type space: B with p = q = 2.
    pub fn sobolev(alpha: f64, weight: Weight, weight_power: f64) -> Self {
        Self::new(alpha, 2.0, 2.0, weight, weight_power).unwrap()
    }

    /// Same space over the flat weight.
    pub fn unweighted(alpha: f64, p: f64, q: f64) -> Self {
        Self::new(alpha, p, q, Weight::flat(), 0.0).unwrap()
    }
}

/// Combine per-block weighted L^p norms into the Besov norm.
pub fn combine_block_norms(alpha: f64, q: f64, norms: &[(i32, f64)]) -> f64 {
    if q.is_infinite() {
        norms
            .iter()
            .fold(0.0, |m, &(j, w)| m.max(2.0f64.powi(j).powf(alpha) * w))
    } else {
        norms
            .iter()
            .map(|&(j, w)| (2.0f64.powi(j).powf(alpha) * w).powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }
}

/// Weighted Besov norm of a physical field with respect to a partition.
pub fn besov_norm(part: &DyadicPartition, f: &Field, params: &BesovParams) -> Result<f64> {
    if f.lat != part.lat {
        return Err(Phi4Error::LatticeMismatch);
    }
    let rho = weight_field(f.lat, &params.weight, params.weight_power);
    let blocks = lp_all(part, f)?;
    let mut norms = Vec::with_capacity(blocks.len());
    for (j, b) in part.block_range().zip(&blocks) {
        norms.push((j, weighted_lp_norm(b, &rho, params.p)?));
    }
    Ok(combine_block_norms(params.alpha, params.q, &norms))
}
