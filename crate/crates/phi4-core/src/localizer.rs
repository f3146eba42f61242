use crate::error::{Phi4Error, Result};
use crate::fft::{forward_fourier, inverse_fourier};
use crate::field::Field;
use crate::lattice::{make_lattice, Lattice, Weight};
use crate::partition::{lp_all, DyadicPartition};

/// Regularity/weight exponent triples for the coefficient split. The two
/// slopes must agree: r = (b - a)/(beta - alpha) = (c - b)/(gamma - beta).
#[derive(Clone, Copy, Debug)]
pub struct LocalizerExponents {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LocalizerExponents {
    pub fn ratio(&self) -> Result<f64> {
        if !(self.alpha < self.beta && self.beta < self.gamma) {
            return Err(Phi4Error::Argument(format!(
                "regularity exponents must increase: {} < {} < {}",
                self.alpha, self.beta, self.gamma
            )));
        }
        if !(self.a < self.b && self.b < self.c) {
            return Err(Phi4Error::Argument(format!(
                "weight exponents must increase: {} < {} < {}",
                self.a, self.b, self.c
            )));
        }
        let r1 = (self.b - self.a) / (self.beta - self.alpha);
        let r2 = (self.c - self.b) / (self.gamma - self.beta);
        if (r1 - r2).abs() > 1e-9 * r1.abs().max(1.0) {
            return Err(Phi4Error::Argument(format!(
                "exponent slopes differ: {r1} vs {r2}"
            )));
        }
        Ok(r1)
    }
}

/// Coarse sampling grid of block j: number of points per axis and the site
/// stride on the fine lattice. The grid spacing is 2^(-j-J).
pub fn coarse_grid(lat: Lattice, offset: u32, j: i32) -> Result<(Lattice, usize)> {
    let level = j + offset as i32;
    if level < 0 {
        return Err(Phi4Error::Argument(format!(
            "block {j} with offset {offset} has no sampling grid"
        )));
    }
    let coarse = make_lattice(level as u32, lat.side).map_err(|e| {
        Phi4Error::Lattice(format!(
            "coarse grid of block {j} (offset {offset}) is not a sublattice: {e}"
        ))
    })?;
    let stride = lat.n_side / coarse.n_side;
    Ok((coarse, stride))
}

/// Point-evaluation coefficients of block j: the block sampled on its coarse
/// grid, returned in the coarse lattice's storage order.
pub fn block_coefficients(lat: Lattice, offset: u32, j: i32, block: &Field) -> Result<Vec<f64>> {
    let (coarse, stride) = coarse_grid(lat, offset, j)?;
    let v = block.re()?;
    let nc = coarse.n_side;
    let n = lat.n_side;
    let mut out = Vec::with_capacity(coarse.volume());
    for mz in 0..nc {
        let z = (mz * stride) % n;
        for my in 0..nc {
            let y = (my * stride) % n;
            for mx in 0..nc {
                let x = (mx * stride) % n;
                out.push(v[lat.idx(x, y, z)]);
            }
        }
    }
    Ok(out)
}

/// Rebuild a block from its coarse-grid point values: Fourier transform on
/// the coarse lattice, embed the modes into the fine grid, invert. Exact
/// for blocks whose multiplier is supported in the coarse Nyquist box.
pub fn reconstruct_block(lat: Lattice, offset: u32, j: i32, coeffs: &[f64]) -> Result<Field> {
    let (coarse, _) = coarse_grid(lat, offset, j)?;
    let cf = Field::from_values(coarse, coeffs.to_vec())?;
    let chat = forward_fourier(&cf)?;
    let mut full = Field::zeros_fourier(lat);
    {
        let fm = full.cx_mut()?;
        let cm = chat.cx()?;
        let nc = coarse.n_side;
        for mz in 0..nc {
            let sz = lat.unsigned(coarse.signed(mz));
            for my in 0..nc {
                let sy = lat.unsigned(coarse.signed(my));
                for mx in 0..nc {
                    let sx = lat.unsigned(coarse.signed(mx));
                    fm[lat.idx(sx, sy, sz)] = cm[coarse.idx(mx, my, mz)];
                }
            }
        }
    }
    inverse_fourier(&full)
}

/// Dyadic shell of an integer coarse index: -1 for |m| <= 1, otherwise the
/// smallest k with |m| <= 2^k.
pub fn shell_of(m2: i64) -> i32 {
    if m2 <= 1 {
        return -1;
    }
    let mut k = 1;
    while (1i64 << (2 * k)) < m2 {
        k += 1;
    }
    k as i32
}

/// Split f into coefficients kept above the shell-dependent level
/// (`U_> f`, first component) and the complement (`U_<= f`): coefficient
/// (j, m) goes to the first part iff j > L_k(m), with
/// L_k = L + r (-log2 rho(2^k)).
pub fn localizer_split(
    part: &DyadicPartition,
    f: &Field,
    level: f64,
    weight: &Weight,
    exps: &LocalizerExponents,
) -> Result<(Field, Field)> {
    if f.lat != part.lat {
        return Err(Phi4Error::LatticeMismatch);
    }
    let r = exps.ratio()?;
    let lat = f.lat;
    let blocks = lp_all(part, f)?;

    // L_k cache over shells; shells on our grids stay small.
    let mut lk: Vec<f64> = Vec::new();
    let mut level_for = |k: i32| -> f64 {
        let idx = (k + 1) as usize;
        while lk.len() <= idx {
            let kk = lk.len() as i32 - 1;
            let ck = -weight.radial(2.0f64.powi(kk), 1.0).log2();
            lk.push(level + r * ck);
        }
        lk[idx]
    };

    let mut upper = Field::zeros(lat);
    let mut lower = Field::zeros(lat);
    for j in part.block_range() {
        let block = &blocks[(j + 1) as usize];
        let coeffs = block_coefficients(lat, part.offset, j, block)?;
        let (coarse, _) = coarse_grid(lat, part.offset, j)?;
        let nc = coarse.n_side;
        let mut kept = vec![0.0f64; coeffs.len()];
        let mut dropped = vec![0.0f64; coeffs.len()];
        let mut any_kept = false;
        let mut any_dropped = false;
        for mz in 0..nc {
            let sz = coarse.signed(mz);
            for my in 0..nc {
                let sy = coarse.signed(my);
                for mx in 0..nc {
                    let sx = coarse.signed(mx);
                    let m2 = (sx * sx + sy * sy + sz * sz) as i64;
                    let idx = coarse.idx(mx, my, mz);
                    if (j as f64) > level_for(shell_of(m2)) {
                        kept[idx] = coeffs[idx];
                        any_kept = true;
                    } else {
                        dropped[idx] = coeffs[idx];
                        any_dropped = true;
                    }
                }
            }
        }
        if any_kept {
            upper.axpy(1.0, &reconstruct_block(lat, part.offset, j, &kept)?)?;
        }
        if any_dropped {
            lower.axpy(1.0, &reconstruct_block(lat, part.offset, j, &dropped)?)?;
        }
    }
    Ok((upper, lower))
}
