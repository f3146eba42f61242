use crate::error::{Phi4Error, Result};

/// Spatial dimension. Fixed: all stencils, Fourier passes and mode
/// bookkeeping are written for three axes.
pub const DIM: usize = 3;

/// Periodic cubic lattice of mesh `eps = 2^-level` and side length `side`,
/// with `n_side = side * 2^level` sites per axis.
///
/// Site coordinates are centered: `x_i = eps * s_i` with
/// `s_i in {-n_side/2, ..., n_side/2 - 1}`, so the torus is `[-side/2, side/2)^3`
/// and reflection through the origin maps the site set to itself.
/// Storage order is row-major with the x index fastest; storage index `i`
/// along an axis corresponds to the signed index `i` for `i < n_side/2` and
/// `i - n_side` otherwise (the usual FFT wrap).
///
/// Fourier modes are `k_i = t_i / side` with `t_i` integer in the same
/// centered range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    /// Dyadic refinement level N; the mesh is `eps = 2^-N`.
    pub level: u32,
    /// Torus side length M.
    pub side: f64,
    /// Sites per axis, `side * 2^level` (always even).
    pub n_side: usize,
    /// Mesh size `2^-level`.
    pub eps: f64,
}

/// Build a lattice, validating the geometry constraint `side * 2^(level-1)`
/// is a positive integer (equivalently: `side / (2 eps)` sites fit an even,
/// integer grid).
pub fn make_lattice(level: u32, side: f64) -> Result<Lattice> {
    if !(side > 0.0) || !side.is_finite() {
        return Err(Phi4Error::Lattice(format!(
            "side length must be a positive real, got {side}"
        )));
    }
    let half_sites = side * (2.0f64).powi(level as i32 - 1);
    if half_sites.fract() != 0.0 || half_sites < 1.0 {
        return Err(Phi4Error::Lattice(format!(
            "side/(2 eps) = {half_sites} must be a positive integer (level={level}, side={side})"
        )));
    }
    if half_sites > 2048.0 {
        return Err(Phi4Error::Lattice(format!(
            "lattice too large for this tool: {} sites per axis",
            2.0 * half_sites
        )));
    }
    let n_side = (2.0 * half_sites) as usize;
    Ok(Lattice {
        level,
        side,
        n_side,
        eps: (2.0f64).powi(-(level as i32)),
    })
}

impl Lattice {
    /// Total number of sites (= number of modes).
    #[inline]
    pub fn volume(&self) -> usize {
        self.n_side * self.n_side * self.n_side
    }

    /// Cell volume `eps^3`, the weight of one site in lattice integrals.
    #[inline]
    pub fn cell(&self) -> f64 {
        self.eps * self.eps * self.eps
    }

    /// Torus volume `side^3`.
    #[inline]
    pub fn torus_volume(&self) -> f64 {
        self.side * self.side * self.side
    }

    /// Signed (centered) index for a storage index along one axis.
    #[inline]
    pub fn signed(&self, i: usize) -> i64 {
        if i < self.n_side / 2 {
            i as i64
        } else {
            i as i64 - self.n_side as i64
        }
    }

    /// Storage index for a signed axis index (wrapping).
    #[inline]
    pub fn unsigned(&self, s: i64) -> usize {
        s.rem_euclid(self.n_side as i64) as usize
    }

    /// Coordinate of a site along one axis, in `[-side/2, side/2)`.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        self.eps * self.signed(i) as f64
    }

    /// Fourier mode along one axis, in `[-n_side/(2 side), ...)`.
    #[inline]
    pub fn mode(&self, i: usize) -> f64 {
        self.signed(i) as f64 / self.side
    }

    /// Flat storage index of the site `(ix, iy, iz)`; x fastest.
    #[inline]
    pub fn idx(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (iz * self.n_side + iy) * self.n_side + ix
    }

    /// Inverse of `idx`.
    #[inline]
    pub fn coords_of(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.n_side;
        (idx % n, (idx / n) % n, idx / (n * n))
    }

    /// Per-axis table of the negative-Laplacian symbol contribution
    /// `4 sin^2(pi eps k_i) / eps^2` indexed by storage index. The full
    /// symbol at a mode is the sum of the three axis entries.
    pub fn laplace_symbol_axis(&self) -> Vec<f64> {
        let n = self.n_side;
        (0..n)
            .map(|i| {
                let s = std::f64::consts::PI * self.signed(i) as f64 / n as f64;
                4.0 * s.sin().powi(2) / (self.eps * self.eps)
            })
            .collect()
    }

    /// Negative-Laplacian symbol `l(k)` on the full mode grid, storage order.
    pub fn laplace_symbol(&self) -> Vec<f64> {
        let axis = self.laplace_symbol_axis();
        let n = self.n_side;
        let mut out = Vec::with_capacity(self.volume());
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    out.push(axis[ix] + axis[iy] + axis[iz]);
                }
            }
        }
        out
    }

    /// Euclidean length of the mode vector at a flat storage index.
    pub fn mode_norm(&self, idx: usize) -> f64 {
        let (ix, iy, iz) = self.coords_of(idx);
        let (a, b, c) = (self.mode(ix), self.mode(iy), self.mode(iz));
        (a * a + b * b + c * c).sqrt()
    }

    /// The lattice refined once (mesh halved, same torus).
    pub fn refined(&self) -> Result<Lattice> {
        make_lattice(self.level + 1, self.side)
    }
}

/// Polynomial spatial weight `rho(x) = (1 + |h x|^2)^(-nu/2)`.
///
/// `h = 0` or `nu = 0` gives the flat weight `rho = 1`. The weight is
/// evaluated at centered torus coordinates, so it peaks at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weight {
    /// Inverse length scale.
    pub h: f64,
    /// Decay exponent, `nu >= 0`.
    pub nu: f64,
}

impl Weight {
    pub fn new(h: f64, nu: f64) -> Result<Self> {
        if !(nu >= 0.0) || !h.is_finite() || !nu.is_finite() {
            return Err(Phi4Error::Argument(format!(
                "weight requires finite h and nu >= 0, got h={h}, nu={nu}"
            )));
        }
        Ok(Weight { h, nu })
    }

    /// Flat weight, `rho = 1` everywhere.
    pub fn flat() -> Self {
        Weight { h: 0.0, nu: 0.0 }
    }

    /// Evaluate `rho(x)^power` at a point.
    #[inline]
    pub fn at(&self, x: [f64; 3], power: f64) -> f64 {
        let r2 = self.h * self.h * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        (1.0 + r2).powf(-self.nu * power / 2.0)
    }

    /// Evaluate `rho^power` as a radial function of a scalar radius
    /// (used by the localizer thresholds, which index shells by `2^k`).
    #[inline]
    pub fn radial(&self, r: f64, power: f64) -> f64 {
        let hr = self.h * r;
        (1.0 + hr * hr).powf(-self.nu * power / 2.0)
    }
}
