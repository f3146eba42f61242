use crate::error::Result;
use crate::field::{Domain, Field};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type Plans = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plans_for(n: usize) -> Plans {
    static CACHE: OnceLock<Mutex<HashMap<usize, Plans>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (
                planner.plan_fft_forward(n),
                planner.plan_fft_inverse(n),
            )
        })
        .clone()
}

/// Unnormalized 3D DFT in place on a flat row-major buffer (x fastest).
/// `forward` uses the e^(-2 pi i k x) sign.
fn dft3_in_place(buf: &mut [Complex64], n: usize, forward: bool) {
    let (f, b) = plans_for(n);
    let plan = if forward { f } else { b };
    let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];

    // x axis: rows are contiguous; rustfft transforms each length-n chunk.
    plan.process_with_scratch(buf, &mut scratch);

    // y axis: stride n within each z slab.
    let mut row = vec![Complex64::default(); n];
    for iz in 0..n {
        let slab = iz * n * n;
        for ix in 0..n {
            for iy in 0..n {
                row[iy] = buf[slab + iy * n + ix];
            }
            plan.process_with_scratch(&mut row, &mut scratch);
            for iy in 0..n {
                buf[slab + iy * n + ix] = row[iy];
            }
        }
    }

    // z axis: stride n^2.
    for iy in 0..n {
        for ix in 0..n {
            let base = iy * n + ix;
            for iz in 0..n {
                row[iz] = buf[base + iz * n * n];
            }
            plan.process_with_scratch(&mut row, &mut scratch);
            for iz in 0..n {
                buf[base + iz * n * n] = row[iz];
            }
        }
    }
}

/// Forward transform with the lattice normalization
/// `F f(k) = eps^3 sum_x f(x) e^(-2 pi i k.x)`.
///
/// Because coordinates and modes are both stored in FFT wrap order, the
/// centered-window convention is automatic: the phase only depends on the
/// signed indices modulo `n_side`.
pub fn forward_fourier(f: &Field) -> Result<Field> {
    let v = f.re()?;
    let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    dft3_in_place(&mut buf, f.lat.n_side, true);
    let c = f.lat.cell();
    buf.iter_mut().for_each(|z| *z *= c);
    Field::from_modes(f.lat, buf)
}

/// Forward transform of an already-complex buffer (same normalization);
/// used internally where fields are manipulated in mode space.
pub fn forward_fourier_of(fhat: &Field) -> Result<Field> {
    match fhat.domain() {
        Domain::Physical => forward_fourier(fhat),
        Domain::Fourier => Ok(fhat.clone()),
    }
}

/// Inverse transform `f(x) = side^-3 sum_k F f(k) e^(2 pi i k.x)`, returning
/// the real part. Intended for Hermitian mode data (transforms of real
/// fields and real multipliers applied to them); the imaginary residue is
/// checked in debug builds.
pub fn inverse_fourier(fhat: &Field) -> Result<Field> {
    let buf = inverse_fourier_complex(fhat)?;
    #[cfg(debug_assertions)]
    {
        let scale = buf.iter().fold(0.0f64, |m, z| m.max(z.re.abs()));
        let imag = buf.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        debug_assert!(
            imag <= 1e-8 * (1.0 + scale),
            "inverse_fourier of non-Hermitian data: max imag {imag:e} vs scale {scale:e}"
        );
    }
    Field::from_values(fhat.lat, buf.iter().map(|z| z.re).collect())
}

/// Inverse transform keeping the complex values.
pub fn inverse_fourier_complex(fhat: &Field) -> Result<Vec<Complex64>> {
    let mut buf = fhat.cx()?.to_vec();
    dft3_in_place(&mut buf, fhat.lat.n_side, false);
    let c = 1.0 / fhat.lat.torus_volume();
    buf.iter_mut().for_each(|z| *z *= c);
    Ok(buf)
}

/// Multiply mode coefficients by a real multiplier given in storage order.
pub fn multiply_modes(fhat: &mut Field, mult: &[f64]) -> Result<()> {
    for (z, &m) in fhat.cx_mut()?.iter_mut().zip(mult.iter()) {
        *z *= m;
    }
    Ok(())
}

/// Apply a real Fourier multiplier to a physical field:
/// `F^-1( mult .* F f )`.
pub fn apply_multiplier(f: &Field, mult: &[f64]) -> Result<Field> {
    let mut fhat = forward_fourier(f)?;
    multiply_modes(&mut fhat, mult)?;
    inverse_fourier(&fhat)
}
