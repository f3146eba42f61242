use crate::error::{Phi4Error, Result};
use crate::fft::{forward_fourier, inverse_fourier, multiply_modes};
use crate::field::{expect_same_lattice, Field};
use crate::lattice::Lattice;

/// Mode table of the massive operator symbol `theta_k = m^2 + l_eps(k)`.
pub fn theta_table(lat: Lattice, m2: f64) -> Vec<f64> {
    lat.laplace_symbol().iter().map(|l| m2 + l).collect()
}

/// Semigroup action: multiplies mode k by `exp(-t theta_k)`.
pub fn heat_step(f: &Field, t: f64, m2: f64) -> Result<Field> {
    if t < 0.0 {
        return Err(Phi4Error::Argument(format!(
            "heat_step needs t >= 0, got {t}"
        )));
    }
    let theta = theta_table(f.lat, m2);
    let mult: Vec<f64> = theta.iter().map(|&th| (-t * th).exp()).collect();
    let mut fhat = forward_fourier(f)?;
    multiply_modes(&mut fhat, &mult)?;
    inverse_fourier(&fhat)
}

/// Elliptic inverse: divides mode k by `theta_k`. Needs m^2 > 0 so the zero
/// mode stays invertible.
pub fn q_inverse(f: &Field, m2: f64) -> Result<Field> {
    if m2 <= 0.0 {
        return Err(Phi4Error::Argument(format!(
            "q_inverse needs m^2 > 0, got {m2}"
        )));
    }
    let theta = theta_table(f.lat, m2);
    let mult: Vec<f64> = theta.iter().map(|&th| 1.0 / th).collect();
    let mut fhat = forward_fourier(f)?;
    multiply_modes(&mut fhat, &mult)?;
    inverse_fourier(&fhat)
}

/// A field trajectory sampled on a strictly increasing time grid.
#[derive(Clone)]
pub struct Traj {
    pub times: Vec<f64>,
    pub fields: Vec<Field>,
}

impl Traj {
    pub fn new(times: Vec<f64>, fields: Vec<Field>) -> Result<Self> {
        if times.len() != fields.len() || times.is_empty() {
            return Err(Phi4Error::TimeGrid(format!(
                "{} times vs {} fields",
                times.len(),
                fields.len()
            )));
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Phi4Error::TimeGrid(format!(
                    "time grid not increasing at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        for f in &fields[1..] {
            expect_same_lattice(&fields[0], f)?;
        }
        Ok(Self { times, fields })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn lat(&self) -> Lattice {
        self.fields[0].lat
    }

    /// Index of the last grid time <= t (grid lookup for evaluation).
    pub fn floor_index(&self, t: f64) -> usize {
        match self
            .times
            .binary_search_by(|x| x.partial_cmp(&t).unwrap())
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        }
    }
}

/// Shared-grid check for binary trajectory operations.
pub fn expect_same_grid(a: &Traj, b: &Traj) -> Result<()> {
    if a.len() != b.len() {
        return Err(Phi4Error::TimeGrid(format!(
            "trajectory lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    for (s, t) in a.times.iter().zip(&b.times) {
        if (s - t).abs() > 1e-12 * (1.0 + s.abs()) {
            return Err(Phi4Error::TimeGrid(format!(
                "time grids differ: {s} vs {t}"
            )));
        }
    }
    Ok(())
}

/// Solve `d/dt v + (m^2 - Lap) v = source`, `v(t_0) = v0`, by the exact
/// exponential integrator with the source frozen on each step:
/// `v_(n+1) = e^(-theta dt) v_n + (1 - e^(-theta dt))/theta source_n`
/// mode by mode. Returns v on the source's grid.
pub fn l_inverse(source: &Traj, v0: &Field, m2: f64) -> Result<Traj> {
    expect_same_lattice(&source.fields[0], v0)?;
    if m2 <= 0.0 {
        return Err(Phi4Error::Argument(format!(
            "l_inverse needs m^2 > 0, got {m2}"
        )));
    }
    let lat = v0.lat;
    let theta = theta_table(lat, m2);
    let mut vhat = forward_fourier(v0)?;
    let mut out = Vec::with_capacity(source.len());
    out.push(v0.clone());
    for i in 0..source.len() - 1 {
        let dt = source.times[i + 1] - source.times[i];
        let shat = forward_fourier(&source.fields[i])?;
        {
            let v = vhat.cx_mut()?;
            let s = shat.cx()?;
            for (k, &th) in theta.iter().enumerate() {
                let decay = (-th * dt).exp();
                // (1 - e^(-theta dt)) / theta, stable for small theta dt.
                let gain = -(-th * dt).exp_m1() / th;
                v[k] = decay * v[k] + gain * s[k];
            }
        }
        out.push(inverse_fourier(&vhat)?);
    }
    Traj::new(source.times.clone(), out)
}
