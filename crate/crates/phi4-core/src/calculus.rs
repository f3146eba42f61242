use crate::error::Result;
use crate::field::{expect_same_lattice, Field};
use crate::lattice::DIM;

/// Periodic shift by whole lattice steps: returns `g(x) = f(x + eps*step)`.
pub fn shift_field(f: &Field, step: [i64; 3]) -> Result<Field> {
    let lat = f.lat;
    let n = lat.n_side as i64;
    let v = f.re()?;
    let mut out = vec![0.0; v.len()];
    for iz in 0..lat.n_side {
        let sz = ((iz as i64 + step[2]).rem_euclid(n)) as usize;
        for iy in 0..lat.n_side {
            let sy = ((iy as i64 + step[1]).rem_euclid(n)) as usize;
            for ix in 0..lat.n_side {
                let sx = ((ix as i64 + step[0]).rem_euclid(n)) as usize;
                out[lat.idx(ix, iy, iz)] = v[lat.idx(sx, sy, sz)];
            }
        }
    }
    Field::from_values(lat, out)
}

/// Forward difference quotient in direction `axis`:
/// `(f(x + eps e_axis) - f(x)) / eps`.
pub fn forward_difference(f: &Field, axis: usize) -> Result<Field> {
    assert!(axis < DIM);
    let mut step = [0i64; 3];
    step[axis] = 1;
    let mut g = shift_field(f, step)?;
    g.axpy(-1.0, f)?;
    g.scale(1.0 / f.lat.eps);
    Ok(g)
}

/// Discrete gradient: the three forward difference quotients.
pub fn discrete_gradient(f: &Field) -> Result<[Field; 3]> {
    Ok([
        forward_difference(f, 0)?,
        forward_difference(f, 1)?,
        forward_difference(f, 2)?,
    ])
}

/// Seven-point Laplacian
/// `sum_axis (f(x+eps e) + f(x-eps e) - 2 f(x)) / eps^2`.
pub fn discrete_laplacian(f: &Field) -> Result<Field> {
    let lat = f.lat;
    let n = lat.n_side;
    let v = f.re()?;
    let inv_eps2 = 1.0 / (lat.eps * lat.eps);
    let mut out = vec![0.0; v.len()];
    for iz in 0..n {
        let zp = (iz + 1) % n;
        let zm = (iz + n - 1) % n;
        for iy in 0..n {
            let yp = (iy + 1) % n;
            let ym = (iy + n - 1) % n;
            for ix in 0..n {
                let xp = (ix + 1) % n;
                let xm = (ix + n - 1) % n;
                let c = v[lat.idx(ix, iy, iz)];
                let s = v[lat.idx(xp, iy, iz)]
                    + v[lat.idx(xm, iy, iz)]
                    + v[lat.idx(ix, yp, iz)]
                    + v[lat.idx(ix, ym, iz)]
                    + v[lat.idx(ix, iy, zp)]
                    + v[lat.idx(ix, iy, zm)]
                    - 6.0 * c;
                out[lat.idx(ix, iy, iz)] = s * inv_eps2;
            }
        }
    }
    Field::from_values(lat, out)
}

/// Lattice duality pairing `<f, g> = eps^3 sum_x f(x) g(x)`.
pub fn duality_product(f: &Field, g: &Field) -> Result<f64> {
    expect_same_lattice(f, g)?;
    let a = f.re()?;
    let b = g.re()?;
    Ok(f.lat.cell() * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
}

/// Lattice `L^p` norm `(eps^3 sum |f|^p)^(1/p)`; `p = inf` gives the sup norm.
/// Requires `p >= 1`.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    let v = f.re()?;
    if p.is_infinite() {
        return Ok(v.iter().fold(0.0, |m, x| m.max(x.abs())));
    }
    assert!(p >= 1.0, "lp_norm needs p >= 1, got {p}");
    let cell = f.lat.cell();
    if p == 1.0 {
        return Ok(cell * v.iter().map(|x| x.abs()).sum::<f64>());
    }
    if p == 2.0 {
        return Ok((cell * v.iter().map(|x| x * x).sum::<f64>()).sqrt());
    }
    Ok((cell * v.iter().map(|x| x.abs().powf(p)).sum::<f64>()).powf(1.0 / p))
}

/// Weighted norm `|| rho f ||_{L^p}` without materializing the product field.
pub fn weighted_lp_norm(f: &Field, rho: &Field, p: f64) -> Result<f64> {
    expect_same_lattice(f, rho)?;
    let v = f.re()?;
    let w = rho.re()?;
    if p.is_infinite() {
        return Ok(v
            .iter()
            .zip(w)
            .fold(0.0, |m, (x, r)| m.max((x * r).abs())));
    }
    assert!(p >= 1.0, "weighted_lp_norm needs p >= 1, got {p}");
    let cell = f.lat.cell();
    if p == 1.0 {
        return Ok(cell * v.iter().zip(w).map(|(x, r)| (x * r).abs()).sum::<f64>());
    }
    if p == 2.0 {
        let s: f64 = v.iter().zip(w).map(|(x, r)| (x * r) * (x * r)).sum();
        return Ok((cell * s).sqrt());
    }
    let s: f64 = v.iter().zip(w).map(|(x, r)| (x * r).abs().powf(p)).sum();
    Ok((cell * s).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::forward_fourier;
    use crate::lattice::make_lattice;
    use std::f64::consts::PI;

    fn trig_field(lat: crate::lattice::Lattice, k: [f64; 3], phase: f64) -> Field {
        Field::from_fn(lat, move |x| {
            (2.0 * PI * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]) + phase).cos()
        })
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let lat = make_lattice(1, 2.0).unwrap();
        let f = Field::constant(lat, 4.2);
        for g in discrete_gradient(&f).unwrap() {
            assert!(g.linf() < 1e-14);
        }
    }

    #[test]
    fn cosine_is_laplacian_eigenvector() {
        // Plane waves diagonalize the 7-point stencil with eigenvalue
        // -sum_j 4 sin^2(pi eps k_j) / eps^2, exactly in exact arithmetic.
        let lat = make_lattice(2, 1.0).unwrap();
        let k = [3.0, -1.0, 2.0];
        let f = trig_field(lat, k, 0.4);
        let lap = discrete_laplacian(&f).unwrap();
        let ev: f64 = k
            .iter()
            .map(|&kj| {
                let s = (PI * lat.eps * kj).sin();
                4.0 * s * s / (lat.eps * lat.eps)
            })
            .sum();
        let fr = f.re().unwrap();
        let lr = lap.re().unwrap();
        for (a, b) in lr.iter().zip(fr) {
            assert!((a + ev * b).abs() < 1e-9 * ev.max(1.0));
        }
    }

    #[test]
    fn laplacian_symbol_matches_mode_table() {
        let lat = make_lattice(1, 2.0).unwrap();
        let f = Field::from_fn(lat, |x| {
            (x[0] * 3.0).sin() * (x[1] + 0.2) + x[2] * x[2] * 0.5 - 0.1
        });
        let lhs = forward_fourier(&discrete_laplacian(&f).unwrap()).unwrap();
        let mut rhs = forward_fourier(&f).unwrap();
        let sym = lat.laplace_symbol();
        for (z, &l) in rhs.cx_mut().unwrap().iter_mut().zip(&sym) {
            *z *= -l;
        }
        let a = lhs.cx().unwrap();
        let b = rhs.cx().unwrap();
        let scale = a.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() < 1e-10 * scale);
        }
    }

    #[test]
    fn summation_by_parts_is_exact() {
        let lat = make_lattice(2, 1.0).unwrap();
        let f = Field::from_fn(lat, |x| (x[0] * 9.0).sin() + x[1] * x[2] * 3.0);
        let g = Field::from_fn(lat, |x| (x[2] * 5.0).cos() - x[0] * 0.7);
        let lhs = duality_product(&discrete_laplacian(&f).unwrap(), &g).unwrap();
        let gf = discrete_gradient(&f).unwrap();
        let gg = discrete_gradient(&g).unwrap();
        let mut rhs = 0.0;
        for j in 0..3 {
            rhs += duality_product(&gf[j], &gg[j]).unwrap();
        }
        assert!(
            (lhs + rhs).abs() < 1e-10 * (1.0 + lhs.abs()),
            "lhs {lhs} rhs {rhs}"
        );
    }

    #[test]
    fn lp_norms_of_constants() {
        let lat = make_lattice(1, 2.0).unwrap();
        let f = Field::constant(lat, -1.5);
        let m3 = lat.torus_volume();
        assert!((lp_norm(&f, 1.0).unwrap() - 1.5 * m3).abs() < 1e-12);
        assert!((lp_norm(&f, 2.0).unwrap() - 1.5 * m3.sqrt()).abs() < 1e-12);
        assert!((lp_norm(&f, 4.0).unwrap() - 1.5 * m3.powf(0.25)).abs() < 1e-12);
        assert!((lp_norm(&f, f64::INFINITY).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn weighted_norm_matches_explicit_product() {
        let lat = make_lattice(1, 2.0).unwrap();
        let f = Field::from_fn(lat, |x| x[0] - 2.0 * x[1] + 0.3);
        let w = crate::lattice::Weight::new(0.5, 3.0).unwrap();
        let rho = crate::field::weight_field(lat, &w, 1.0);
        let prod = f.mul(&rho).unwrap();
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            let a = weighted_lp_norm(&f, &rho, p).unwrap();
            let b = lp_norm(&prod, p).unwrap();
            assert!((a - b).abs() < 1e-12 * (1.0 + b));
        }
    }
}
