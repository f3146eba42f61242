use crate::calculus::{discrete_laplacian, duality_product};
use crate::error::Result;
use crate::field::{expect_same_lattice, Field};
use crate::heat::{expect_same_grid, l_inverse, q_inverse, Traj};
use crate::partition::{lp_all, DyadicPartition};

/// `f prec g` from precomputed block lists: sum over i < j-1 of
/// block_i f * block_j g, via running prefix sums.
pub fn prec_blocks(bf: &[Field], bg: &[Field]) -> Result<Field> {
    let lat = bf[0].lat;
    let mut out = Field::zeros(lat);
    let mut prefix = Field::zeros(lat);
    for cj in 0..bg.len() {
        if cj >= 2 {
            prefix.axpy(1.0, &bf[cj - 2])?;
            out.add_product(1.0, &prefix, &bg[cj])?;
        }
    }
    Ok(out)
}

/// `f resonant g` from precomputed block lists: sum over |i-j| <= 1.
pub fn resonant_blocks(bf: &[Field], bg: &[Field]) -> Result<Field> {
    let lat = bf[0].lat;
    let mut out = Field::zeros(lat);
    for cj in 0..bg.len() {
        let lo = cj.saturating_sub(1);
        let hi = (cj + 1).min(bf.len() - 1);
        for ci in lo..=hi {
            out.add_product(1.0, &bf[ci], &bg[cj])?;
        }
    }
    Ok(out)
}

/// Paraproduct `f prec g = sum_(i < j-1) block_i f block_j g`
/// (f paired with the lower blocks).
pub fn paraproduct_prec(part: &DyadicPartition, f: &Field, g: &Field) -> Result<Field> {
    expect_same_lattice(f, g)?;
    prec_blocks(&lp_all(part, f)?, &lp_all(part, g)?)
}

/// Resonant product `f resonant g = sum_(|i-j| <= 1) block_i f block_j g`.
pub fn resonant(part: &DyadicPartition, f: &Field, g: &Field) -> Result<Field> {
    expect_same_lattice(f, g)?;
    resonant_blocks(&lp_all(part, f)?, &lp_all(part, g)?)
}

/// Paraproduct `f succ g = g prec f`.
pub fn paraproduct_succ(part: &DyadicPartition, f: &Field, g: &Field) -> Result<Field> {
    paraproduct_prec(part, g, f)
}

/// Resonant commutator `C(f, g, h) = h resonant (f prec g) - f (h resonant g)`.
pub fn commutator_c(part: &DyadicPartition, f: &Field, g: &Field, h: &Field) -> Result<Field> {
    let first = resonant(part, h, &paraproduct_prec(part, f, g)?)?;
    let second = f.mul(&resonant(part, h, g)?)?;
    first.sub(&second)
}

/// Duality defect `<rho f, g resonant h> - <rho (f prec g), h>`.
pub fn duality_defect(
    part: &DyadicPartition,
    rho: &Field,
    f: &Field,
    g: &Field,
    h: &Field,
) -> Result<f64> {
    let lhs = duality_product(&rho.mul(f)?, &resonant(part, g, h)?)?;
    let rhs = duality_product(&rho.mul(&paraproduct_prec(part, f, g)?)?, h)?;
    Ok(lhs - rhs)
}

/// Elliptic commutator
/// `h resonant Qinv(f prec g) - f (h resonant Qinv g)`.
pub fn commutator_tilde(
    part: &DyadicPartition,
    f: &Field,
    g: &Field,
    h: &Field,
    m2: f64,
) -> Result<Field> {
    let first = resonant(part, h, &q_inverse(&paraproduct_prec(part, f, g)?, m2)?)?;
    let second = f.mul(&resonant(part, h, &q_inverse(g, m2)?)?)?;
    first.sub(&second)
}

/// Gradient paraproduct
/// `grad f prec grad g := (Lap(f prec g) - Lap f prec g - f prec Lap g) / 2`.
pub fn gradient_prec(part: &DyadicPartition, f: &Field, g: &Field) -> Result<Field> {
    let mut out = discrete_laplacian(&paraproduct_prec(part, f, g)?)?;
    out.axpy(-1.0, &paraproduct_prec(part, &discrete_laplacian(f)?, g)?)?;
    out.axpy(-1.0, &paraproduct_prec(part, f, &discrete_laplacian(g)?)?)?;
    out.scale(0.5);
    Ok(out)
}

/// Triangular unit-mass kernel of the time mollifier: 2(1-s) on [0, 1].
fn kernel_q(s: f64) -> f64 {
    if (0.0..1.0).contains(&s) {
        2.0 * (1.0 - s)
    } else {
        0.0
    }
}

const KERNEL_CELLS: usize = 32;

/// Evaluate a trajectory at time t by linear interpolation, clamping t to
/// the grid span.
pub fn eval_traj(traj: &Traj, t: f64) -> Result<Field> {
    let t0 = traj.times[0];
    let t1 = *traj.times.last().unwrap();
    let tc = t.clamp(t0, t1);
    let i = traj.floor_index(tc);
    if i + 1 >= traj.len() {
        return Ok(traj.fields[traj.len() - 1].clone());
    }
    let (a, b) = (traj.times[i], traj.times[i + 1]);
    let w = (tc - a) / (b - a);
    let mut out = traj.fields[i].clone();
    out.scale(1.0 - w);
    out.axpy(w, &traj.fields[i + 1])?;
    Ok(out)
}

/// Time mollification at block scale i: convolve the trajectory with the
/// kernel 2^(2i) Q(2^(2i)(t - s)), time arguments clamped to the grid span.
/// Midpoint quadrature over the kernel support; the weights sum to 1 exactly
/// for the triangular kernel, so constants in time are preserved.
fn time_mollify(traj: &Traj, i: i32, t: f64) -> Result<Field> {
    let width = 0.25f64.powi(i); // 2^(-2i)
    let lat = traj.lat();
    let mut out = Field::zeros(lat);
    for q in 0..KERNEL_CELLS {
        let s = (q as f64 + 0.5) / KERNEL_CELLS as f64;
        let w = kernel_q(s) / KERNEL_CELLS as f64;
        out.axpy(w, &eval_traj(traj, t - s * width)?)?;
    }
    Ok(out)
}

/// Time-mollified paraproduct: like `prec`, but each low block of f is first
/// averaged over the recent past at its own parabolic time scale.
pub fn mollified_prec(
    part: &DyadicPartition,
    f_traj: &Traj,
    g_traj: &Traj,
) -> Result<Traj> {
    expect_same_grid(f_traj, g_traj)?;
    let mut fields = Vec::with_capacity(g_traj.len());
    for (ti, t) in g_traj.times.iter().enumerate() {
        let bg = lp_all(part, &g_traj.fields[ti])?;
        let mut out = Field::zeros(g_traj.lat());
        for cj in 2..bg.len() {
            let mut low = Field::zeros(g_traj.lat());
            for ci in 0..=cj - 2 {
                let i = ci as i32 - 1;
                let mollified = time_mollify(f_traj, i, *t)?;
                let blocks = lp_all(part, &mollified)?;
                low.axpy(1.0, &blocks[ci])?;
            }
            out.add_product(1.0, &low, &bg[cj])?;
        }
        fields.push(out);
    }
    Traj::new(g_traj.times.clone(), fields)
}

/// Parabolic commutator on trajectories:
/// `h resonant Linv(f prec g) - f (h resonant Linv g)` slice by slice, with
/// the parabolic inverse started from zero at the grid origin.
pub fn commutator_bar(
    part: &DyadicPartition,
    f_traj: &Traj,
    g_traj: &Traj,
    h_traj: &Traj,
    m2: f64,
) -> Result<Traj> {
    expect_same_grid(f_traj, g_traj)?;
    expect_same_grid(f_traj, h_traj)?;
    let lat = f_traj.lat();
    let zero = Field::zeros(lat);
    let mut prec_fields = Vec::with_capacity(f_traj.len());
    for i in 0..f_traj.len() {
        prec_fields.push(paraproduct_prec(
            part,
            &f_traj.fields[i],
            &g_traj.fields[i],
        )?);
    }
    let prec_traj = Traj::new(f_traj.times.clone(), prec_fields)?;
    let l_prec = l_inverse(&prec_traj, &zero, m2)?;
    let l_g = l_inverse(g_traj, &zero, m2)?;
    let mut out = Vec::with_capacity(f_traj.len());
    for i in 0..f_traj.len() {
        let first = resonant(part, &h_traj.fields[i], &l_prec.fields[i])?;
        let second = f_traj.fields[i].mul(&resonant(part, &h_traj.fields[i], &l_g.fields[i])?)?;
        out.push(first.sub(&second)?);
    }
    Traj::new(f_traj.times.clone(), out)
}
