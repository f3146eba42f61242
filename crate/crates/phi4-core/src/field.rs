use crate::error::{Phi4Error, Result};
use crate::lattice::{Lattice, Weight};
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;

/// Which representation a `Field` currently holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Real values on lattice sites.
    Physical,
    /// Complex mode coefficients on the full (non-Hermitian-compressed) grid.
    Fourier,
}

impl Domain {
    fn name(self) -> &'static str {
        match self {
            Domain::Physical => "physical",
            Domain::Fourier => "fourier",
        }
    }
}

#[derive(Clone, Debug)]
enum Payload {
    Real(Vec<f64>),
    Cx(Vec<Complex64>),
}

/// A scalar field on one lattice, either as site values (physical domain,
/// real) or as mode coefficients (fourier domain, complex, full grid).
#[derive(Clone, Debug)]
pub struct Field {
    pub lat: Lattice,
    data: Payload,
}

/// Bail out unless two fields share a lattice.
pub fn expect_same_lattice(a: &Field, b: &Field) -> Result<()> {
    if a.lat != b.lat {
        return Err(Phi4Error::LatticeMismatch);
    }
    Ok(())
}

impl Field {
    pub fn zeros(lat: Lattice) -> Field {
        Field {
            lat,
            data: Payload::Real(vec![0.0; lat.volume()]),
        }
    }

    pub fn zeros_fourier(lat: Lattice) -> Field {
        Field {
            lat,
            data: Payload::Cx(vec![Complex64::new(0.0, 0.0); lat.volume()]),
        }
    }

    pub fn constant(lat: Lattice, c: f64) -> Field {
        Field {
            lat,
            data: Payload::Real(vec![c; lat.volume()]),
        }
    }

    pub fn from_values(lat: Lattice, values: Vec<f64>) -> Result<Field> {
        if values.len() != lat.volume() {
            return Err(Phi4Error::Lattice(format!(
                "value buffer has {} entries, lattice has {} sites",
                values.len(),
                lat.volume()
            )));
        }
        Ok(Field {
            lat,
            data: Payload::Real(values),
        })
    }

    pub fn from_modes(lat: Lattice, values: Vec<Complex64>) -> Result<Field> {
        if values.len() != lat.volume() {
            return Err(Phi4Error::Lattice(format!(
                "mode buffer has {} entries, lattice has {} modes",
                values.len(),
                lat.volume()
            )));
        }
        Ok(Field {
            lat,
            data: Payload::Cx(values),
        })
    }

    /// Evaluate a function of the centered site coordinates.
    pub fn from_fn(lat: Lattice, mut f: impl FnMut([f64; 3]) -> f64) -> Field {
        let n = lat.n_side;
        let mut v = Vec::with_capacity(lat.volume());
        for iz in 0..n {
            let z = lat.coord(iz);
            for iy in 0..n {
                let y = lat.coord(iy);
                for ix in 0..n {
                    v.push(f([lat.coord(ix), y, z]));
                }
            }
        }
        Field {
            lat,
            data: Payload::Real(v),
        }
    }

    #[inline]
    pub fn domain(&self) -> Domain {
        match self.data {
            Payload::Real(_) => Domain::Physical,
            Payload::Cx(_) => Domain::Fourier,
        }
    }

    pub fn re(&self) -> Result<&[f64]> {
        match &self.data {
            Payload::Real(v) => Ok(v),
            Payload::Cx(_) => Err(Phi4Error::Domain {
                expected: Domain::Physical.name(),
                got: Domain::Fourier.name(),
            }),
        }
    }

    pub fn re_mut(&mut self) -> Result<&mut [f64]> {
        match &mut self.data {
            Payload::Real(v) => Ok(v),
            Payload::Cx(_) => Err(Phi4Error::Domain {
                expected: Domain::Physical.name(),
                got: Domain::Fourier.name(),
            }),
        }
    }

    pub fn cx(&self) -> Result<&[Complex64]> {
        match &self.data {
            Payload::Cx(v) => Ok(v),
            Payload::Real(_) => Err(Phi4Error::Domain {
                expected: Domain::Fourier.name(),
                got: Domain::Physical.name(),
            }),
        }
    }

    pub fn cx_mut(&mut self) -> Result<&mut [Complex64]> {
        match &mut self.data {
            Payload::Cx(v) => Ok(v),
            Payload::Real(_) => Err(Phi4Error::Domain {
                expected: Domain::Fourier.name(),
                got: Domain::Physical.name(),
            }),
        }
    }

    /// In-place `self += c * other` (physical domain).
    pub fn axpy(&mut self, c: f64, other: &Field) -> Result<()> {
        expect_same_lattice(self, other)?;
        let o = other.re()?;
        for (a, b) in self.re_mut()?.iter_mut().zip(o) {
            *a += c * b;
        }
        Ok(())
    }

    /// In-place `self += c * (a .* b)` (physical domain).
    pub fn add_product(&mut self, c: f64, a: &Field, b: &Field) -> Result<()> {
        expect_same_lattice(self, a)?;
        expect_same_lattice(self, b)?;
        let av = a.re()?;
        let bv = b.re()?;
        for ((s, x), y) in self.re_mut()?.iter_mut().zip(av).zip(bv) {
            *s += c * x * y;
        }
        Ok(())
    }

    pub fn scale(&mut self, c: f64) {
        match &mut self.data {
            Payload::Real(v) => v.iter_mut().for_each(|x| *x *= c),
            Payload::Cx(v) => v.iter_mut().for_each(|x| *x *= c),
        }
    }

    /// Pointwise product of two physical fields.
    pub fn mul(&self, other: &Field) -> Result<Field> {
        expect_same_lattice(self, other)?;
        let a = self.re()?;
        let b = other.re()?;
        let v = a.iter().zip(b).map(|(x, y)| x * y).collect();
        Ok(Field {
            lat: self.lat,
            data: Payload::Real(v),
        })
    }

    /// `self - other` as a new physical field.
    pub fn sub(&self, other: &Field) -> Result<Field> {
        expect_same_lattice(self, other)?;
        let a = self.re()?;
        let b = other.re()?;
        let v = a.iter().zip(b).map(|(x, y)| x - y).collect();
        Ok(Field {
            lat: self.lat,
            data: Payload::Real(v),
        })
    }

    /// `self + other` as a new physical field.
    pub fn add(&self, other: &Field) -> Result<Field> {
        expect_same_lattice(self, other)?;
        let a = self.re()?;
        let b = other.re()?;
        let v = a.iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(Field {
            lat: self.lat,
            data: Payload::Real(v),
        })
    }

    /// Max absolute site value (physical) or coefficient modulus (fourier).
    pub fn linf(&self) -> f64 {
        match &self.data {
            Payload::Real(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            Payload::Cx(v) => v.iter().fold(0.0, |m, x| m.max(x.norm())),
        }
    }

    /// True if any entry is NaN or infinite.
    pub fn has_non_finite(&self) -> bool {
        match &self.data {
            Payload::Real(v) => v.iter().any(|x| !x.is_finite()),
            Payload::Cx(v) => v.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()),
        }
    }
}

/// The weight evaluated on the lattice: `rho(x)^power` at the centered
/// coordinates of every site.
pub fn weight_field(lat: Lattice, w: &Weight, power: f64) -> Field {
    Field::from_fn(lat, |x| w.at(x, power))
}

const MAGIC: &[u8; 8] = b"PHI4FLD1";
const HEADER_LEN: usize = 32;

impl Field {
    /// Serialize to the snapshot format: a 32-byte header (magic, u32 level,
    /// f64 side, u8 domain tag, zero padding) followed by little-endian f64
    /// payload — site values for physical fields, interleaved (re, im) pairs
    /// for fourier fields; x index fastest.
    pub fn write_snapshot(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::with_capacity(HEADER_LEN + 16 * self.lat.volume());
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&self.lat.level.to_le_bytes());
        buf.extend_from_slice(&self.lat.side.to_le_bytes());
        buf.push(match self.domain() {
            Domain::Physical => 0u8,
            Domain::Fourier => 1u8,
        });
        buf.resize(HEADER_LEN, 0u8);
        match &self.data {
            Payload::Real(v) => {
                for x in v {
                    buf.extend_from_slice(&x.to_le_bytes());
                }
            }
            Payload::Cx(v) => {
                for x in v {
                    buf.extend_from_slice(&x.re.to_le_bytes());
                    buf.extend_from_slice(&x.im.to_le_bytes());
                }
            }
        }
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        let mut f = std::fs::File::create(path)?;
        f.write_all(&buf)?;
        Ok(())
    }

    pub fn read_snapshot(path: &Path) -> Result<Field> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
            return Err(Phi4Error::Snapshot(format!(
                "{} is not a field snapshot",
                path.display()
            )));
        }
        let level = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        let side = f64::from_le_bytes(bytes[12..20].try_into().unwrap());
        let domain = bytes[20];
        let lat = crate::lattice::make_lattice(level, side)?;
        let payload = &bytes[HEADER_LEN..];
        let vol = lat.volume();
        match domain {
            0 => {
                if payload.len() != 8 * vol {
                    return Err(Phi4Error::Snapshot(format!(
                        "payload has {} bytes, expected {}",
                        payload.len(),
                        8 * vol
                    )));
                }
                let v = payload
                    .chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                    .collect();
                Field::from_values(lat, v)
            }
            1 => {
                if payload.len() != 16 * vol {
                    return Err(Phi4Error::Snapshot(format!(
                        "payload has {} bytes, expected {}",
                        payload.len(),
                        16 * vol
                    )));
                }
                let v = payload
                    .chunks_exact(16)
                    .map(|c| {
                        Complex64::new(
                            f64::from_le_bytes(c[..8].try_into().unwrap()),
                            f64::from_le_bytes(c[8..].try_into().unwrap()),
                        )
                    })
                    .collect();
                Field::from_modes(lat, v)
            }
            d => Err(Phi4Error::Snapshot(format!("unknown domain tag {d}"))),
        }
    }
}
