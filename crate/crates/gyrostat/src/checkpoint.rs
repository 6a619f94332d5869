//! Binary checkpoints, little-endian:
//!
//! ```text
//! "LGY1"  u32 version  u32 nx ny nz
//! f64 Lx Ly Lz  f64 nu  f64 A B C  f64 omega0[3]  f64 t  u64 step
//! f64 u[..] v[..] w[..]   (face arrays, wall faces included)
//! f64 omega[3] omega_prev[3] M[3]
//! ```
//!
//! The mode is not stored; it comes from the scenario that resumes the run.

use std::path::Path;

use gyrostat_core::dynamics::{Mode, State};
use gyrostat_core::fields::{FaceField, Grid};
use gyrostat_core::{Cavity, SystemSetup, Vec3};

use crate::error::{ShellError, ShellResult};

pub const MAGIC: &[u8; 4] = b"LGY1";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub grid: [usize; 3],
    pub dims: [f64; 3],
    pub nu: f64,
    pub moments: [f64; 3],
    pub omega0: [f64; 3],
    pub t: f64,
    pub step: u64,
    pub faces: [Vec<f64>; 3],
    pub omega: [f64; 3],
    pub omega_prev: [f64; 3],
    pub m: [f64; 3],
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], String> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(|| {
            format!("truncated at byte {} (need {n} more, file has {})", self.pos, self.buf.len())
        })?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u32(&mut self) -> Result<u32, String> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64, String> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64, String> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn vec3(&mut self) -> Result<[f64; 3], String> {
        Ok([self.f64()?, self.f64()?, self.f64()?])
    }
}

fn put_f64s(out: &mut Vec<u8>, xs: &[f64]) {
    for x in xs {
        out.extend_from_slice(&x.to_le_bytes());
    }
}

impl Checkpoint {
    pub fn from_state(s: &State, setup: &SystemSetup) -> Self {
        Self {
            grid: setup.cavity.grid(),
            dims: setup.cavity.dims(),
            nu: setup.nu,
            moments: setup.inertia.moments(),
            omega0: setup.omega0.into(),
            t: s.t,
            step: s.step,
            faces: s.v.comp.clone(),
            omega: s.omega.into(),
            omega_prev: s.omega_prev.into(),
            m: s.m.into(),
        }
    }

    pub fn to_state(&self, mode: Mode) -> State {
        let cavity = Cavity::new(self.dims, self.grid).expect("checkpoint cavity validated on read");
        let v = FaceField { grid: Grid::new(&cavity), comp: self.faces.clone() };
        State {
            v,
            omega: Vec3::from(self.omega),
            omega_prev: Vec3::from(self.omega_prev),
            m: Vec3::from(self.m),
            t: self.t,
            step: self.step,
            mode,
        }
    }

    /// Compare the stored setup fingerprint bitwise with `setup`.
    pub fn check_setup(&self, setup: &SystemSetup) -> Result<(), String> {
        let bits = |x: &[f64]| x.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        let mut diffs = Vec::new();
        if self.grid != setup.cavity.grid() {
            diffs.push(format!("grid {:?} != {:?}", self.grid, setup.cavity.grid()));
        }
        if bits(&self.dims) != bits(&setup.cavity.dims()) {
            diffs.push(format!("dims {:?} != {:?}", self.dims, setup.cavity.dims()));
        }
        if self.nu.to_bits() != setup.nu.to_bits() {
            diffs.push(format!("nu {} != {}", self.nu, setup.nu));
        }
        if bits(&self.moments) != bits(&setup.inertia.moments()) {
            diffs.push(format!("moments {:?} != {:?}", self.moments, setup.inertia.moments()));
        }
        if bits(&self.omega0) != bits(setup.omega0.as_slice()) {
            diffs.push(format!("omega0 {:?} != {:?}", self.omega0, setup.omega0.as_slice()));
        }
        if diffs.is_empty() {
            Ok(())
        } else {
            Err(format!("checkpoint does not match the scenario: {}", diffs.join("; ")))
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let n_faces: usize = self.faces.iter().map(Vec::len).sum();
        let mut out = Vec::with_capacity(4 + 16 + 8 * (15 + n_faces + 9));
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        for n in self.grid {
            out.extend_from_slice(&(n as u32).to_le_bytes());
        }
        put_f64s(&mut out, &self.dims);
        put_f64s(&mut out, &[self.nu]);
        put_f64s(&mut out, &self.moments);
        put_f64s(&mut out, &self.omega0);
        put_f64s(&mut out, &[self.t]);
        out.extend_from_slice(&self.step.to_le_bytes());
        for f in &self.faces {
            put_f64s(&mut out, f);
        }
        put_f64s(&mut out, &self.omega);
        put_f64s(&mut out, &self.omega_prev);
        put_f64s(&mut out, &self.m);
        out
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self, String> {
        let mut r = Reader { buf, pos: 0 };
        let magic = r.take(4)?;
        if magic != MAGIC {
            return Err(format!("bad magic {magic:?}, expected {MAGIC:?}"));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(format!("unsupported version {version}, expected {VERSION}"));
        }
        let grid = [r.u32()? as usize, r.u32()? as usize, r.u32()? as usize];
        let dims = r.vec3()?;
        let cavity = Cavity::new(dims, grid).map_err(|e| e.to_string())?;
        let g = Grid::new(&cavity);
        let nu = r.f64()?;
        let moments = r.vec3()?;
        let omega0 = r.vec3()?;
        let t = r.f64()?;
        let step = r.u64()?;
        let mut faces: [Vec<f64>; 3] = Default::default();
        for (c, face) in faces.iter_mut().enumerate() {
            let bytes = r.take(8 * g.face_len(c))?;
            *face = bytes.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())).collect();
        }
        let omega = r.vec3()?;
        let omega_prev = r.vec3()?;
        let m = r.vec3()?;
        if r.pos != buf.len() {
            return Err(format!("{} trailing bytes", buf.len() - r.pos));
        }
        Ok(Self { grid, dims, nu, moments, omega0, t, step, faces, omega, omega_prev, m })
    }

    pub fn write(&self, path: &Path) -> ShellResult<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| ShellError::io(path, e))
    }

    pub fn read(path: &Path) -> ShellResult<Self> {
        let buf = std::fs::read(path).map_err(|e| ShellError::io(path, e))?;
        Self::from_bytes(&buf).map_err(|message| ShellError::Format { path: path.to_path_buf(), message })
    }

    /// Human-readable header summary.
    pub fn describe(&self) -> String {
        format!(
            "format LGY1 v{VERSION}\ngrid {}x{}x{}\ndims {:?}\nnu {}\nmoments {:?}\nomega0 {:?}\nt {}\nstep {}\nomega {:?}\nomega_prev {:?}\nM {:?}\n|M| {}\n",
            self.grid[0],
            self.grid[1],
            self.grid[2],
            self.dims,
            self.nu,
            self.moments,
            self.omega0,
            self.t,
            self.step,
            self.omega,
            self.omega_prev,
            self.m,
            Vec3::from(self.m).norm(),
        )
    }
}
