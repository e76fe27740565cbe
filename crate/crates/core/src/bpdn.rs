//! Sparsity-constrained basis pursuit denoise:
//! `min ½‖Ax − b‖² + χ(x | kB₀)` with orthonormal rows in `A`.
//!
//! # Random stream
//!
//! An instance is a pure function of `(m, n, k, seed, noise_std)`. The
//! generator is ChaCha8 seeded with `seed` (`SeedableRng::seed_from_u64`)
//! and is consumed in this order:
//!
//! 1. `m·n` standard normals filling a matrix `G` row by row;
//! 2. `k` draws placing the spikes: for `i = 0..k`, `j = uniform(i..n)` and
//!    positions `i` and `j` of `0, 1, …, n−1` are swapped (partial
//!    Fisher–Yates); the spikes are the first `k` positions;
//! 3. `k` booleans, the sign of each spike in placement order (`true` → +1);
//! 4. `m` standard normals, scaled by `noise_std`, added to `A x⋆`.
//!
//! `A` is `Qᵀ` where `Gᵀ = QR` is a Householder QR factorization, so
//! `AAᵀ = I`. Noise is drawn even when `noise_std = 0` so the stream layout
//! does not depend on it.

use std::io::{Read, Write};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, sub, DenseMatrix};
use crate::scalar::Real;
use crate::solvers::{RegularizedProblem, Residual, Smooth};

pub const DEFAULT_NOISE_STD: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct BpdnInstance<T> {
    pub a: DenseMatrix<T>,
    pub b: Vec<T>,
    pub x_star: Vec<T>,
    pub sparsity: usize,
    pub noise_std: T,
    pub seed: u64,
}

/// Instance with the default noise level `0.01` (standard deviation).
pub fn generate<T: Real>(m: usize, n: usize, k: usize, seed: u64) -> Result<BpdnInstance<T>> {
    generate_with_noise(m, n, k, seed, T::c(DEFAULT_NOISE_STD))
}

pub fn generate_with_noise<T: Real>(
    m: usize,
    n: usize,
    k: usize,
    seed: u64,
    noise_std: T,
) -> Result<BpdnInstance<T>> {
    if !(k >= 1 && k <= m && m <= n) {
        return Err(Error::InvalidDimensions(format!(
            "need 1 <= k <= m <= n, got m = {m}, n = {n}, k = {k}"
        )));
    }
    if !(noise_std >= T::zero()) || !noise_std.is_finite() {
        return Err(Error::InvalidConfig("noise_std must be nonnegative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let gaussian: Vec<f64> = (0..m * n).map(|_| rng.sample(StandardNormal)).collect();
    // Gᵀ is n×m; nalgebra is column-major, so G's row-major data is Gᵀ's
    // column-major data.
    let gt = DMatrix::from_column_slice(n, m, &gaussian);
    let q = gt.qr().q();
    let mut a_data = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            a_data.push(T::c(q[(j, i)]));
        }
    }
    let a = DenseMatrix::from_row_major(m, n, a_data)?;

    let mut positions: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        positions.swap(i, j);
    }
    let mut x_star = vec![T::zero(); n];
    for &p in &positions[..k] {
        x_star[p] = if rng.random::<bool>() {
            T::one()
        } else {
            -T::one()
        };
    }

    let mut b = a.mul_vec(&x_star);
    for bi in b.iter_mut() {
        let e: f64 = rng.sample(StandardNormal);
        *bi = *bi + noise_std * T::c(e);
    }

    Ok(BpdnInstance {
        a,
        b,
        x_star,
        sparsity: k,
        noise_std,
        seed,
    })
}

impl<T: Real> BpdnInstance<T> {
    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// `½‖Ax − b‖² + χ(x | kB₀)`.
    pub fn as_problem(&self) -> RegularizedProblem<BpdnObjective<'_, T>> {
        RegularizedProblem {
            smooth: BpdnObjective { inst: self },
            sparsity: self.sparsity,
        }
    }

    /// `‖solution − x⋆‖ / ‖x⋆‖`
    pub fn relative_error(&self, solution: &[T]) -> Result<T> {
        if solution.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                found: solution.len(),
            });
        }
        let denom = norm2(&self.x_star);
        if denom.is_zero() {
            return Err(Error::InvalidDimensions("planted solution is zero".into()));
        }
        Ok(norm2(&sub(solution, &self.x_star)) / denom)
    }

    /// Writes the instance as CSV: a metadata header and row, then one
    /// labelled line per row of `A`, then `b` and `x_star`. Values use 17
    /// significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "m,n,k,seed,noise_std")?;
        writeln!(
            out,
            "{},{},{},{},{:.16e}",
            self.rows(),
            self.cols(),
            self.sparsity,
            self.seed,
            self.noise_std
        )?;
        let line = |label: &str, values: &[T]| {
            let mut s = String::from(label);
            for v in values {
                s.push_str(&format!(",{v:.16e}"));
            }
            s
        };
        for i in 0..self.rows() {
            writeln!(out, "{}", line("A", self.a.row(i)))?;
        }
        writeln!(out, "{}", line("b", &self.b))?;
        writeln!(out, "{}", line("x_star", &self.x_star))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(input);
        let mut records = reader.records();
        let meta = records
            .next()
            .ok_or_else(|| Error::Format("missing metadata row".into()))??;
        let field = |i: usize| -> Result<&str> {
            meta.get(i)
                .ok_or_else(|| Error::Format(format!("metadata field {i} missing")))
        };
        let parse_usize = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| Error::Format(format!("bad integer {s:?}: {e}")))
        };
        let m = parse_usize(field(0)?)?;
        let n = parse_usize(field(1)?)?;
        let k = parse_usize(field(2)?)?;
        let seed = field(3)?
            .trim()
            .parse::<u64>()
            .map_err(|e| Error::Format(format!("bad seed: {e}")))?;
        let noise_std = parse_real::<T>(field(4)?)?;

        let mut a_data = Vec::with_capacity(m * n);
        let mut b = None;
        let mut x_star = None;
        for rec in records {
            let rec = rec?;
            let label = rec.get(0).unwrap_or_default().to_string();
            let values = rec
                .iter()
                .skip(1)
                .map(parse_real::<T>)
                .collect::<Result<Vec<T>>>()?;
            match label.as_str() {
                "A" if values.len() == n => a_data.extend(values),
                "b" if values.len() == m => b = Some(values),
                "x_star" if values.len() == n => x_star = Some(values),
                other => {
                    return Err(Error::Format(format!(
                        "unexpected line {other:?} with {} values",
                        values.len()
                    )))
                }
            }
        }
        let a = DenseMatrix::from_row_major(m, n, a_data)
            .map_err(|_| Error::Format("wrong number of rows in A".into()))?;
        Ok(Self {
            a,
            b: b.ok_or_else(|| Error::Format("missing b".into()))?,
            x_star: x_star.ok_or_else(|| Error::Format("missing x_star".into()))?,
            sparsity: k,
            noise_std,
            seed,
        })
    }
}

fn parse_real<T: Real>(s: &str) -> Result<T> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|e| Error::Format(format!("bad number {s:?}: {e}")))?;
    Ok(T::c(v))
}

/// `F(x) = Ax − b` with `f = ½‖F‖²`.
#[derive(Debug, Clone, Copy)]
pub struct BpdnObjective<'a, T> {
    inst: &'a BpdnInstance<T>,
}

impl<T: Real> Smooth<T> for BpdnObjective<'_, T> {
    fn dim(&self) -> usize {
        self.inst.cols()
    }

    fn value(&self, x: &[T]) -> T {
        let r = self.residual(x);
        T::c(0.5) * dot(&r, &r)
    }

    fn gradient(&self, x: &[T]) -> Vec<T> {
        let r = self.residual(x);
        self.inst.a.mul_transpose_vec(&r)
    }
}

impl<T: Real> Residual<T> for BpdnObjective<'_, T> {
    fn residual_dim(&self) -> usize {
        self.inst.rows()
    }

    fn residual(&self, x: &[T]) -> Vec<T> {
        sub(&self.inst.a.mul_vec(x), &self.inst.b)
    }

    fn jacobian_product(&self, _x: &[T], v: &[T]) -> Vec<T> {
        self.inst.a.mul_vec(v)
    }

    fn jacobian_transpose_product(&self, _x: &[T], u: &[T]) -> Vec<T> {
        self.inst.a.mul_transpose_vec(u)
    }
}
