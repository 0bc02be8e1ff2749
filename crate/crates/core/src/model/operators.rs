//! Dense operators on a truncated Fock basis.
//!
//! Truncation makes products of ladder operators wrong in the last rows and
//! columns. Each [`ComplexMatrix`] carries the size of its leading block that
//! is still exact, and checks compare only that block.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::params::PhysicalParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<Complex64>,
    trusted: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    B,
    BDag,
    BPrime,
    BPrimeDag,
}

impl ComplexMatrix {
    pub fn from_dmatrix(data: DMatrix<Complex64>, trusted: usize) -> Result<Self> {
        if !data.is_square() {
            return Err(Error::domain(
                "ComplexMatrix",
                format!("matrix is {}x{}, not square", data.nrows(), data.ncols()),
            ));
        }
        let trusted = trusted.min(data.nrows());
        Ok(Self { data, trusted })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
            trusted: dim,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DMatrix::zeros(dim, dim),
            trusted: dim,
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut data = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            data[(i, i)] = Complex64::new(d, 0.0);
        }
        Self { data, trusted: n }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Size of the leading block whose entries are exact.
    pub fn trusted(&self) -> usize {
        self.trusted
    }

    pub fn with_trusted(mut self, trusted: usize) -> Self {
        self.trusted = trusted.min(self.dim());
        self
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
            trusted: self.trusted,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            data: &self.data * s,
            trusted: self.trusted,
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// [A, B] = AB − BA.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(&(self * other) - &(other * self))
    }

    /// [A, B] with every entry summed in doubled precision (FMA two-products and
    /// compensated summation), so the only remaining error is one final rounding.
    pub fn commutator_compensated(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim();
        let (a, b) = (&self.data, &other.data);
        let mut out = DMatrix::zeros(n, n);
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for i in 0..n {
            for j in 0..n {
                re.reset();
                im.reset();
                for k in 0..n {
                    for (x, y, sign) in [(a[(i, k)], b[(k, j)], 1.0), (b[(i, k)], a[(k, j)], -1.0)] {
                        if x == Complex64::default() || y == Complex64::default() {
                            continue;
                        }
                        re.add_product(sign * x.re, y.re);
                        re.add_product(-sign * x.im, y.im);
                        im.add_product(sign * x.re, y.im);
                        im.add_product(sign * x.im, y.re);
                    }
                }
                out[(i, j)] = Complex64::new(re.value(), im.value());
            }
        }
        Ok(Self {
            data: out,
            trusted: self.trusted.min(other.trusted),
        })
    }

    /// Kronecker product A ⊗ B. A block survives only where both factors are trusted,
    /// so the advertised block is the product of the trusted sizes when the second
    /// factor is fully trusted and otherwise zero.
    pub fn kron(&self, other: &Self) -> Self {
        let trusted = if other.trusted == other.dim() {
            self.trusted * other.dim()
        } else {
            0
        };
        Self {
            data: self.data.kronecker(&other.data),
            trusted,
        }
    }

    /// Largest |A_ij − s·δ_ij| over the trusted block.
    pub fn max_dev_from_scaled_identity(&self, s: Complex64) -> f64 {
        let t = self.trusted;
        let mut worst = 0.0f64;
        for i in 0..t {
            for j in 0..t {
                let target = if i == j { s } else { Complex64::new(0.0, 0.0) };
                worst = worst.max((self.data[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// Largest entry modulus over the whole matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |a, z| a.max(z.norm()))
    }

    /// Largest |A_ij − B_ij| over the first `block` rows and columns.
    pub fn max_dev_on_block(&self, other: &Self, block: usize) -> Result<f64> {
        self.check_same_dim(other)?;
        let b = block.min(self.dim());
        let mut worst = 0.0f64;
        for i in 0..b {
            for j in 0..b {
                worst = worst.max((self.data[(i, j)] - other.data[(i, j)]).norm());
            }
        }
        Ok(worst)
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Incompatible(format!(
                "operator dimensions differ: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on mismatched dimensions, like the underlying matrix product.
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data * &rhs.data,
            trusted: self.trusted.min(rhs.trusted),
        }
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data + &rhs.data,
            trusted: self.trusted.min(rhs.trusted),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data - &rhs.data,
            trusted: self.trusted.min(rhs.trusted),
        }
    }
}

fn check_cutoff(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("ladder_matrix", format!("cutoff N = {n} must be >= 2")));
    }
    Ok(())
}

#[derive(Debug, Default)]
struct CompensatedSum {
    sum: f64,
    err: f64,
}

impl CompensatedSum {
    fn reset(&mut self) {
        *self = Self::default();
    }

    fn add(&mut self, x: f64) {
        let s = self.sum + x;
        let bp = s - self.sum;
        self.err += (self.sum - (s - bp)) + (x - bp);
        self.sum = s;
    }

    fn add_product(&mut self, x: f64, y: f64) {
        let p = x * y;
        self.err += x.mul_add(y, -p);
        self.add(p);
    }

    fn value(&self) -> f64 {
        self.sum + self.err
    }
}

/// Ladder operators on span{|0⟩, …, |N−1⟩}. ⟨n−1|b′|n⟩ = √n and b = √(2mħω_c)·b′.
///
/// A single ladder operator is exact on its stored entries; the first product
/// with it loses the last index, which the advertised block of N−1 reflects.
pub fn ladder_matrix(kind: LadderKind, n: usize, p: &PhysicalParams) -> Result<ComplexMatrix> {
    check_cutoff(n)?;
    // b carries √(2mħω_c·k) as one rounding rather than √(2mħω_c)·√k.
    let s2 = match kind {
        LadderKind::BPrime | LadderKind::BPrimeDag => 1.0,
        LadderKind::B | LadderKind::BDag => p.ladder_scale_sq(),
    };
    let mut data = DMatrix::zeros(n, n);
    for k in 1..n {
        data[(k - 1, k)] = Complex64::new((s2 * k as f64).sqrt(), 0.0);
    }
    let lowering = ComplexMatrix { data, trusted: n - 1 };
    Ok(match kind {
        LadderKind::BPrime | LadderKind::B => lowering,
        LadderKind::BPrimeDag | LadderKind::BDag => lowering.adjoint(),
    })
}

/// H_osc = diag(κ(n + ½)), built exactly.
pub fn osc_hamiltonian_matrix(n: usize, p: &PhysicalParams) -> Result<ComplexMatrix> {
    check_cutoff(n)?;
    let diag: Vec<f64> = (0..n).map(|k| p.kappa * (k as f64 + 0.5)).collect();
    Ok(ComplexMatrix::from_real_diagonal(&diag))
}

/// (1/4m)(b†b + bb†), which matches H_osc except in the last diagonal entry.
pub fn osc_hamiltonian_ladder_form(n: usize, p: &PhysicalParams) -> Result<ComplexMatrix> {
    let b = ladder_matrix(LadderKind::B, n, p)?;
    let bd = ladder_matrix(LadderKind::BDag, n, p)?;
    let sum = &(&bd * &b) + &(&b * &bd);
    Ok(sum.scale_real(1.0 / (4.0 * p.m)).with_trusted(n - 1))
}

/// Dimensionless quadratures Q = (b′† + b′)/√2 and P = i(b′† − b′)/√2, so [Q, P] = i.
pub fn quadratures(n: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    quadratures_scaled(n, 1.0)
}

/// Quadratures carrying √ħ, so that [Q, P] = iħ on the interior block.
pub fn canonical_pair(n: usize, p: &PhysicalParams) -> Result<(ComplexMatrix, ComplexMatrix)> {
    quadratures_scaled(n, p.hbar)
}

/// Off-diagonal entries √(s·k/2), each a single rounding.
fn quadratures_scaled(n: usize, s: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_cutoff(n)?;
    let mut q = DMatrix::zeros(n, n);
    let mut pm = DMatrix::zeros(n, n);
    for k in 1..n {
        let v = (s * k as f64 / 2.0).sqrt();
        q[(k - 1, k)] = Complex64::new(v, 0.0);
        q[(k, k - 1)] = Complex64::new(v, 0.0);
        pm[(k - 1, k)] = Complex64::new(0.0, -v);
        pm[(k, k - 1)] = Complex64::new(0.0, v);
    }
    Ok((
        ComplexMatrix {
            data: q,
            trusted: n - 1,
        },
        ComplexMatrix {
            data: pm,
            trusted: n - 1,
        },
    ))
}

/// (ħω_c/2)(Q² + P²) from the dimensionless quadratures.
pub fn osc_hamiltonian_quadrature_form(n: usize, p: &PhysicalParams) -> Result<ComplexMatrix> {
    let (q, pm) = quadratures(n)?;
    let sum = &(&q * &q) + &(&pm * &pm);
    Ok(sum.scale_real(p.kappa / 2.0).with_trusted(n.saturating_sub(2)))
}

/// op ⊗ I_L: acts on the first (n) factor of |n, l⟩.
pub fn on_first_factor(op: &ComplexMatrix, l_dim: usize) -> ComplexMatrix {
    op.kron(&ComplexMatrix::identity(l_dim))
}

/// I_N ⊗ op: acts on the second (l) factor of |n, l⟩.
pub fn on_second_factor(n_dim: usize, op: &ComplexMatrix) -> ComplexMatrix {
    let data = DMatrix::<Complex64>::identity(n_dim, n_dim).kronecker(op.as_dmatrix());
    let trusted = if op.trusted() == op.dim() { n_dim * op.dim() } else { 0 };
    ComplexMatrix { data, trusted }
}
