//! Linear Heisenberg-picture algebra over a small labeled basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;

use super::basis::{OperatorBasis, OperatorKind};
use crate::error::{Error, Result};

/// A real linear combination of basis operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorVector {
    basis: Arc<OperatorBasis>,
    coeffs: Vec<f64>,
}

impl OperatorVector {
    pub fn zero(basis: &Arc<OperatorBasis>) -> Self {
        Self {
            basis: Arc::clone(basis),
            coeffs: vec![0.0; basis.len()],
        }
    }

    pub fn unit(basis: &Arc<OperatorBasis>, label: &str) -> Result<Self> {
        let mut v = Self::zero(basis);
        v.coeffs[basis.index(label)?] = 1.0;
        Ok(v)
    }

    /// Builds a vector from `(label, coefficient)` terms; repeated labels accumulate.
    pub fn from_terms(basis: &Arc<OperatorBasis>, terms: &[(&str, f64)]) -> Result<Self> {
        let mut v = Self::zero(basis);
        for (label, c) in terms {
            v.coeffs[basis.index(label)?] += c;
        }
        Ok(v)
    }

    pub fn basis(&self) -> &Arc<OperatorBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, label: &str) -> Result<f64> {
        Ok(self.coeffs[self.basis.index(label)?])
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// c-number `w` with `[self, other] = i * w`.
    pub fn commutator(&self, other: &Self) -> Result<f64> {
        self.check_basis(other)?;
        let n = self.basis.len();
        let mut acc = 0.0;
        for i in 0..n {
            if self.coeffs[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                acc += self.coeffs[i] * other.coeffs[j] * self.basis.omega(i, j);
            }
        }
        Ok(acc)
    }

    /// Keeps only the components whose kind satisfies `keep`.
    pub fn project(&self, keep: impl Fn(OperatorKind) -> bool) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if keep(self.basis.kind(i)) { *c } else { 0.0 })
            .collect();
        Self {
            basis: Arc::clone(&self.basis),
            coeffs,
        }
    }

    /// Only the light (optical and ancilla) part.
    pub fn light_part(&self) -> Self {
        self.project(OperatorKind::is_light)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            basis: Arc::clone(&self.basis),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    fn check_basis(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch(format!(
                "{:?} vs {:?}",
                self.basis.labels(),
                other.basis.labels()
            )))
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        self.check_basis(other).expect("operator vectors over different bases");
        Self {
            basis: Arc::clone(&self.basis),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(*a, *b)).collect(),
        }
    }
}

impl fmt::Display for OperatorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{}", self.basis.label(i))?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &OperatorVector {
    type Output = OperatorVector;
    fn add(self, rhs: Self) -> OperatorVector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &OperatorVector {
    type Output = OperatorVector;
    fn sub(self, rhs: Self) -> OperatorVector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &OperatorVector {
    type Output = OperatorVector;
    fn mul(self, k: f64) -> OperatorVector {
        self.scaled(k)
    }
}

impl Neg for &OperatorVector {
    type Output = OperatorVector;
    fn neg(self) -> OperatorVector {
        self.scaled(-1.0)
    }
}

/// Homogeneous linear Heisenberg map. Row `i` is the image of basis operator `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    basis: Arc<OperatorBasis>,
    matrix: DMatrix<f64>,
}

impl AffineMap {
    pub fn identity(basis: &Arc<OperatorBasis>) -> Self {
        Self {
            basis: Arc::clone(basis),
            matrix: DMatrix::identity(basis.len(), basis.len()),
        }
    }

    /// Exact Heisenberg map of `U = exp(-i f g)` for commuting linear operators `f`, `g`.
    ///
    /// Because `[f, g] = 0` the commutator series stops after the first term:
    /// `U^dag O U = O + omega(O, f) g + omega(O, g) f`.
    pub fn bilinear_generator(f: &OperatorVector, g: &OperatorVector) -> Result<Self> {
        if f.commutator(g)?.abs() > 1e-14 {
            return Err(Error::BasisMismatch("bilinear generator factors must commute".into()));
        }
        let basis = Arc::clone(f.basis());
        let n = basis.len();
        let mut matrix = DMatrix::identity(n, n);
        for i in 0..n {
            let o = OperatorVector::unit(&basis, basis.label(i))?;
            let w_f = o.commutator(f)?;
            let w_g = o.commutator(g)?;
            for j in 0..n {
                matrix[(i, j)] += w_f * g.coeffs[j] + w_g * f.coeffs[j];
            }
        }
        Ok(Self { basis, matrix })
    }

    /// Position kick `exp(-i x0 L)` for a light operator `L`.
    pub fn position_kick(basis: &Arc<OperatorBasis>, light: &[(&str, f64)]) -> Result<Self> {
        let x0 = OperatorVector::unit(basis, "x0")?;
        let l = OperatorVector::from_terms(basis, light)?;
        Self::bilinear_generator(&x0, &l)
    }

    /// Free evolution `exp(-i beta p0^2 / 2)`.
    pub fn free_drift(basis: &Arc<OperatorBasis>, beta: f64) -> Result<Self> {
        let p0 = OperatorVector::unit(basis, "p0")?;
        Self::bilinear_generator(&p0, &p0.scaled(0.5 * beta))
    }

    /// Heisenberg map of the product `U_1 U_2 ... U_n`, given the maps of each factor in that order.
    pub fn product(maps: &[AffineMap]) -> Result<Self> {
        let first = maps
            .first()
            .ok_or_else(|| Error::BasisMismatch("empty map product".into()))?;
        let mut acc = Self::identity(&first.basis);
        for m in maps {
            acc = acc.then(m)?;
        }
        Ok(acc)
    }

    /// Map of `U_self * U_next`: `self` acts on the operator first, `next` on every operator it produced.
    pub fn then(&self, next: &AffineMap) -> Result<Self> {
        if *self.basis != *next.basis {
            return Err(Error::BasisMismatch("cannot compose maps over different bases".into()));
        }
        Ok(Self {
            basis: Arc::clone(&self.basis),
            matrix: &self.matrix * &next.matrix,
        })
    }

    pub fn basis(&self) -> &Arc<OperatorBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Evolved image of a basis operator.
    pub fn image(&self, label: &str) -> Result<OperatorVector> {
        let i = self.basis.index(label)?;
        Ok(OperatorVector {
            basis: Arc::clone(&self.basis),
            coeffs: self.matrix.row(i).iter().copied().collect(),
        })
    }

    /// Evolved image of a linear combination.
    pub fn apply(&self, v: &OperatorVector) -> Result<OperatorVector> {
        if *self.basis != **v.basis() {
            return Err(Error::BasisMismatch("vector and map bases differ".into()));
        }
        let n = self.basis.len();
        let mut coeffs = vec![0.0; n];
        for (i, ci) in v.coeffs.iter().enumerate() {
            if *ci == 0.0 {
                continue;
            }
            for (j, out) in coeffs.iter_mut().enumerate() {
                *out += ci * self.matrix[(i, j)];
            }
        }
        Ok(OperatorVector {
            basis: Arc::clone(&self.basis),
            coeffs,
        })
    }

    /// Unitary evolutions preserve all canonical commutators: `M Omega M^T = Omega`.
    pub fn preserves_commutators(&self, tol: f64) -> bool {
        let n = self.basis.len();
        let omega = DMatrix::from_fn(n, n, |i, j| self.basis.omega(i, j));
        let lhs = &self.matrix * &omega * self.matrix.transpose();
        (lhs - omega).amax() <= tol
    }
}

/// Symmetrized second moments `<{A, B}>/2` over a labeled basis.
///
/// Operators without an entry (the mechanical ones, by default) carry zero weight.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorMatrix {
    basis: Arc<OperatorBasis>,
    sym: DMatrix<f64>,
}

impl CorrelatorMatrix {
    pub fn zeros(basis: &Arc<OperatorBasis>) -> Self {
        Self {
            basis: Arc::clone(basis),
            sym: DMatrix::zeros(basis.len(), basis.len()),
        }
    }

    /// Sets the symmetrized moment `<{a, b}>/2` (and its mirror).
    pub fn set_sym(&mut self, a: &str, b: &str, value: f64) -> Result<&mut Self> {
        let (i, j) = (self.basis.index(a)?, self.basis.index(b)?);
        self.sym[(i, j)] = value;
        self.sym[(j, i)] = value;
        Ok(self)
    }

    /// Sets a full anticommutator expectation `<{a, b}>` for `a != b`.
    pub fn set_anticommutator(&mut self, a: &str, b: &str, value: f64) -> Result<&mut Self> {
        self.set_sym(a, b, 0.5 * value)
    }

    /// Places a vacuum (variance 1/2, uncorrelated) on the named pair.
    pub fn set_vacuum(&mut self, q: &str, p: &str) -> Result<&mut Self> {
        self.set_sym(q, q, 0.5)?;
        self.set_sym(p, p, 0.5)?;
        self.set_sym(q, p, 0.0)
    }

    pub fn get_sym(&self, a: &str, b: &str) -> Result<f64> {
        Ok(self.sym[(self.basis.index(a)?, self.basis.index(b)?)])
    }

    pub fn basis(&self) -> &Arc<OperatorBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.sym
    }

    /// `<v^2>` for the symmetrized state.
    pub fn quadratic_form(&self, v: &OperatorVector) -> Result<f64> {
        if *self.basis != **v.basis() {
            return Err(Error::BasisMismatch("correlators and vector bases differ".into()));
        }
        let c = v.coeffs();
        let n = c.len();
        let mut acc = 0.0;
        for i in 0..n {
            if c[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                acc += c[i] * c[j] * self.sym[(i, j)];
            }
        }
        Ok(acc)
    }
}
