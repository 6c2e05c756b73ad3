//! Dense linear-algebra kernels shared by the solvers: weighted Gram
//! matrices, leverage scores, inverse square roots, and the spectral
//! perturbation bounds used by the Lipschitz analysis.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::polytope::PolytopeOf;
use crate::scalar::Real;

/// Relative eigenvalue floor below which a quadratic form counts as
/// degenerate.
pub const DEGENERACY_RTOL: f64 = 1e-12;

/// Nonnegative per-row weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<T: Real> {
    w: DVector<T>,
}

impl<T: Real> WeightVector<T> {
    pub fn new(w: DVector<T>) -> Result<Self> {
        if w.iter().any(|x| !x.is_finite() || *x < T::zero()) {
            return Err(Error::Domain(
                "weights must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { w })
    }

    /// Uniform weights summing to `total` (the `d/n` initialization).
    pub fn uniform(n: usize, total: T) -> Self {
        Self {
            w: DVector::from_element(n, total / T::from_usize(n).unwrap()),
        }
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn sum(&self) -> T {
        self.w.sum()
    }

    pub fn as_vector(&self) -> &DVector<T> {
        &self.w
    }

    pub fn into_vector(self) -> DVector<T> {
        self.w
    }

    /// Rescales so the entries sum to `target` (line `v_i = d/sum(u) * u_i`).
    pub fn rescaled_to(&self, target: T) -> Self {
        let s = self.sum();
        Self {
            w: &self.w * (target / s),
        }
    }
}

impl<T: Real> std::ops::Index<usize> for WeightVector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.w[i]
    }
}

/// Symmetric positive definite quadratic form `Q = A^T diag(w) A`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadForm<T: Real> {
    q: DMatrix<T>,
}

impl<T: Real> QuadForm<T> {
    /// Validates symmetry (1e-12 relative) and positive definiteness.
    pub fn new(q: DMatrix<T>) -> Result<Self> {
        if !q.is_square() {
            return Err(Error::Dimension("quadratic form must be square".into()));
        }
        let scale = q.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        for i in 0..q.nrows() {
            for j in (i + 1)..q.ncols() {
                if (q[(i, j)] - q[(j, i)]).abs() > T::of(1e-12) * scale {
                    return Err(Error::Domain("quadratic form is not symmetric".into()));
                }
            }
        }
        let eig = q.clone().symmetric_eigen().eigenvalues;
        let emax = eig.max();
        let emin = eig.min();
        if emin <= T::of(DEGENERACY_RTOL) * emax {
            return Err(Error::Singular(format!(
                "eigenvalue {:.3e} at or below degeneracy floor ({:.3e} * {DEGENERACY_RTOL:.0e})",
                emin.as_f64(),
                emax.as_f64()
            )));
        }
        Ok(Self { q })
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.q
    }

    /// Dense inverse via Cholesky.
    pub fn inverse(&self) -> Result<DMatrix<T>> {
        self.q
            .clone()
            .cholesky()
            .map(|c| c.inverse())
            .ok_or_else(|| Error::Singular("Cholesky factorization failed".into()))
    }

    /// `log det Q` via Cholesky.
    pub fn log_det(&self) -> Result<T> {
        let c = self
            .q
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Singular("Cholesky factorization failed".into()))?;
        let mut acc = T::zero();
        let l = c.l();
        for i in 0..l.nrows() {
            acc += l[(i, i)].ln();
        }
        Ok(acc + acc)
    }
}

/// Rows of `A` scaled by `sqrt(w_i)`, the matrix `B = W^{1/2} A`.
pub fn weighted_rows<T: Real>(a: &DMatrix<T>, w: &WeightVector<T>) -> DMatrix<T> {
    let mut b = a.clone();
    for i in 0..b.nrows() {
        let s = w[i].sqrt();
        for j in 0..b.ncols() {
            b[(i, j)] *= s;
        }
    }
    b
}

/// `Q = sum_i w_i a_i a_i^T`, computed as `B^T B` with `B = W^{1/2} A`.
pub fn gram<T: Real>(p: &PolytopeOf<T>, w: &WeightVector<T>) -> Result<QuadForm<T>> {
    if w.len() != p.rows() {
        return Err(Error::Dimension(format!(
            "weight vector has {} entries for {} rows",
            w.len(),
            p.rows()
        )));
    }
    let b = weighted_rows(p.matrix(), w);
    QuadForm::new(b.transpose() * b)
}

/// Leverage scores `h_i(w) = a_i^T (A^T diag(w) A)^{-1} a_i`.
pub fn leverage<T: Real>(p: &PolytopeOf<T>, w: &WeightVector<T>) -> Result<DVector<T>> {
    let q = gram(p, w)?;
    leverage_with(p, &q)
}

/// Leverage scores against an already-formed quadratic form.
pub fn leverage_with<T: Real>(p: &PolytopeOf<T>, q: &QuadForm<T>) -> Result<DVector<T>> {
    let qinv = q.inverse()?;
    Ok(quadratic_rows(p.matrix(), &qinv))
}

/// Row-wise quadratic forms `a_i^T M a_i` for each row of `A`.
pub fn quadratic_rows<T: Real>(a: &DMatrix<T>, m: &DMatrix<T>) -> DVector<T> {
    let g = a * m;
    DVector::from_fn(a.nrows(), |i, _| {
        let mut acc = T::zero();
        for j in 0..a.ncols() {
            acc += a[(i, j)] * g[(i, j)];
        }
        acc
    })
}

/// Symmetric inverse square root: `M` with `M Q M = I`.
pub fn inv_sqrt<T: Real>(q: &QuadForm<T>) -> Result<DMatrix<T>> {
    let eig = q.matrix().clone().symmetric_eigen();
    let emax = eig.eigenvalues.max();
    let emin = eig.eigenvalues.min();
    if emin <= T::of(DEGENERACY_RTOL) * emax {
        return Err(Error::Singular(format!(
            "inverse square root of near-singular form (eigs {:.3e}..{:.3e})",
            emin.as_f64(),
            emax.as_f64()
        )));
    }
    let d = q.dim();
    let mut m = DMatrix::zeros(d, d);
    for k in 0..d {
        let scale = T::one() / eig.eigenvalues[k].sqrt();
        let u = eig.eigenvectors.column(k);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] += scale * u[i] * u[j];
            }
        }
    }
    Ok(m)
}

/// Spectral norm (largest singular value).
pub fn spectral_norm<T: Real>(m: &DMatrix<T>) -> T {
    m.clone().singular_values().max()
}

/// One side of a perturbation inequality: computed left side, bounding
/// right side, and whether the bound holds.
#[derive(Debug, Clone, Copy)]
pub struct BoundCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub ok: bool,
}

/// Perturbation bounds between two same-shape matrices with
/// `|A - B| <= 0.1 sigma_min(A)`.
#[derive(Debug, Clone, Copy)]
pub struct PerturbBounds<T> {
    /// `|sigma_i(A) - sigma_i(B)| <= |A - B|` for every i.
    pub weyl: BoundCheck<T>,
    /// `|A+ - B+| <= 2 max(|A+|^2, |B+|^2) |A - B|`.
    pub wedin: BoundCheck<T>,
    /// `|A^T A - B^T B| <= 2.1 sigma_max(A) eps0`.
    pub gram: BoundCheck<T>,
    /// `|(A^T A)^{-1} - (B^T B)^{-1}| <= 8 kappa(A) sigma_min(A)^{-3} eps0`.
    pub inverse_gram: BoundCheck<T>,
}

impl<T> PerturbBounds<T> {
    pub fn all_ok(&self) -> bool {
        self.weyl.ok && self.wedin.ok && self.gram.ok && self.inverse_gram.ok
    }
}

fn check<T: Real>(lhs: T, rhs: T) -> BoundCheck<T> {
    // Exact inequality up to f64 roundoff in the two evaluations.
    let slack = T::of(1e-12) * (T::one() + rhs.abs());
    BoundCheck {
        lhs,
        rhs,
        ok: lhs <= rhs + slack,
    }
}

/// Evaluates the singular-value, pseudoinverse, Gram, and inverse-Gram
/// perturbation inequalities for a pair `(A, B)` with `eps0 := |A - B|`.
pub fn perturb_bounds<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>) -> Result<PerturbBounds<T>> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "shape mismatch: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let diff = spectral_norm(&(a - b));
    let sv_a = a.clone().singular_values();
    let sv_b = b.clone().singular_values();
    let sigma_max = sv_a.max();
    let sigma_min = sv_a.min();
    if diff > T::of(0.1) * sigma_min {
        return Err(Error::Precondition(format!(
            "|A - B| = {:.3e} exceeds 0.1 sigma_min(A) = {:.3e}",
            diff.as_f64(),
            (T::of(0.1) * sigma_min).as_f64()
        )));
    }
    let eps0 = diff;

    let mut weyl_lhs = T::zero();
    for i in 0..sv_a.len() {
        weyl_lhs = weyl_lhs.max((sv_a[i] - sv_b[i]).abs());
    }
    let weyl = check(weyl_lhs, diff);

    let svd_eps = T::of(1e-13) * sigma_max;
    let a_pinv = a
        .clone()
        .svd(true, true)
        .pseudo_inverse(svd_eps)
        .map_err(|e| Error::Singular(e.to_string()))?;
    let b_pinv = b
        .clone()
        .svd(true, true)
        .pseudo_inverse(svd_eps)
        .map_err(|e| Error::Singular(e.to_string()))?;
    let na = spectral_norm(&a_pinv);
    let nb = spectral_norm(&b_pinv);
    let wedin = check(
        spectral_norm(&(&a_pinv - &b_pinv)),
        T::of(2.0) * (na * na).max(nb * nb) * diff,
    );

    let ata = a.transpose() * a;
    let btb = b.transpose() * b;
    let gram = check(
        spectral_norm(&(&ata - &btb)),
        T::of(2.1) * sigma_max * eps0,
    );

    let ata_inv = ata
        .cholesky()
        .ok_or_else(|| Error::Singular("A^T A is not positive definite".into()))?
        .inverse();
    let btb_inv = btb
        .cholesky()
        .ok_or_else(|| Error::Singular("B^T B is not positive definite".into()))?
        .inverse();
    let kappa = sigma_max / sigma_min;
    let inverse_gram = check(
        spectral_norm(&(&ata_inv - &btb_inv)),
        T::of(8.0) * kappa * eps0 / (sigma_min * sigma_min * sigma_min),
    );

    Ok(PerturbBounds {
        weyl,
        wedin,
        gram,
        inverse_gram,
    })
}
