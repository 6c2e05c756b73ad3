//! Symmetric polytopes `{x : |<a_i, x>| <= 1}` and their close neighbors.
//!
//! A polytope is stored as its constraint matrix `A` (one row per
//! constraint). Construction validates shape, finiteness, and full column
//! rank; instances are immutable afterwards.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative singular-value threshold below which the matrix is declared
/// column-rank deficient.
pub const RANK_RTOL: f64 = 1e-10;

/// Text layout of a matrix file: one constraint row per line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    /// Comma-separated values.
    Csv,
    /// Whitespace-separated values.
    Whitespace,
}

/// Singular-value summary of a constraint matrix.
#[derive(Debug, Clone, Copy)]
pub struct SpectralStats<T> {
    pub sigma_max: T,
    pub sigma_min: T,
    /// Condition number `sigma_max / sigma_min`.
    pub cond: T,
    /// Number of nonzero entries of `A`.
    pub nnz: usize,
}

/// Validated symmetric polytope `{x : |<a_i, x>| <= 1 for all i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeOf<T: Real> {
    a: DMatrix<T>,
}

impl<T: Real> PolytopeOf<T> {
    /// Wraps a constraint matrix, checking `n >= d >= 1`, finite entries,
    /// and full column rank (`sigma_min > RANK_RTOL * sigma_max`).
    pub fn new(a: DMatrix<T>) -> Result<Self> {
        let (n, d) = a.shape();
        if d < 1 {
            return Err(Error::Dimension("matrix has zero columns".into()));
        }
        if n < d {
            return Err(Error::Dimension(format!(
                "need at least as many rows as columns, got {n}x{d}"
            )));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parse("matrix contains a non-finite entry".into()));
        }
        let sv = a.clone().singular_values();
        let smax = sv.max();
        let smin = sv.min();
        if smin <= T::of(RANK_RTOL) * smax {
            return Err(Error::Rank(format!(
                "column rank < {d}: sigma_min = {:.3e} vs sigma_max = {:.3e}",
                smin.as_f64(),
                smax.as_f64()
            )));
        }
        Ok(Self { a })
    }

    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    /// The constraint matrix `A`.
    pub fn matrix(&self) -> &DMatrix<T> {
        &self.a
    }

    /// Row `i` as a column vector `a_i`.
    pub fn row(&self, i: usize) -> DVector<T> {
        self.a.row(i).transpose()
    }

    /// Extreme singular values, condition number, and nonzero count.
    pub fn spectral_stats(&self) -> SpectralStats<T> {
        let sv = self.a.clone().singular_values();
        let sigma_max = sv.max();
        let sigma_min = sv.min();
        SpectralStats {
            sigma_max,
            sigma_min,
            cond: sigma_max / sigma_min,
            nnz: self.a.iter().filter(|x| **x != T::zero()).count(),
        }
    }

    /// Returns the polytope that differs from `self` exactly in the
    /// perturbed row.
    pub fn make_neighbor(&self, pert: &NeighborPerturbation<T>) -> Result<Self> {
        let (n, d) = self.a.shape();
        if pert.row >= n {
            return Err(Error::Index {
                row: pert.row,
                rows: n,
            });
        }
        if pert.delta.len() != d {
            return Err(Error::Dimension(format!(
                "delta has {} entries, expected {d}",
                pert.delta.len()
            )));
        }
        let norm = pert.delta.norm();
        // The closeness contract carries a 1e-12 relative slack.
        if norm > pert.closeness * (T::one() + T::of(1e-12)) {
            return Err(Error::Closeness {
                norm: norm.as_f64(),
                eps0: pert.closeness.as_f64(),
            });
        }
        let mut a = self.a.clone();
        for j in 0..d {
            a[(pert.row, j)] += pert.delta[j];
        }
        Self::new(a)
    }

    /// Serializes the matrix with per-line rows. Uses the shortest decimal
    /// form that parses back to the same value, so whitespace round trips
    /// are bit identical.
    pub fn to_text(&self, format: MatrixFormat) -> String {
        let sep = match format {
            MatrixFormat::Csv => ",",
            MatrixFormat::Whitespace => " ",
        };
        let mut out = String::new();
        for i in 0..self.a.nrows() {
            for j in 0..self.a.ncols() {
                if j > 0 {
                    out.push_str(sep);
                }
                write!(out, "{}", self.a[(i, j)]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, path: impl AsRef<Path>, format: MatrixFormat) -> Result<()> {
        std::fs::write(path, self.to_text(format))?;
        Ok(())
    }
}

/// Declared single-row perturbation: row index, delta vector, and the
/// closeness bound `eps0` the delta must respect.
#[derive(Debug, Clone)]
pub struct NeighborPerturbation<T: Real> {
    pub row: usize,
    pub delta: DVector<T>,
    pub closeness: T,
}

impl<T: Real> NeighborPerturbation<T> {
    pub fn new(row: usize, delta: DVector<T>, closeness: T) -> Self {
        Self {
            row,
            delta,
            closeness,
        }
    }

    /// Delta drawn uniformly from the sphere of radius `eps0`.
    pub fn random_on_sphere<R: Rng + ?Sized>(rng: &mut R, d: usize, row: usize, eps0: T) -> Self {
        let mut delta = DVector::from_fn(d, |_, _| T::standard_normal(rng));
        let mut norm = delta.norm();
        while norm == T::zero() {
            delta = DVector::from_fn(d, |_, _| T::standard_normal(rng));
            norm = delta.norm();
        }
        delta *= eps0 / norm;
        // Guard the closeness contract against rounding in the rescale.
        let actual = delta.norm();
        if actual > eps0 {
            delta *= eps0 / actual;
        }
        Self::new(row, delta, eps0)
    }
}

/// Parses matrix text into a validated polytope.
pub fn parse_polytope<T: Real>(text: &str, format: MatrixFormat) -> Result<PolytopeOf<T>> {
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = match format {
            MatrixFormat::Csv => line.split(',').map(str::trim).collect(),
            MatrixFormat::Whitespace => line.split_whitespace().collect(),
        };
        let mut row = Vec::with_capacity(fields.len());
        for f in fields {
            let v: f64 = f.parse().map_err(|_| {
                Error::Parse(format!("line {}: invalid number {f:?}", lineno + 1))
            })?;
            row.push(T::of(v));
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse(format!(
                    "line {}: expected {} fields, got {}",
                    lineno + 1,
                    first.len(),
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("no rows in input".into()));
    }
    let n = rows.len();
    let d = rows[0].len();
    let a = DMatrix::from_fn(n, d, |i, j| rows[i][j]);
    PolytopeOf::new(a)
}

/// Loads a polytope from a matrix file.
pub fn load_polytope<T: Real>(
    path: impl AsRef<Path>,
    format: MatrixFormat,
) -> Result<PolytopeOf<T>> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
        Error::Parse(format!("{}: {e}", path.as_ref().display()))
    })?;
    parse_polytope(&text, format)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn identity(d: usize) -> PolytopeOf<f64> {
        PolytopeOf::new(DMatrix::identity(d, d)).unwrap()
    }

    #[test]
    fn loads_identity_csv() {
        let p: PolytopeOf<f64> = parse_polytope("1,0\n0,1\n", MatrixFormat::Csv).unwrap();
        assert_eq!((p.rows(), p.cols()), (2, 2));
        assert_eq!(p.matrix(), &DMatrix::identity(2, 2));
    }

    #[test]
    fn loads_three_row_whitespace() {
        let p: PolytopeOf<f64> =
            parse_polytope("1 0\n0 1\n0.7071 0.7071\n", MatrixFormat::Whitespace).unwrap();
        assert_eq!((p.rows(), p.cols()), (3, 2));
    }

    #[test]
    fn duplicate_column_is_rank_error() {
        let r = parse_polytope::<f64>("1,1\n2,2\n", MatrixFormat::Csv);
        assert!(matches!(r, Err(Error::Rank(_))));
    }

    #[test]
    fn wide_matrix_is_dimension_error() {
        let r = parse_polytope::<f64>("1,0,0\n", MatrixFormat::Csv);
        assert!(matches!(r, Err(Error::Dimension(_))));
    }

    #[test]
    fn ragged_row_is_parse_error() {
        let r = parse_polytope::<f64>("1,0\n0\n", MatrixFormat::Csv);
        assert!(matches!(r, Err(Error::Parse(_))));
    }

    #[test]
    fn non_numeric_is_parse_error() {
        let r = parse_polytope::<f64>("1,zero\n0,1\n", MatrixFormat::Csv);
        assert!(matches!(r, Err(Error::Parse(_))));
    }

    #[test]
    fn zero_perturbation_is_identity() {
        let p = identity(2);
        let q = p
            .make_neighbor(&NeighborPerturbation::new(0, dvector![0.0, 0.0], 1e-3))
            .unwrap();
        assert_eq!(p.matrix(), q.matrix());
    }

    #[test]
    fn perturbation_changes_exactly_one_row() {
        let p = identity(2);
        let q = p
            .make_neighbor(&NeighborPerturbation::new(0, dvector![1e-3, 0.0], 1e-3))
            .unwrap();
        assert_eq!(q.matrix()[(0, 0)], 1.0 + 1e-3);
        assert_eq!(q.matrix()[(0, 1)], 0.0);
        assert_eq!(q.matrix().row(1), p.matrix().row(1));
    }

    #[test]
    fn oversized_delta_is_closeness_error() {
        let p = identity(2);
        let r = p.make_neighbor(&NeighborPerturbation::new(0, dvector![0.1, 0.0], 1e-3));
        assert!(matches!(r, Err(Error::Closeness { .. })));
    }

    #[test]
    fn out_of_range_row_is_index_error() {
        let p = identity(2);
        let r = p.make_neighbor(&NeighborPerturbation::new(5, dvector![0.0, 0.0], 1e-3));
        assert!(matches!(r, Err(Error::Index { row: 5, rows: 2 })));
    }

    #[test]
    fn neighbor_inverse_restores_exactly() {
        let mut rng = crate::stream::derived_rng(7, crate::stream::Domain::Instance, 0, 0);
        let a = DMatrix::<f64>::from_fn(6, 3, |_, _| f64::standard_normal(&mut rng));
        let p = PolytopeOf::new(a).unwrap();
        let pert = NeighborPerturbation::random_on_sphere(&mut rng, 3, 2, 1e-4);
        let q = p.make_neighbor(&pert).unwrap();
        let back = NeighborPerturbation::new(pert.row, -pert.delta.clone(), pert.closeness);
        let p2 = q.make_neighbor(&back).unwrap();
        assert_eq!(p.matrix(), p2.matrix());
    }

    #[test]
    fn spectral_stats_identity() {
        let s = identity(3).spectral_stats();
        assert_eq!(s.sigma_max, 1.0);
        assert_eq!(s.sigma_min, 1.0);
        assert_eq!(s.cond, 1.0);
        assert_eq!(s.nnz, 3);
    }

    #[test]
    fn spectral_stats_diagonal() {
        let p = PolytopeOf::new(DMatrix::<f64>::from_diagonal(&dvector![2.0, 1.0])).unwrap();
        let s = p.spectral_stats();
        assert!((s.sigma_max - 2.0).abs() < 1e-14);
        assert!((s.sigma_min - 1.0).abs() < 1e-14);
        assert!((s.cond - 2.0).abs() < 1e-14);
    }

    // Independent oracle: singular values of A via a hand-rolled Jacobi
    // eigensolver on A^T A, no shared code with the nalgebra SVD path.
    fn jacobi_singular_values(a: &DMatrix<f64>) -> Vec<f64> {
        let d = a.ncols();
        let mut m = vec![vec![0.0f64; d]; d];
        for p in 0..d {
            for q in 0..d {
                let mut s = 0.0;
                for r in 0..a.nrows() {
                    s += a[(r, p)] * a[(r, q)];
                }
                m[p][q] = s;
            }
        }
        for _ in 0..200 {
            let mut off = 0.0;
            for p in 0..d {
                for q in 0..d {
                    if p != q {
                        off += m[p][q] * m[p][q];
                    }
                }
            }
            if off < 1e-28 {
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    if m[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = 0.5 * (2.0 * m[p][q]).atan2(m[p][p] - m[q][q]);
                    let (c, s) = (theta.cos(), theta.sin());
                    for r in 0..d {
                        let (mrp, mrq) = (m[r][p], m[r][q]);
                        m[r][p] = c * mrp + s * mrq;
                        m[r][q] = -s * mrp + c * mrq;
                    }
                    for r in 0..d {
                        let (mpr, mqr) = (m[p][r], m[q][r]);
                        m[p][r] = c * mpr + s * mqr;
                        m[q][r] = -s * mpr + c * mqr;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..d).map(|p| m[p][p].max(0.0).sqrt()).collect();
        ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
        ev
    }

    #[test]
    fn spectral_stats_match_jacobi_oracle() {
        let mut rng = crate::stream::derived_rng(11, crate::stream::Domain::Instance, 0, 0);
        let a = DMatrix::<f64>::from_fn(50, 5, |_, _| f64::standard_normal(&mut rng));
        let p = PolytopeOf::new(a.clone()).unwrap();
        let s = p.spectral_stats();
        let oracle = jacobi_singular_values(&a);
        assert!((s.sigma_max - oracle[0]).abs() < 1e-10);
        assert!((s.sigma_min - oracle[4]).abs() < 1e-10);
        assert!(s.cond >= 1.0);
    }

    #[test]
    fn whitespace_round_trip_is_bit_identical() {
        let mut rng = crate::stream::derived_rng(13, crate::stream::Domain::Instance, 0, 0);
        let a = DMatrix::<f64>::from_fn(8, 3, |_, _| f64::standard_normal(&mut rng) * 3.7);
        let p = PolytopeOf::new(a).unwrap();
        let text = p.to_text(MatrixFormat::Whitespace);
        let q: PolytopeOf<f64> = parse_polytope(&text, MatrixFormat::Whitespace).unwrap();
        assert_eq!(p.matrix(), q.matrix());
        assert_eq!(text, q.to_text(MatrixFormat::Whitespace));
    }

    #[test]
    fn f32_polytope_constructs() {
        let p: PolytopeOf<f32> = parse_polytope("1,0\n0,1\n", MatrixFormat::Csv).unwrap();
        assert_eq!(p.spectral_stats().cond, 1.0f32);
    }
}
