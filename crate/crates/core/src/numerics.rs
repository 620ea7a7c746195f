//! Generic numerical kernels: sign-change scanning, Brent root finding,
//! adaptive Simpson and double-exponential quadrature, a cyclic Jacobi
//! eigensolver for dense symmetric matrices, and finite differences.

use std::convert::Infallible;
use std::fmt::Display;

use rayon::prelude::*;
use thiserror::Error;

/// Grid values with `|f| < DEGENERATE_ABS` are treated as exact zeros by [`bracket_scan`].
pub const DEGENERATE_ABS: f64 = 1e-14;

/// Iteration cap for [`brent_root`].
pub const BRENT_MAX_ITER: usize = 200;

/// Recursion depth cap for [`integrate_adaptive`].
pub const SIMPSON_MAX_DEPTH: usize = 40;

/// Sweep cap for [`jacobi_eigen`].
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("evaluation failed at x = {x}: {message}")]
    Evaluation { x: f64, message: String },
    #[error("no sign change on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },
    #[error("root finder exceeded {0} iterations")]
    MaxIterations(usize),
    #[error("adaptive quadrature exceeded depth {depth} near x = {x}")]
    MaxDepth { depth: usize, x: f64 },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("Jacobi iteration did not converge in {0} sweeps")]
    NonConvergence(usize),
}

/// Wraps an infallible closure so it can be passed to the fallible kernels.
pub fn plain<F: Fn(f64) -> f64>(f: F) -> impl Fn(f64) -> Result<f64, Infallible> {
    move |x| Ok(f(x))
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// An interval carrying a strict sign change, or a width-zero bracket at an
/// exact grid zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self, NumericsError> {
        if !(lo < hi) {
            return Err(NumericsError::InvalidInput(format!(
                "bracket needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        if !(f_lo * f_hi < 0.0) {
            return Err(NumericsError::NotBracketed { lo, hi });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    /// Width-zero bracket at a grid point where `|f| < DEGENERATE_ABS`.
    pub fn degenerate(x: f64, fx: f64) -> Self {
        Self {
            lo: x,
            hi: x,
            f_lo: fx,
            f_hi: fx,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn f_lo(&self) -> f64 {
        self.f_lo
    }

    pub fn f_hi(&self) -> f64 {
        self.f_hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootReport {
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket: Bracket,
}

fn eval_checked<F, E>(f: &F, x: f64) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> Result<f64, E>,
    E: Display,
{
    match f(x) {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(v) => Err(NumericsError::Evaluation {
            x,
            message: format!("non-finite value {v}"),
        }),
        Err(e) => Err(NumericsError::Evaluation {
            x,
            message: e.to_string(),
        }),
    }
}

/// Scans `[lo, hi]` on a uniform grid and returns every sign change between
/// consecutive grid points, ordered by position.
///
/// Grid points with `|f| < DEGENERATE_ABS` are returned as width-zero
/// brackets; the intervals on either side of such a point are not reported
/// again. Grid evaluation runs in parallel; the output order does not depend
/// on scheduling.
pub fn bracket_scan<F, E>(f: F, lo: f64, hi: f64, step: f64) -> Result<Vec<Bracket>, NumericsError>
where
    F: Fn(f64) -> Result<f64, E> + Sync,
    E: Display,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(NumericsError::InvalidInput(format!(
            "scan needs finite lo < hi, got [{lo}, {hi}]"
        )));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(NumericsError::InvalidInput(format!("scan step must be > 0, got {step}")));
    }
    let n = ((hi - lo) / step - 1e-9).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=n)
        .map(|i| if i == n { hi } else { lo + i as f64 * step })
        .collect();
    let values: Vec<Result<f64, NumericsError>> =
        grid.par_iter().map(|&x| eval_checked(&f, x)).collect();
    let mut fs = Vec::with_capacity(values.len());
    for v in values {
        fs.push(v?);
    }

    let mut out = Vec::new();
    for i in 0..grid.len() {
        if fs[i].abs() < DEGENERATE_ABS {
            out.push(Bracket::degenerate(grid[i], fs[i]));
            continue;
        }
        if i + 1 < grid.len() && fs[i + 1].abs() >= DEGENERATE_ABS && fs[i] * fs[i + 1] < 0.0 {
            out.push(Bracket {
                lo: grid[i],
                hi: grid[i + 1],
                f_lo: fs[i],
                f_hi: fs[i + 1],
            });
        }
    }
    Ok(out)
}

/// Brent's method on a sign-change bracket.
///
/// Stops when `|f(root)| <= tol` or the bracket width falls below
/// `tol * max(1, |root|)`. Width-zero brackets return their grid point.
pub fn brent_root<F, E>(f: F, bracket: &Bracket, tol: f64) -> Result<RootReport, NumericsError>
where
    F: Fn(f64) -> Result<f64, E>,
    E: Display,
{
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidInput(format!("tolerance must be > 0, got {tol}")));
    }
    if bracket.is_degenerate() {
        return Ok(RootReport {
            root: bracket.lo,
            residual: bracket.f_lo,
            iterations: 0,
            bracket: *bracket,
        });
    }

    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=BRENT_MAX_ITER {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol * b.abs().max(1.0);
        let xm = 0.5 * (c - b);
        if fb.abs() <= tol || xm.abs() <= tol1 || fb == 0.0 {
            return Ok(RootReport {
                root: b,
                residual: fb,
                iterations: iter,
                bracket: *bracket,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = eval_checked(&f, b)?;
    }
    Err(NumericsError::MaxIterations(BRENT_MAX_ITER))
}

fn finite_at<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, NumericsError> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(NumericsError::Evaluation {
            x,
            message: format!("non-finite integrand {v}"),
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    acc: &mut CompensatedSum,
) -> Result<(), NumericsError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = finite_at(f, lm)?;
    let frm = finite_at(f, rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        acc.add(left);
        acc.add(right);
        acc.add(delta / 15.0);
        return Ok(());
    }
    if depth >= SIMPSON_MAX_DEPTH || lm <= a || rm >= b {
        return Err(NumericsError::MaxDepth {
            depth: SIMPSON_MAX_DEPTH,
            x: m,
        });
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, acc)?;
    simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, acc)
}

/// Adaptive Simpson quadrature with Richardson correction; the absolute
/// error target is `tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, NumericsError> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(NumericsError::InvalidInput(format!(
            "integration needs finite lo < hi, got [{lo}, {hi}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidInput(format!("tolerance must be > 0, got {tol}")));
    }
    let fa = finite_at(&f, lo)?;
    let fb = finite_at(&f, hi)?;
    let m = 0.5 * (lo + hi);
    let fm = finite_at(&f, m)?;
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    let mut acc = CompensatedSum::new();
    simpson_step(&f, lo, hi, fa, fm, fb, whole, tol, 0, &mut acc)?;
    Ok(acc.value())
}

/// [`integrate_adaptive`] over `[lo, hi]` split at interior `breaks`
/// (kinks of the integrand). The tolerance is shared evenly.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<f64, NumericsError> {
    let mut pts = vec![lo];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&b| b > lo && b < hi).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    pts.extend(inner);
    pts.push(hi);
    let share = tol / (pts.len() - 1) as f64;
    let mut acc = CompensatedSum::new();
    for w in pts.windows(2) {
        acc.add(integrate_adaptive(&f, w[0], w[1], share)?);
    }
    Ok(acc.value())
}

/// Exp-sinh (double-exponential) quadrature of `f` over `(0, inf)`.
///
/// Handles integrable algebraic endpoint singularities at zero. The step is
/// halved until successive estimates agree to `rel_tol`.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, rel_tol: f64) -> Result<f64, NumericsError> {
    const U_MAX: f64 = 5.0;
    const MAX_LEVELS: usize = 9;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let node = |u: f64| -> (f64, f64) {
        let t = (half_pi * u.sinh()).exp();
        (t, half_pi * u.cosh() * t)
    };
    let term = |u: f64| -> Result<f64, NumericsError> {
        let (t, w) = node(u);
        if t == 0.0 || !w.is_finite() {
            return Ok(0.0);
        }
        let v = f(t);
        if !v.is_finite() {
            return Err(NumericsError::Evaluation {
                x: t,
                message: format!("non-finite integrand {v}"),
            });
        }
        Ok(v * w)
    };
    // Sum of samples at u = offset + k*h for k in Z, walking outward until the
    // terms are negligible and shrinking.
    let lattice = |offset: f64, h: f64| -> Result<f64, NumericsError> {
        let mut acc = CompensatedSum::new();
        for dir in [1.0_f64, -1.0] {
            let mut k = if dir > 0.0 { 0 } else { 1 };
            let mut prev = f64::INFINITY;
            loop {
                let u = if dir > 0.0 { offset + k as f64 * h } else { offset - k as f64 * h };
                if u.abs() > U_MAX {
                    break;
                }
                let v = term(u)?;
                acc.add(v);
                let mag = v.abs();
                if mag < 1e-20 * acc.value().abs() && mag <= prev {
                    break;
                }
                prev = mag;
                k += 1;
            }
        }
        Ok(acc.value())
    };

    let mut h = 0.5;
    let mut estimate = h * lattice(0.0, h)?;
    for level in 1..=MAX_LEVELS {
        let mids = lattice(0.5 * h, h)?;
        let next = 0.5 * estimate + 0.5 * h * mids;
        h *= 0.5;
        let converged = (next - estimate).abs() <= rel_tol * next.abs();
        estimate = next;
        if converged && level >= 3 {
            return Ok(estimate);
        }
    }
    Ok(estimate)
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, NumericsError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(NumericsError::InvalidInput("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Adds `scale * u v^T`.
    pub fn add_outer(&mut self, scale: f64, u: &[f64], v: &[f64]) {
        assert_eq!(u.len(), self.rows);
        assert_eq!(v.len(), self.cols);
        for i in 0..self.rows {
            let su = scale * u[i];
            for j in 0..self.cols {
                self.data[i * self.cols + j] += su * v[j];
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigen-decomposition `A = V diag(values) V^T`, eigenvalues ascending and
/// eigenvectors stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
    pub sweeps: usize,
}

fn check_symmetric(mat: &Matrix) -> Result<f64, NumericsError> {
    if !mat.is_square() {
        return Err(NumericsError::InvalidInput(format!(
            "matrix must be square, got {}x{}",
            mat.rows, mat.cols
        )));
    }
    let norm = mat.frobenius_norm();
    let asym = mat.max_asymmetry();
    if asym > 1e-12 * norm {
        return Err(NumericsError::NotSymmetric(asym));
    }
    Ok(norm)
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

fn jacobi_core(mat: &Matrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Matrix>, usize), NumericsError> {
    let norm = check_symmetric(mat)?;
    let n = mat.rows;
    // symmetrise exactly so the rotations can update the upper triangle only
    let mut a = Matrix::from_fn(n, n, |i, j| 0.5 * (mat[(i, j)] + mat[(j, i)]));
    let mut v = want_vectors.then(|| Matrix::identity(n));
    let target = 1e-12 * norm;
    if n <= 1 || norm == 0.0 {
        let values = (0..n).map(|i| a[(i, i)]).collect();
        return Ok((values, v, 0));
    }

    for sweep in 1..=JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < target {
            let values = (0..n).map(|i| a[(i, i)]).collect();
            return Ok((values, v, sweep - 1));
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_infinite() {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[(k, p)] = new_kp;
                    a[(p, k)] = new_kp;
                    a[(k, q)] = new_kq;
                    a[(q, k)] = new_kq;
                }
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if off_diagonal_norm(&a) < target {
        let values = (0..n).map(|i| a[(i, i)]).collect();
        return Ok((values, v, JACOBI_MAX_SWEEPS));
    }
    Err(NumericsError::NonConvergence(JACOBI_MAX_SWEEPS))
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// `1e-12 * ||A||_F`.
pub fn jacobi_eigen(mat: &Matrix) -> Result<SymmetricEigen, NumericsError> {
    let (values, vectors, sweeps) = jacobi_core(mat, true)?;
    let vectors = vectors.expect("vectors requested");
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = Matrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(SymmetricEigen {
        values: sorted_values,
        vectors: sorted_vectors,
        sweeps,
    })
}

/// Eigenvalues only (ascending); skips the eigenvector accumulation.
pub fn jacobi_eigenvalues(mat: &Matrix) -> Result<Vec<f64>, NumericsError> {
    let (mut values, _, _) = jacobi_core(mat, false)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOrder {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Five-point central difference of the given order.
pub fn finite_diff<F: Fn(f64) -> f64>(f: F, x: f64, order: DiffOrder, h: f64) -> f64 {
    let (m2, m1, p1, p2) = (f(x - 2.0 * h), f(x - h), f(x + h), f(x + 2.0 * h));
    match order {
        DiffOrder::First => (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h),
        DiffOrder::Second => {
            let f0 = f(x);
            (-m2 + 16.0 * m1 - 30.0 * f0 + 16.0 * p1 - p2) / (12.0 * h * h)
        }
    }
}

/// Fourth-order one-sided first derivative using samples on one side of `x`
/// only (for kinks).
pub fn one_sided_diff<F: Fn(f64) -> f64>(f: F, x: f64, side: Side, h: f64) -> f64 {
    let s = match side {
        Side::Right => h,
        Side::Left => -h,
    };
    let v: [f64; 5] = std::array::from_fn(|k| f(x + k as f64 * s));
    (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..10_000 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!(close(s.value(), 1e-12, 1e-24));
    }

    #[test]
    fn scan_sqrt_two() {
        let b = bracket_scan(plain(|x| x * x - 2.0), 0.0, 2.0, 0.1).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].contains(std::f64::consts::SQRT_2));
    }

    #[test]
    fn scan_cosine_zeros() {
        let b = bracket_scan(plain(f64::cos), 0.0, 7.0, 0.05).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b[0].contains(std::f64::consts::FRAC_PI_2));
        assert!(b[1].contains(3.0 * std::f64::consts::FRAC_PI_2));
    }

    #[test]
    fn scan_reports_exact_grid_zero_once() {
        // zero exactly at the grid point 0.0; neighbours change sign
        let b = bracket_scan(plain(|x| x * x * x), -1.0, 1.0, 0.25).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].is_degenerate());
        let r = brent_root(plain(|x| x * x * x), &b[0], 1e-12).unwrap();
        assert_eq!(r.root, 0.0);
        // tangential zero without sign change is still reported
        let t = bracket_scan(plain(|x| x * x), -1.0, 1.0, 0.5).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[0].is_degenerate());
    }

    #[test]
    fn scan_propagates_evaluation_errors_with_location() {
        let err = bracket_scan(
            |x: f64| if x > 0.5 { Err("boom") } else { Ok(x) },
            0.0,
            1.0,
            0.25,
        )
        .unwrap_err();
        match err {
            NumericsError::Evaluation { x, .. } => assert_eq!(x, 0.75),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn scan_rejects_bad_input() {
        assert!(bracket_scan(plain(|x| x), 1.0, 0.0, 0.1).is_err());
        assert!(bracket_scan(plain(|x| x), 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn brent_sqrt_two() {
        let b = Bracket::new(1.0, 2.0, -1.0, 2.0).unwrap();
        let r = brent_root(plain(|x| x * x - 2.0), &b, 1e-15).unwrap();
        assert!(close(r.root, 1.4142135623730951, 4e-16));
        assert!(b.contains(r.root));
    }

    #[test]
    fn brent_refinement_is_idempotent() {
        let f = plain(|x: f64| x.exp() - 3.0);
        let tol = 1e-10;
        let b = Bracket::new(0.0, 2.0, f(0.0).unwrap(), f(2.0).unwrap()).unwrap();
        let r = brent_root(&f, &b, tol).unwrap();
        let lo = r.root - 10.0 * tol;
        let hi = r.root + 10.0 * tol;
        let b2 = Bracket::new(lo, hi, f(lo).unwrap(), f(hi).unwrap()).unwrap();
        let r2 = brent_root(&f, &b2, tol).unwrap();
        assert!(close(r.root, r2.root, tol));
    }

    #[test]
    fn bracket_validation() {
        assert!(Bracket::new(0.0, 1.0, 1.0, 2.0).is_err());
        assert!(Bracket::new(1.0, 0.0, -1.0, 2.0).is_err());
    }

    #[test]
    fn simpson_polynomial_and_gaussian() {
        let v = integrate_adaptive(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!(close(v, 1.0 / 3.0, 1e-12));
        let g = integrate_adaptive(|x| (-x * x).exp(), -8.0, 8.0, 1e-12).unwrap();
        assert!(close(g, std::f64::consts::PI.sqrt(), 1e-10));
    }

    #[test]
    fn simpson_smoke_suite() {
        use std::f64::consts::PI;
        let cases: Vec<(Box<dyn Fn(f64) -> f64>, f64, f64, f64)> = vec![
            (Box::new(|x| x.sin()), 0.0, PI, 2.0),
            (Box::new(|x| x.cos()), 0.0, PI / 2.0, 1.0),
            (Box::new(|x| x.exp()), 0.0, 1.0, std::f64::consts::E - 1.0),
            (Box::new(|x| 1.0 / x), 1.0, 2.0, 2f64.ln()),
            (Box::new(|x| 1.0 / (1.0 + x * x)), 0.0, 1.0, PI / 4.0),
            (Box::new(|x| x.powi(5)), -1.0, 2.0, (64.0 - 1.0) / 6.0),
            (Box::new(|x| x * (1.0 + x).ln()), 0.0, 1.0, 0.25),
            (Box::new(|x| (x * x).sin()), 0.0, 0.0 + 1.0, 0.31026830172338110),
            (Box::new(|x| x * (-x).exp()), 0.0, 30.0, 1.0 - 31.0 * (-30f64).exp()),
            (Box::new(|x| x.abs()), -1.0, 2.0, 2.5),
        ];
        for (f, a, b, exact) in cases {
            let v = integrate_adaptive(f, a, b, 1e-11).unwrap();
            assert!(close(v, exact, 1e-9), "{v} vs {exact}");
        }
    }

    #[test]
    fn simpson_reports_non_finite() {
        assert!(integrate_adaptive(|x| 1.0 / x, -1.0, 1.0, 1e-8).is_err());
    }

    #[test]
    fn half_line_quadrature() {
        let g = integrate_half_line(|t| (-t * t).exp(), 1e-15).unwrap();
        assert!(close(g, 0.5 * std::f64::consts::PI.sqrt(), 1e-15));
        // Gamma(0.3) with the t^{-0.7} endpoint singularity
        let g = integrate_half_line(|t| t.powf(-0.7) * (-t).exp(), 1e-14).unwrap();
        assert!((g - 2.9915689876875906).abs() < 1e-13 * 3.0);
    }

    #[test]
    fn jacobi_two_by_two() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = jacobi_eigen(&m).unwrap();
        assert!(close(e.values[0], 1.0, 1e-14));
        assert!(close(e.values[1], 3.0, 1e-14));
    }

    #[test]
    fn jacobi_diagonal_is_fixed() {
        let m = Matrix::from_diagonal(&[0.5, 1.5, 2.5]);
        let e = jacobi_eigen(&m).unwrap();
        assert_eq!(e.values, vec![0.5, 1.5, 2.5]);
        assert_eq!(e.vectors, Matrix::identity(3));
    }

    #[test]
    fn jacobi_rejects_asymmetric() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(jacobi_eigen(&m), Err(NumericsError::NotSymmetric(_))));
        let r = Matrix::zeros(2, 3);
        assert!(jacobi_eigen(&r).is_err());
    }

    #[test]
    fn finite_differences() {
        assert!(close(finite_diff(|x| x * x, 3.7, DiffOrder::Second, 1e-3), 2.0, 1e-8));
        assert!(close(finite_diff(f64::sin, 0.0, DiffOrder::First, 1e-5), 1.0, 1e-9));
        let d = one_sided_diff(|x: f64| x.abs(), 0.0, Side::Right, 1e-4);
        assert!(close(d, 1.0, 1e-9));
        let d = one_sided_diff(|x: f64| x.abs(), 0.0, Side::Left, 1e-4);
        assert!(close(d, -1.0, 1e-9));
    }
}
