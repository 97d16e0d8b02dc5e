//! Exact linear algebra over [`Scalar`] matrices.
//!
//! Gaussian elimination (first-nonzero pivoting, so reduced bases are
//! deterministic) for field base rings, and a division-free Berkowitz
//! determinant for arbitrary commutative coefficients.

use crate::error::{Error, Result};
use crate::ring::{Ring, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

pub fn identity(ring: &Ring, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect()
}

pub fn mat_mul(ring: &Ring, a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = if n == 0 { 0 } else { b[0].len() };
    let k = b.len();
    let mut out = vec![vec![ring.zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[l][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&a[i][l].mul(&b[l][j]));
            }
        }
    }
    out
}

pub fn mat_vec(ring: &Ring, a: &Matrix, x: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            let mut acc = ring.zero();
            for (c, xi) in row.iter().zip(x.iter()) {
                if !c.is_zero() && !xi.is_zero() {
                    acc = acc.add(&c.mul(xi));
                }
            }
            acc
        })
        .collect()
}

/// Reduced row echelon form with the pivot columns. Requires a field.
pub fn rref(ring: &Ring, matrix: &Matrix) -> Result<(Matrix, Vec<usize>)> {
    if !ring.is_field() {
        return Err(Error::FieldRequired);
    }
    let mut m = matrix.clone();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero field element");
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    m[i][j] = m[i][j].sub(&f.mul(&m[r][j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    Ok((m, pivots))
}

pub fn rank(ring: &Ring, matrix: &Matrix) -> Result<usize> {
    Ok(rref(ring, matrix)?.1.len())
}

/// Basis of the null space `{x : M x = 0}`, in reduced echelon shape.
pub fn kernel_basis(ring: &Ring, matrix: &Matrix) -> Result<Vec<Vec<Scalar>>> {
    let cols = if matrix.is_empty() { 0 } else { matrix[0].len() };
    let (m, pivots) = rref(ring, matrix)?;
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![ring.zero(); cols];
        v[free] = ring.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = m[row][free].neg();
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Solves `M x = rhs` over a field; `None` when inconsistent.
pub fn solve(ring: &Ring, matrix: &Matrix, rhs: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    let rows = matrix.len();
    let cols = if rows == 0 { 0 } else { matrix[0].len() };
    let mut aug: Matrix = matrix.clone();
    for (row, b) in aug.iter_mut().zip(rhs.iter()) {
        row.push(b.clone());
    }
    let (m, pivots) = rref(ring, &aug)?;
    if pivots.contains(&cols) {
        return Ok(None);
    }
    let mut x = vec![ring.zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][cols].clone();
    }
    Ok(Some(x))
}

/// Matrix inverse over a field; `None` when singular.
pub fn inverse(ring: &Ring, matrix: &Matrix) -> Result<Option<Matrix>> {
    let n = matrix.len();
    let mut aug = matrix.clone();
    for (i, row) in aug.iter_mut().enumerate() {
        for j in 0..n {
            row.push(if i == j { ring.one() } else { ring.zero() });
        }
    }
    let (m, pivots) = rref(ring, &aug)?;
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return Ok(None);
    }
    Ok(Some(m.into_iter().map(|row| row[n..].to_vec()).collect()))
}

/// Division-free determinant (Berkowitz), valid over any commutative ring.
pub fn det_berkowitz(ring: &Ring, matrix: &Matrix) -> Scalar {
    generic_det(
        matrix.len(),
        |i, j| matrix[i][j].clone(),
        &RingOps {
            zero: || ring.zero(),
            one: || ring.one(),
            add: |a: &Scalar, b: &Scalar| a.add(b),
            mul: |a: &Scalar, b: &Scalar| a.mul(b),
            neg: |a: &Scalar| a.neg(),
        },
    )
}

/// Ring operations bundle so the determinant works for scalars and for
/// elements of a commutative coefficient algebra alike.
pub struct RingOps<T, Z, O, A, M, N>
where
    Z: Fn() -> T,
    O: Fn() -> T,
    A: Fn(&T, &T) -> T,
    M: Fn(&T, &T) -> T,
    N: Fn(&T) -> T,
{
    pub zero: Z,
    pub one: O,
    pub add: A,
    pub mul: M,
    pub neg: N,
}

/// Berkowitz determinant with caller-supplied entry access and ring ops.
pub fn generic_det<T, Z, O, A, M, N>(
    n: usize,
    entry: impl Fn(usize, usize) -> T,
    ops: &RingOps<T, Z, O, A, M, N>,
) -> T
where
    T: Clone,
    Z: Fn() -> T,
    O: Fn() -> T,
    A: Fn(&T, &T) -> T,
    M: Fn(&T, &T) -> T,
    N: Fn(&T) -> T,
{
    if n == 0 {
        return (ops.one)();
    }
    // Characteristic polynomial coefficients via the Berkowitz vector chain;
    // det = (-1)^n * c_0.
    let mut coeffs = vec![(ops.one)(), (ops.neg)(&entry(0, 0))];
    for k in 1..n {
        // Toeplitz column for principal submatrix of size k+1:
        // t_0 = 1 (implicit sign handling below), t_1 = -a_kk,
        // t_{j} = -(row_k . A^{j-2} . col_k)
        let akk = entry(k, k);
        let row: Vec<T> = (0..k).map(|j| entry(k, j)).collect();
        let col: Vec<T> = (0..k).map(|i| entry(i, k)).collect();
        let mut t = vec![(ops.one)(), (ops.neg)(&akk)];
        let mut vec_cur = col.clone();
        for _ in 0..k {
            let mut dot = (ops.zero)();
            for i in 0..k {
                dot = (ops.add)(&dot, &(ops.mul)(&row[i], &vec_cur[i]));
            }
            t.push((ops.neg)(&dot));
            let mut next = vec![(ops.zero)(); k];
            for i in 0..k {
                for j in 0..k {
                    next[i] = (ops.add)(&next[i], &(ops.mul)(&entry(i, j), &vec_cur[j]));
                }
            }
            vec_cur = next;
        }
        let mut new_coeffs = vec![(ops.zero)(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            for (j, tj) in t.iter().enumerate() {
                if i + j < new_coeffs.len() {
                    new_coeffs[i + j] = (ops.add)(&new_coeffs[i + j], &(ops.mul)(c, tj));
                }
            }
        }
        new_coeffs.truncate(k + 2);
        coeffs = new_coeffs;
    }
    // coeffs[i] is the coefficient of lambda^(n-i) in det(lambda I - A) up to
    // the leading 1; the constant term is (-1)^n det(A).
    let constant = coeffs[n].clone();
    if n % 2 == 1 {
        (ops.neg)(&constant)
    } else {
        constant
    }
}

/// Whether a square matrix is invertible over its (commutative) base ring.
pub fn is_invertible(ring: &Ring, matrix: &Matrix) -> Result<bool> {
    if matrix.is_empty() {
        return Ok(true);
    }
    if ring.is_field() {
        return Ok(rank(ring, matrix)? == matrix.len());
    }
    Ok(det_berkowitz(ring, matrix).is_invertible())
}
