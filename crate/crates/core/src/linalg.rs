//! Exact linear algebra over `Z` and `Q`: Hermite normal form, fraction-free
//! determinants, exact solving, integral points of rational lattices and
//! change-of-basis determinants.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row of length {} in a {cols}-column matrix",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(IntMatrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rows restricted to the given columns.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn stack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension("column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row of length {} in a {cols}-column matrix",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(RatMatrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Lcm of all denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.data
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// `scale * self`, which must be integral.
    pub fn scaled(&self, scale: &BigInt) -> Result<IntMatrix> {
        let s = BigRational::from_integer(scale.clone());
        let data = self
            .data
            .iter()
            .map(|x| {
                let v = x * &s;
                if v.is_integer() {
                    Ok(v.to_integer())
                } else {
                    Err(Error::Inconsistent(format!(
                        "{x} times {scale} is not integral"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Each row multiplied by the lcm of its own denominators, together with
    /// those row scales.
    pub fn row_scaled(&self) -> (IntMatrix, Vec<BigInt>) {
        let mut scales = Vec::with_capacity(self.rows);
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            let row = self.row(i);
            let d = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            for x in row {
                data.push((x.numer() * &d) / x.denom());
            }
            scales.push(d);
        }
        (
            IntMatrix {
                rows: self.rows,
                cols: self.cols,
                data,
            },
            scales,
        )
    }

    /// The unique `c` with `c * self = x`, by Gauss-Jordan elimination over
    /// `Q`. Rows must be independent.
    pub fn solve_left(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        if x.len() != self.cols {
            return Err(Error::Dimension("right-hand side length".into()));
        }
        // Solve A^T c = x: columns of the augmented system are the rows of A.
        let k = self.rows;
        let n = self.cols;
        let mut sys: Vec<Vec<BigRational>> = (0..n)
            .map(|j| {
                let mut r: Vec<BigRational> =
                    (0..k).map(|i| self.data[i * n + j].clone()).collect();
                r.push(x[j].clone());
                r
            })
            .collect();
        let mut pivot_row = 0;
        for col in 0..k {
            let Some(p) = (pivot_row..n).find(|&r| !sys[r][col].is_zero()) else {
                return Err(Error::DependentRows);
            };
            sys.swap(pivot_row, p);
            let inv = sys[pivot_row][col].recip();
            for v in sys[pivot_row].iter_mut().skip(col) {
                *v *= &inv;
            }
            let prow = sys[pivot_row].clone();
            for (r, row) in sys.iter_mut().enumerate() {
                if r == pivot_row || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&prow).skip(col) {
                    *v -= &f * pv;
                }
            }
            pivot_row += 1;
        }
        if sys[k..].iter().any(|r| !r[k].is_zero()) {
            return Err(Error::NotInSpan);
        }
        Ok(sys[..k].iter().map(|r| r[k].clone()).collect())
    }
}

/// Row-style Hermite normal form: upper echelon, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are dropped, so the
/// result has one row per unit of rank.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let cols = m.cols();
    let mut a = m.to_rows();
    let nrows = a.len();
    let mut r = 0;
    for j in 0..cols {
        if r == nrows {
            break;
        }
        loop {
            let piv = (r..nrows)
                .filter(|&i| !a[i][j].is_zero())
                .min_by(|&x, &y| a[x][j].magnitude().cmp(a[y][j].magnitude()));
            let Some(p) = piv else { break };
            a.swap(r, p);
            let (head, tail) = a.split_at_mut(r + 1);
            let prow = &head[r];
            let mut clean = true;
            for row in tail.iter_mut() {
                if row[j].is_zero() {
                    continue;
                }
                let q = row[j].div_floor(&prow[j]);
                sub_multiple(row, prow, &q, j);
                if !row[j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r < nrows && !a[r][j].is_zero() {
            if a[r][j].is_negative() {
                for v in a[r].iter_mut().skip(j) {
                    *v = -&*v;
                }
            }
            let (head, tail) = a.split_at_mut(r);
            let prow = &tail[0];
            for row in head.iter_mut() {
                let q = row[j].div_floor(&prow[j]);
                if !q.is_zero() {
                    sub_multiple(row, prow, &q, j);
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    IntMatrix::from_rows(a, cols).expect("rectangular")
}

fn sub_multiple(row: &mut [BigInt], prow: &[BigInt], q: &BigInt, from: usize) {
    for (v, p) in row.iter_mut().zip(prow).skip(from) {
        if !p.is_zero() {
            *v -= q * p;
        }
    }
}

/// Whether `v` lies in the row lattice of a matrix already in Hermite
/// normal form.
pub fn hnf_contains(h: &IntMatrix, v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    let mut col = 0;
    for i in 0..h.rows() {
        let row = h.row(i);
        while row[col].is_zero() {
            if !v[col].is_zero() {
                return false;
            }
            col += 1;
        }
        let (q, rem) = v[col].div_rem(&row[col]);
        if !rem.is_zero() {
            return false;
        }
        sub_multiple(&mut v, row, &q, col);
        col += 1;
    }
    v.iter().all(Zero::is_zero)
}

/// Hermite normal form of the full-rank lattice spanned by `gens` together
/// with `d * Z^n`, computed with every entry kept modulo `d`.
///
/// Returns `n` rows; row `j` has its pivot in column `j` and that pivot
/// divides `d`.
pub fn hnf_modular(gens: &[Vec<i64>], n: usize, d: i64) -> Vec<Vec<i64>> {
    assert!(d > 0);
    let dd = d as i128;
    let reduce = |row: &mut Vec<i128>| {
        for v in row.iter_mut() {
            *v = v.rem_euclid(dd);
        }
    };
    let mut work: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| {
            let mut r: Vec<i128> = g.iter().map(|&x| x as i128).collect();
            reduce(&mut r);
            r
        })
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut out: Vec<Vec<i128>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut pivot: Option<Vec<i128>> = None;
        let mut rest = Vec::with_capacity(work.len());
        for mut row in work.drain(..) {
            if row[j] == 0 {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(mut p) => {
                    let (g, s, t) = ext_gcd_i128(p[j], row[j]);
                    let (pa, ra) = (p[j] / g, row[j] / g);
                    for k in j..n {
                        let (x, y) = (p[k], row[k]);
                        p[k] = (s * x + t * y).rem_euclid(dd);
                        row[k] = (pa * y - ra * x).rem_euclid(dd);
                    }
                    if row.iter().any(|&x| x != 0) {
                        rest.push(row);
                    }
                    pivot = Some(p);
                }
            }
        }
        let row = match pivot {
            None => {
                let mut e = vec![0i128; n];
                e[j] = dd;
                e
            }
            Some(mut p) => {
                // fold in d*e_j: the pair (p, d e_j) becomes
                // (s p + t d e_j, (d/g) p - (p_j/g) d e_j)
                let (g, s, _) = ext_gcd_i128(p[j], dd);
                let mut extra: Vec<i128> =
                    p.iter().map(|&x| (x * (dd / g)).rem_euclid(dd)).collect();
                extra[j] = 0;
                if extra.iter().any(|&x| x != 0) {
                    rest.push(extra);
                }
                for v in p.iter_mut().skip(j) {
                    *v = (*v * s).rem_euclid(dd);
                }
                p[j] = g;
                p
            }
        };
        out.push(row);
        work = rest;
    }
    // reduce above pivots, left to right; every pivot divides d, so the
    // later columns may be taken modulo d again
    for j in 0..n {
        let pj = out[j][j];
        let (head, tail) = out.split_at_mut(j);
        let prow = &tail[0];
        for row in head.iter_mut() {
            let q = row[j].div_euclid(pj);
            if q != 0 {
                for k in j..n {
                    row[k] = (row[k] - q * prow[k]).rem_euclid(dd);
                }
            }
        }
    }
    out.into_iter()
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect()
}

fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination with row swaps
/// on zero pivots.
pub fn det_bareiss(m: &IntMatrix) -> Result<BigInt> {
    bareiss(m, false)
}

/// Same as [`det_bareiss`], updating rows in parallel at each elimination
/// step. The result does not depend on the thread count.
pub fn det_bareiss_parallel(m: &IntMatrix) -> Result<BigInt> {
    bareiss(m, true)
}

fn bareiss(m: &IntMatrix, parallel: bool) -> Result<BigInt> {
    if m.rows() != m.cols() {
        return Err(Error::Dimension(format!(
            "{}x{} is not square",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_rows();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let step = |row: &mut Vec<BigInt>| {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = &row[j] * &pivot_row[k] - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[k] = BigInt::zero();
        };
        if parallel {
            tail.par_iter_mut().for_each(step);
        } else {
            tail.iter_mut().for_each(step);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Column rank profile: the lexicographically first set of columns on which
/// the rows of `m` are independent. Its length is the rank.
pub fn rank_profile(m: &IntMatrix) -> Vec<usize> {
    let mut a = m.to_rows();
    let (nr, nc) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut prev = BigInt::one();
    for j in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !a[i][j].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        tail.par_iter_mut().for_each(|row| {
            let lead = row[j].clone();
            for c in j + 1..nc {
                let v = &row[c] * &prow[j] - &lead * &prow[c];
                row[c] = if prev.is_one() { v } else { v / &prev };
            }
            row[j] = BigInt::zero();
        });
        prev = a[r][j].clone();
        pivots.push(j);
        r += 1;
    }
    pivots
}

pub fn rank(m: &IntMatrix) -> usize {
    rank_profile(m).len()
}

/// Basis, in Hermite normal form, of `L ∩ Z^n` where `L` is the lattice
/// spanned by the rows of `b`.
pub fn lattice_intersect_integral(b: &RatMatrix) -> Result<IntMatrix> {
    let k = b.rows();
    let n = b.cols();
    let d = b.common_denominator();
    let scaled = b.scaled(&d)?;
    if rank(&scaled) != k {
        return Err(Error::DependentRows);
    }
    if d.is_one() {
        return Ok(hnf(&scaled));
    }
    let dm = d
        .to_i64()
        .filter(|&x| x < (1 << 40))
        .ok_or_else(|| Error::Inconsistent(format!("denominator {d} too large")))?;
    // c * B' = 0 (mod d) for the integer scaling B' = d*B; the solution
    // lattice contains d*Z^k, so work in Z^{n+k} modulo d.
    let gens: Vec<Vec<i64>> = (0..k)
        .map(|i| {
            let mut row: Vec<i64> = scaled
                .row(i)
                .iter()
                .map(|x| x.mod_floor(&d).to_i64().expect("reduced"))
                .collect();
            row.extend((0..k).map(|c| i64::from(c == i)));
            row
        })
        .collect();
    let h = hnf_modular(&gens, n + k, dm);
    let mut rows = Vec::with_capacity(k);
    for hr in &h[n..] {
        let c = &hr[n..];
        let mut v = vec![BigInt::zero(); n];
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            let ci = BigInt::from(ci);
            for (vj, bj) in v.iter_mut().zip(scaled.row(i)) {
                *vj += &ci * bj;
            }
        }
        for vj in v.iter_mut() {
            let (q, r) = vj.div_rem(&d);
            if !r.is_zero() {
                return Err(Error::Inconsistent("kernel vector not divisible".into()));
            }
            *vj = q;
        }
        rows.push(v);
    }
    Ok(hnf(&IntMatrix::from_rows(rows, n)?))
}

/// Determinant of the change-of-basis matrix `T` with `rows(b) = T * rows(a)`.
pub fn transition_determinant(a: &RatMatrix, b: &RatMatrix) -> Result<BigRational> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Dimension("bases of different shapes".into()));
    }
    let k = a.rows();
    let (ai, a_scales) = a.row_scaled();
    let (bi, b_scales) = b.row_scaled();
    let profile = rank_profile(&ai);
    if profile.len() != k {
        return Err(Error::DependentRows);
    }
    if rank(&ai.stack(&bi)?) != k {
        return Err(Error::SpansDiffer);
    }
    let det_a = det_bareiss(&ai.select_columns(&profile))?;
    let det_b = det_bareiss(&bi.select_columns(&profile))?;
    let sa: BigInt = a_scales.iter().product();
    let sb: BigInt = b_scales.iter().product();
    // det(T) = det(B_P) / det(A_P) with the row scalings undone
    Ok(BigRational::new(det_b * sa, det_a * sb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn im(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Laplace expansion along the first row.
    fn cofactor_det(a: &[Vec<i64>]) -> i64 {
        let n = a.len();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return a[0][0];
        }
        let mut total = 0;
        for j in 0..n {
            if a[0][j] == 0 {
                continue;
            }
            let minor: Vec<Vec<i64>> = a[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            total += sign * a[0][j] * cofactor_det(&minor);
        }
        total
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(hnf(&IntMatrix::identity(3)), IntMatrix::identity(3));
        assert_eq!(
            hnf(&im(&[vec![4, 2], vec![2, 0]])),
            im(&[vec![2, 0], vec![0, 2]])
        );
        assert_eq!(hnf(&im(&[vec![0, 3]])), im(&[vec![0, 3]]));
        assert_eq!(hnf(&im(&[vec![0, -3]])), im(&[vec![0, 3]]));
        assert_eq!(hnf(&im(&[vec![2, 4], vec![1, 2]])), im(&[vec![1, 2]]));
    }

    #[test]
    fn modular_hnf_matches_plain() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(1..6);
            let d = rng.gen_range(2..40i64);
            let gens: Vec<Vec<i64>> = (0..rng.gen_range(0..5))
                .map(|_| (0..n).map(|_| rng.gen_range(-50..50)).collect())
                .collect();
            let mut all = gens.clone();
            for j in 0..n {
                let mut e = vec![0; n];
                e[j] = d;
                all.push(e);
            }
            let expect = hnf(&im(&all));
            let got = hnf_modular(&gens, n, d);
            assert_eq!(im(&got), expect, "gens={gens:?} d={d}");
        }
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_bareiss(&IntMatrix::identity(5)).unwrap(), BigInt::one());
        assert_eq!(
            det_bareiss(&im(&[vec![1, 1], vec![1, -1]])).unwrap(),
            BigInt::from(-2)
        );
        assert_eq!(
            det_bareiss(&im(&[vec![0, 1], vec![1, 0]])).unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            det_bareiss(&im(&[vec![1, 2], vec![2, 4]])).unwrap(),
            BigInt::zero()
        );
        assert!(det_bareiss(&im(&[vec![1, 2]])).is_err());
    }

    #[test]
    fn det_matches_cofactor_on_sign_matrices() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for n in 1..=7 {
            for _ in 0..20 {
                let a: Vec<Vec<i64>> = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
                            .collect()
                    })
                    .collect();
                let expect = cofactor_det(&a);
                let m = im(&a);
                let got = det_bareiss(&m).unwrap();
                assert_eq!(got, BigInt::from(expect));
                assert_eq!(det_bareiss_parallel(&m).unwrap(), got);
                // Hadamard: |det| <= n^(n/2)
                assert!((expect * expect) as u64 <= (n as u64).pow(n as u32));
            }
        }
        let n = 6;
        let a: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-9..10)).collect())
            .collect();
        assert_eq!(
            det_bareiss(&im(&a)).unwrap(),
            BigInt::from(cofactor_det(&a))
        );
    }

    #[test]
    fn intersection_examples() {
        let b =
            RatMatrix::from_rows(vec![vec![q(1, 2), q(1, 2)], vec![q(1, 2), q(-1, 2)]], 2).unwrap();
        assert_eq!(
            lattice_intersect_integral(&b).unwrap(),
            IntMatrix::identity(2)
        );
        let b = RatMatrix::from_rows(vec![vec![q(1, 2), q(1, 2)]], 2).unwrap();
        assert_eq!(lattice_intersect_integral(&b).unwrap(), im(&[vec![1, 1]]));
        let b =
            RatMatrix::from_rows(vec![vec![q(4, 1), q(2, 1)], vec![q(2, 1), q(0, 1)]], 2).unwrap();
        assert_eq!(
            lattice_intersect_integral(&b).unwrap(),
            im(&[vec![2, 0], vec![0, 2]])
        );
        let dep =
            RatMatrix::from_rows(vec![vec![q(1, 2), q(1, 2)], vec![q(1, 1), q(1, 1)]], 2).unwrap();
        assert_eq!(lattice_intersect_integral(&dep), Err(Error::DependentRows));
    }

    #[test]
    fn solve_and_transition() {
        let a = RatMatrix::from_rows(
            vec![
                vec![q(1, 1), q(0, 1), q(1, 1)],
                vec![q(0, 1), q(1, 2), q(0, 1)],
            ],
            3,
        )
        .unwrap();
        let c = a.solve_left(&[q(3, 1), q(1, 1), q(3, 1)]).unwrap();
        assert_eq!(c, vec![q(3, 1), q(2, 1)]);
        assert_eq!(
            a.solve_left(&[q(1, 1), q(0, 1), q(0, 1)]),
            Err(Error::NotInSpan)
        );
        assert_eq!(transition_determinant(&a, &a).unwrap(), q(1, 1));
        let b = RatMatrix::from_rows(
            vec![
                vec![q(1, 1), q(1, 1), q(1, 1)],
                vec![q(0, 1), q(3, 2), q(0, 1)],
            ],
            3,
        )
        .unwrap();
        // b0 = a0 + 2 a1, b1 = 3 a1
        assert_eq!(transition_determinant(&a, &b).unwrap(), q(3, 1));
        let c = RatMatrix::from_rows(
            vec![
                vec![q(1, 1), q(0, 1), q(0, 1)],
                vec![q(0, 1), q(1, 1), q(0, 1)],
            ],
            3,
        )
        .unwrap();
        assert_eq!(transition_determinant(&a, &c), Err(Error::SpansDiffer));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-20i64..20, c), r)
        })
    }

    proptest! {
        #[test]
        fn hnf_is_canonical_and_preserves_lattice(rows in small_matrix()) {
            let m = im(&rows);
            let h = hnf(&m);
            prop_assert_eq!(hnf(&h), h.clone());
            prop_assert_eq!(h.rows(), rank(&m));
            // every input row is in the HNF lattice, and the HNF of the
            // HNF rows plus the input equals the HNF
            for i in 0..m.rows() {
                prop_assert!(hnf_contains(&h, m.row(i)));
            }
            let hm = hnf(&m.stack(&h).unwrap());
            prop_assert_eq!(hm, h.clone());
            for i in 0..h.rows() {
                let p = h.row(i).iter().position(|x| !x.is_zero()).unwrap();
                prop_assert!(h[(i, p)].is_positive());
                for r in 0..i {
                    prop_assert!(!h[(r, p)].is_negative() && h[(r, p)] < h[(i, p)]);
                }
            }
        }

        #[test]
        fn intersection_contains_integral_points(
            rows in proptest::collection::vec(proptest::collection::vec(-6i64..6, 3), 2),
            den in 1i64..7,
            coeffs in proptest::collection::vec(-8i64..8, 2),
        ) {
            let b = RatMatrix::from_rows(
                rows.iter().map(|r| r.iter().map(|&x| q(x, den)).collect()).collect(), 3).unwrap();
            prop_assume!(rank(&b.scaled(&BigInt::from(den)).unwrap()) == 2);
            let h = lattice_intersect_integral(&b).unwrap();
            // integral and inside the span
            for i in 0..h.rows() {
                let v: Vec<BigRational> = h.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect();
                prop_assert!(b.solve_left(&v).is_ok());
            }
            // the combination d * sum c_i b_i is integral and must be found
            let v: Vec<BigInt> = (0..3)
                .map(|j| BigInt::from(coeffs[0] * rows[0][j] + coeffs[1] * rows[1][j]))
                .collect();
            prop_assert!(hnf_contains(&h, &v));
        }
    }
}
