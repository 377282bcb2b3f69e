//! Exact integer and rational arithmetic: vectors, matrices, row reduction and
//! the integral Gaussian elimination used to canonicalize lattices.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;
/// Integer vector of ambient dimension `n`.
pub type IntVector = Vec<BigInt>;
/// Rational vector of ambient dimension `n`.
pub type RationalVector = Vec<Rational>;

/// Builds a big integer from a machine integer.
pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Builds the rational `n / d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the rational with integer value `v`.
pub fn rat_int(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// Builds an integer vector from machine integers.
pub fn ivec(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Builds a rational vector from machine integers.
pub fn rvec(v: &[i64]) -> RationalVector {
    v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
}

/// Converts an integer vector into a rational one.
pub fn to_rational(v: &[BigInt]) -> RationalVector {
    v.iter().map(rat_int).collect()
}

/// Converts a rational vector with integral entries into an integer vector.
pub fn to_integer(v: &[Rational]) -> Option<IntVector> {
    v.iter()
        .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
        .collect()
}

/// Exact scalar product of two rational vectors.
pub fn dot(u: &[Rational], v: &[Rational]) -> Result<Rational> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    Ok(u.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
}

/// Scalar product of two integer vectors of equal length.
pub fn dot_int(u: &[BigInt], v: &[BigInt]) -> BigInt {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
}

/// Scalar product of a rational vector with an integer vector.
pub fn dot_mixed(u: &[Rational], v: &[BigInt]) -> Rational {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// Largest integer not exceeding `r`.
pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// Least common multiple of the denominators of `v` (1 for an empty vector).
pub fn lcm_denominators<'a>(v: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    v.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Greatest common divisor of the entries of `v` (0 for the zero vector).
pub fn gcd_all<'a>(v: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    v.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Divides an integer vector by the gcd of its entries, keeping its direction.
pub fn primitive(v: &[BigInt]) -> IntVector {
    let g = gcd_all(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Scales a rational vector by a positive factor into a primitive integer vector.
pub fn primitive_from_rational(v: &[Rational]) -> IntVector {
    let l = lcm_denominators(v);
    let scaled: IntVector = v.iter().map(|x| (x * rat_int(&l)).to_integer()).collect();
    primitive(&scaled)
}

/// Total order on vectors: smaller coordinate sum first; on equal sums, the
/// vector with the larger entry in the last coordinate where the two differ is
/// the larger one.
pub fn graded_colex_cmp<T>(a: &[T], b: &[T]) -> Ordering
where
    T: Ord + Clone + Zero,
{
    let sa = a.iter().fold(T::zero(), |acc, x| acc + x.clone());
    let sb = b.iter().fold(T::zero(), |acc, x| acc + x.clone());
    match sa.cmp(&sb) {
        Ordering::Equal => {}
        other => return other,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Dense matrix with exact rational entries, stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: Vec<RationalVector>,
    ncols: usize,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        write!(f, "{rows:?}")
    }
}

impl RationalMatrix {
    /// Builds a matrix from rows of equal length.
    pub fn new(rows: Vec<RationalVector>) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch { expected: ncols, found: bad.len() });
        }
        Ok(RationalMatrix { rows, ncols })
    }

    /// Builds a matrix with the given number of columns (useful for zero rows).
    pub fn with_cols(rows: Vec<RationalVector>, ncols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch { expected: ncols, found: bad.len() });
        }
        Ok(RationalMatrix { rows, ncols })
    }

    /// Builds a matrix from integer rows.
    pub fn from_int_rows(rows: &[IntVector]) -> Result<Self> {
        Self::new(rows.iter().map(|r| to_rational(r)).collect())
    }

    /// Builds a matrix from machine-integer rows; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| rvec(r)).collect()).expect("ragged matrix literal")
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        RationalMatrix { rows, ncols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[RationalVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<RationalVector> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &RationalVector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        RationalMatrix { rows, ncols: self.nrows() }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &RationalMatrix) -> Result<Self> {
        if self.ncols != other.nrows() {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: other.nrows() });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols)
                    .map(|j| {
                        r.iter()
                            .zip(&other.rows)
                            .fold(Rational::zero(), |acc, (a, orow)| acc + a * &orow[j])
                    })
                    .collect()
            })
            .collect();
        Ok(RationalMatrix { rows, ncols: other.ncols })
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<RationalVector> {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    /// Whether every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|x| x.is_integer()))
    }

    /// Rows with at least one nonzero entry.
    pub fn drop_zero_rows(&self) -> Self {
        let rows = self.rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
        RationalMatrix { rows, ncols: self.ncols }
    }
}

/// Reduced row-echelon form over Q, a basis of the null space, and the rank.
pub fn row_echelon(m: &RationalMatrix) -> (RationalMatrix, Vec<RationalVector>, usize) {
    let mut rows = m.rows.clone();
    let ncols = m.ncols;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..ncols {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[i][free].clone();
        }
        kernel.push(v);
    }
    (RationalMatrix { rows, ncols }, kernel, rank)
}

/// Rank of a list of rational vectors.
pub fn rank(vectors: &[RationalVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = RationalMatrix::new(vectors.to_vec()).expect("vectors of equal length");
    row_echelon(&m).2
}

/// Rank of a list of integer vectors.
pub fn rank_int(vectors: &[IntVector]) -> usize {
    rank(&vectors.iter().map(|v| to_rational(v)).collect::<Vec<_>>())
}

/// Exact inverse of a square matrix.
pub fn invert(m: &RationalMatrix) -> Result<RationalMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let n = m.nrows();
    let augmented: Vec<RationalVector> = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let (ech, _, _) = row_echelon(&RationalMatrix { rows: augmented, ncols: 2 * n });
    for i in 0..n {
        if !ech.rows[i][i].is_one() {
            return Err(Error::SingularMatrix);
        }
    }
    let rows = ech.rows.into_iter().map(|r| r[n..].to_vec()).collect();
    Ok(RationalMatrix { rows, ncols: n })
}

/// Integral Gaussian elimination by rows.
///
/// The rows are scaled by the common denominator `d`, reduced with Euclidean
/// steps below each pivot, reduced modulo the pivot above it, and finally
/// divided by `d`. For an invertible input the result is upper triangular with
/// positive diagonal and entries above the diagonal in `[0, pivot)`. Rank
/// deficient inputs produce trailing zero rows.
pub fn integral_gaussian_eliminate(m: &RationalMatrix) -> RationalMatrix {
    let d = lcm_denominators(m.rows.iter().flatten());
    let dr = rat_int(&d);
    let mut rows: Vec<Vec<BigInt>> = m
        .rows
        .iter()
        .map(|r| r.iter().map(|x| (x * &dr).to_integer()).collect())
        .collect();
    let nrows = rows.len();
    let mut i = 0;
    for j in 0..m.ncols {
        if i >= nrows {
            break;
        }
        let Some(p) = (i..nrows).find(|&k| !rows[k][j].is_zero()) else {
            continue;
        };
        rows.swap(i, p);
        if rows[i][j].is_negative() {
            for x in rows[i].iter_mut() {
                *x = -&*x;
            }
        }
        let mut k = i + 1;
        while k < nrows {
            let x = rows[i][j].clone();
            let y = rows[k][j].clone();
            let (q, r) = y.div_mod_floor(&x);
            if q.is_zero() && r.is_zero() {
                k += 1;
                continue;
            }
            if q.is_zero() {
                rows.swap(i, k);
                continue;
            }
            let pivot_row = rows[i].clone();
            for (a, b) in rows[k].iter_mut().zip(&pivot_row) {
                *a -= &q * b;
            }
            if r.is_zero() {
                k += 1;
            }
        }
        let x = rows[i][j].clone();
        let pivot_row = rows[i].clone();
        for row in rows.iter_mut().take(i) {
            let q = row[j].div_floor(&x);
            if !q.is_zero() {
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a -= &q * b;
                }
            }
        }
        i += 1;
    }
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| Rational::new(x, d.clone())).collect())
        .collect();
    RationalMatrix { rows, ncols: m.ncols }
}

/// Determinant of a square rational matrix.
pub fn determinant(m: &RationalMatrix) -> Rational {
    let n = m.nrows();
    let mut rows = m.rows.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            rows.swap(p, c);
            det = -det;
        }
        det *= &rows[c][c];
        let inv = rows[c][c].recip();
        for i in c + 1..n {
            if !rows[i][c].is_zero() {
                let factor = &rows[i][c] * &inv;
                for j in c..n {
                    let delta = &factor * &rows[c][j];
                    rows[i][j] -= delta;
                }
            }
        }
    }
    det
}

/// Determinant of a square integer matrix given by rows.
pub fn determinant_int(rows: &[IntVector]) -> BigInt {
    // Fraction-free Bareiss elimination.
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Primitive integer normal of the hyperplane spanned by `n - 1` vectors in
/// dimension `n`, computed from signed maximal minors. Returns the zero vector
/// when the vectors are dependent.
pub fn hyperplane_normal(vectors: &[IntVector], n: usize) -> IntVector {
    debug_assert_eq!(vectors.len() + 1, n);
    let mut normal = Vec::with_capacity(n);
    for skip in 0..n {
        let minor: Vec<IntVector> = vectors
            .iter()
            .map(|v| v.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, x)| x.clone()).collect())
            .collect();
        let det = if n == 1 { BigInt::one() } else { determinant_int(&minor) };
        normal.push(if skip % 2 == 0 { det } else { -det });
    }
    primitive(&normal)
}
