//! Full-rank lattices in Q^n kept in the canonical form produced by integral
//! Gaussian elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::arith::{
    dot_mixed, floor, graded_colex_cmp, integral_gaussian_eliminate, invert, lcm_denominators, rat_int,
    to_rational, IntVector, Rational, RationalMatrix, RationalVector,
};
use crate::error::{Error, Result};

/// A full-rank lattice. The basis rows are upper triangular with a positive
/// diagonal, so structural equality coincides with lattice equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    basis: RationalMatrix,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{:?}", self.basis)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .rows()
            .iter()
            .map(|r| format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "Λ({})", rows.join(","))
    }
}

impl Lattice {
    /// Lattice generated by rational vectors spanning Q^n.
    pub fn from_generators(vectors: &[RationalVector]) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::NotFullRank { rank: 0, dim: 0 });
        };
        let dim = first.len();
        let m = RationalMatrix::with_cols(vectors.to_vec(), dim)?;
        let reduced = integral_gaussian_eliminate(&m).drop_zero_rows();
        if reduced.nrows() != dim {
            return Err(Error::NotFullRank { rank: reduced.nrows(), dim });
        }
        Ok(Lattice { basis: reduced })
    }

    /// Lattice generated by integer vectors spanning Q^n.
    pub fn from_int_generators(vectors: &[IntVector]) -> Result<Self> {
        Self::from_generators(&vectors.iter().map(|v| to_rational(v)).collect::<Vec<_>>())
    }

    /// The standard lattice Z^n.
    pub fn standard(n: usize) -> Self {
        Lattice { basis: RationalMatrix::identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Canonical basis, one lattice vector per row.
    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn is_standard(&self) -> bool {
        self.basis == RationalMatrix::identity(self.dim())
    }

    /// Whether the lattice is contained in Z^n.
    pub fn is_integral(&self) -> bool {
        self.basis.is_integral()
    }

    /// Index of the lattice in Z^n (the product of the diagonal entries).
    /// Only meaningful for integral lattices.
    pub fn index(&self) -> BigInt {
        (0..self.dim()).fold(BigInt::one(), |acc, i| acc * self.basis.get(i, i).to_integer())
    }

    /// Coordinates of `v` with respect to the basis rows.
    pub fn coordinates(&self, v: &[Rational]) -> RationalVector {
        let n = self.dim();
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(n);
        for i in 0..n {
            let c = &rest[i] / self.basis.get(i, i);
            if !c.is_zero() {
                for j in i..n {
                    let delta = &c * self.basis.get(i, j);
                    rest[j] -= delta;
                }
            }
            coords.push(c);
        }
        coords
    }

    /// Whether `v` belongs to the lattice.
    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).iter().all(|c| c.is_integer())
    }

    /// Whether the integer vector `v` belongs to the lattice.
    pub fn contains_int(&self, v: &[BigInt]) -> bool {
        self.contains(&to_rational(v))
    }

    /// Whether every vector of `self` belongs to `other`.
    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.basis.rows().iter().all(|r| other.contains(r))
    }

    /// Dual lattice: vectors with integral scalar products against the lattice.
    pub fn dual(&self) -> Lattice {
        let inv = invert(&self.basis).expect("lattice basis is invertible");
        let m = inv.transpose();
        Lattice { basis: integral_gaussian_eliminate(&m) }
    }

    /// Smallest lattice containing both lattices.
    pub fn refine(&self, other: &Lattice) -> Lattice {
        let mut rows = self.basis.rows().to_vec();
        rows.extend(other.basis.rows().iter().cloned());
        let m = RationalMatrix::with_cols(rows, self.dim()).expect("equal dimensions");
        Lattice { basis: integral_gaussian_eliminate(&m).drop_zero_rows() }
    }

    /// Intersection of two lattices, computed as the dual of the refinement of
    /// the duals.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        self.dual().refine(&other.dual()).dual()
    }

    /// Canonical representative of `v` modulo the lattice: each coordinate is
    /// brought into `[0, diagonal entry)` by subtracting basis rows.
    pub fn reduce(&self, v: &[Rational]) -> RationalVector {
        let n = self.dim();
        let mut out = v.to_vec();
        for i in 0..n {
            let d = self.basis.get(i, i);
            let q = floor(&(&out[i] / d));
            if !q.is_zero() {
                let qr = rat_int(&q);
                for j in i..n {
                    let delta = &qr * self.basis.get(i, j);
                    out[j] -= delta;
                }
            }
        }
        out
    }

    /// Canonical representative of an integer vector modulo an integral lattice.
    pub fn reduce_int(&self, v: &[BigInt]) -> IntVector {
        let n = self.dim();
        let mut out = v.to_vec();
        for i in 0..n {
            let d = self.basis.get(i, i).to_integer();
            let q = out[i].div_floor(&d);
            if !q.is_zero() {
                for j in i..n {
                    let b = self.basis.get(i, j).to_integer();
                    out[j] -= &q * b;
                }
            }
        }
        out
    }

    /// One canonical representative per coset of Z^n / Λ, sorted in graded
    /// colexicographic order.
    pub fn coset_representatives(&self) -> Result<Vec<IntVector>> {
        if !self.is_integral() {
            return Err(Error::NotIntegerSublattice);
        }
        let diag: Vec<BigInt> = (0..self.dim()).map(|i| self.basis.get(i, i).to_integer()).collect();
        let mut reps: Vec<IntVector> = vec![Vec::new()];
        for d in &diag {
            let mut next = Vec::new();
            for r in &reps {
                let mut k = BigInt::zero();
                while &k < d {
                    let mut v = r.clone();
                    v.push(k.clone());
                    next.push(v);
                    k += 1;
                }
            }
            reps = next;
        }
        reps.sort_by(|a, b| graded_colex_cmp(a, b));
        Ok(reps)
    }
}

/// Ω(a, Λ): the vectors γ of Λ with ⟨a, γ⟩ integral. The vector `a` is
/// appended to a basis of the dual lattice, the result is reduced, the zero row
/// dropped, and the dual taken again.
pub fn omega_sublattice(a: &[Rational], lattice: &Lattice) -> Lattice {
    let dual = lattice.dual();
    let mut rows = dual.basis.rows().to_vec();
    rows.push(a.to_vec());
    let m = RationalMatrix::with_cols(rows, lattice.dim()).expect("equal dimensions");
    let reduced = integral_gaussian_eliminate(&m).drop_zero_rows();
    Lattice { basis: reduced }.dual()
}

/// Ψ(b, α, Λ, Θ): the vectors γ of Θ with ⟨b, γ⟩·α ∈ Λ.
///
/// With ν the coordinates of α in the basis of Λ, written as (p/q)·u for a
/// primitive integer vector u, the condition reads ⟨(p/q)·b, γ⟩ ∈ Z, so the
/// result is Ω((p/q)·b, Θ).
pub fn psi_sublattice(b: &[Rational], alpha: &[BigInt], lattice: &Lattice, theta: &Lattice) -> Result<Lattice> {
    if alpha.iter().all(|x| x.is_zero()) {
        return Err(Error::DegenerateDirection);
    }
    let nu = lattice.coordinates(&to_rational(alpha));
    let q = lcm_denominators(&nu);
    let numerators: Vec<BigInt> = nu.iter().map(|x| (x * rat_int(&q)).to_integer()).collect();
    let p = numerators.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).abs();
    let scale = Rational::new(p, q);
    let scaled: RationalVector = b.iter().map(|x| x * &scale).collect();
    Ok(omega_sublattice(&scaled, theta))
}

/// Whether ⟨a, γ⟩ is an integer (helper for brute-force checks).
pub fn pairs_integrally(a: &[Rational], gamma: &[BigInt]) -> bool {
    dot_mixed(a, gamma).is_integer()
}
