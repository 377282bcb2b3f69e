//! Quasipolynomials: one polynomial per coset of a full-rank sublattice of
//! Z^n, with their algebra and floor-function elimination.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{dot_mixed, floor, graded_colex_cmp, rat_int, IntVector, Rational};
use crate::error::{Error, Result};
use crate::lattice::{omega_sublattice, psi_sublattice, Lattice};
use crate::poly::Polynomial;

/// A function on Z^n that agrees with a polynomial on each coset of a lattice.
/// Keys are canonical coset representatives; absent keys mean zero.
#[derive(Clone, PartialEq, Eq)]
pub struct QuasiPolynomial {
    lattice: Lattice,
    pieces: BTreeMap<IntVector, Polynomial>,
}

impl fmt::Debug for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl QuasiPolynomial {
    /// Builds a quasipolynomial from pieces keyed by arbitrary coset
    /// representatives; pieces landing on the same coset are added.
    pub fn new(lattice: Lattice, pieces: impl IntoIterator<Item = (IntVector, Polynomial)>) -> Result<Self> {
        if !lattice.is_integral() {
            return Err(Error::NotIntegerSublattice);
        }
        let n = lattice.dim();
        let mut out = QuasiPolynomial { lattice, pieces: BTreeMap::new() };
        for (rep, p) in pieces {
            if rep.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: rep.len() });
            }
            if p.nvars() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.nvars() });
            }
            out.add_piece(rep, &p);
        }
        Ok(out)
    }

    pub fn zero(n: usize) -> Self {
        QuasiPolynomial { lattice: Lattice::standard(n), pieces: BTreeMap::new() }
    }

    /// The polynomial `p` on all of Z^n.
    pub fn from_polynomial(p: Polynomial) -> Self {
        let n = p.nvars();
        let mut out = Self::zero(n);
        out.add_piece(vec![BigInt::zero(); n], &p);
        out
    }

    /// Indicator function of the coset δ + Λ.
    pub fn indicator(delta: &[BigInt], lattice: &Lattice) -> Result<Self> {
        let n = lattice.dim();
        Self::new(lattice.clone(), [(delta.to_vec(), Polynomial::one(n))])
    }

    fn add_piece(&mut self, rep: IntVector, p: &Polynomial) {
        let key = self.lattice.reduce_int(&rep);
        let sum = match self.pieces.get(&key) {
            Some(q) => q + p,
            None => p.clone(),
        };
        if sum.is_zero() {
            self.pieces.remove(&key);
        } else {
            self.pieces.insert(key, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Non-zero pieces in graded colex order of their representatives.
    pub fn pieces(&self) -> Vec<(&IntVector, &Polynomial)> {
        let mut v: Vec<_> = self.pieces.iter().collect();
        v.sort_by(|a, b| graded_colex_cmp(a.0, b.0));
        v
    }

    /// Polynomial on the coset of `gamma`.
    pub fn piece_at(&self, gamma: &[BigInt]) -> Option<&Polynomial> {
        self.pieces.get(&self.lattice.reduce_int(gamma))
    }

    pub fn evaluate(&self, gamma: &[BigInt]) -> Rational {
        self.piece_at(gamma).map_or_else(Rational::zero, |p| p.eval_int(gamma))
    }

    /// The same function written over the finer coset structure of `omega`.
    pub fn coarsen(&self, omega: &Lattice) -> Result<Self> {
        if !omega.is_sublattice_of(&self.lattice) {
            return Err(Error::NotSublattice);
        }
        if omega == &self.lattice {
            return Ok(self.clone());
        }
        let mut out = QuasiPolynomial { lattice: omega.clone(), pieces: BTreeMap::new() };
        for mu in omega.coset_representatives()? {
            if let Some(p) = self.piece_at(&mu) {
                out.pieces.insert(mu, p.clone());
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &QuasiPolynomial) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let common = self.lattice.intersect(&other.lattice);
        let mut out = self.coarsen(&common)?;
        for (rep, p) in other.coarsen(&common)?.pieces {
            out.add_piece(rep, &p);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = QuasiPolynomial { lattice: self.lattice.clone(), pieces: BTreeMap::new() };
        if c.is_zero() {
            return out;
        }
        for (k, p) in &self.pieces {
            out.pieces.insert(k.clone(), p.scale(c));
        }
        out
    }

    /// Applies `f` to every piece; zero results are dropped.
    pub fn map_pieces(&self, mut f: impl FnMut(&IntVector, &Polynomial) -> Polynomial) -> Self {
        let mut out = QuasiPolynomial { lattice: self.lattice.clone(), pieces: BTreeMap::new() };
        for (k, p) in &self.pieces {
            let q = f(k, p);
            if !q.is_zero() {
                out.pieces.insert(k.clone(), q);
            }
        }
        out
    }

    /// Pointwise product with the indicator of δ + Ψ.
    pub fn restrict(&self, delta: &[BigInt], psi: &Lattice) -> Result<Self> {
        let common = self.lattice.intersect(psi);
        let mut out = QuasiPolynomial { lattice: common.clone(), pieces: BTreeMap::new() };
        for mu in common.coset_representatives()? {
            let diff: IntVector = mu.iter().zip(delta).map(|(a, b)| a - b).collect();
            if psi.contains_int(&diff) {
                if let Some(p) = self.piece_at(&mu) {
                    out.pieces.insert(mu, p.clone());
                }
            }
        }
        Ok(out)
    }

    /// Rewrites the function over the coarsest lattice that still separates
    /// distinct pieces: coset shifts that leave every piece unchanged are
    /// merged into the lattice.
    pub fn compress(&self) -> Self {
        let n = self.dim();
        if self.is_zero() {
            return Self::zero(n);
        }
        let reps = self.lattice.coset_representatives().expect("quasipolynomial lattices are integral");
        let zero = Polynomial::zero(n);
        let get = |v: &IntVector| self.pieces.get(v).unwrap_or(&zero);
        let mut generators: Vec<IntVector> =
            self.lattice.basis().rows().iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
        for v in &reps {
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            let periodic = reps.iter().all(|mu| {
                let shifted: IntVector = mu.iter().zip(v).map(|(a, b)| a + b).collect();
                get(&self.lattice.reduce_int(&shifted)) == get(mu)
            });
            if periodic {
                generators.push(v.clone());
            }
        }
        let coarse = Lattice::from_int_generators(&generators).expect("contains a full-rank lattice");
        if coarse == self.lattice {
            return self.clone();
        }
        let mut out = QuasiPolynomial { lattice: coarse.clone(), pieces: BTreeMap::new() };
        for mu in coarse.coset_representatives().expect("integral") {
            if let Some(p) = self.piece_at(&mu) {
                out.pieces.insert(mu, p.clone());
            }
        }
        out
    }

    /// Plain-text rendering: the polynomial itself over Z^n, otherwise the
    /// lattice followed by one line per coset.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.lattice.is_standard() {
            return self.pieces.values().next().expect("non-empty").to_text();
        }
        let mut lines = vec![format!("over {}:", self.lattice)];
        for (rep, p) in self.pieces() {
            lines.push(format!("  {}: {}", crate::cones::fmt_vector(rep), p.to_text()));
        }
        lines.join("\n")
    }
}

/// Indicator of (δ + Ψ) ∩ (ε + Λ), written over Ψ ∩ Λ.
pub fn multiply_indicators(delta: &[BigInt], psi: &Lattice, eps: &[BigInt], lambda: &Lattice) -> Result<QuasiPolynomial> {
    let common = psi.intersect(lambda);
    let n = common.dim();
    let mut pieces = Vec::new();
    for mu in common.coset_representatives()? {
        let d1: IntVector = mu.iter().zip(delta).map(|(a, b)| a - b).collect();
        let d2: IntVector = mu.iter().zip(eps).map(|(a, b)| a - b).collect();
        if psi.contains_int(&d1) && lambda.contains_int(&d2) {
            pieces.push((mu, Polynomial::one(n)));
        }
    }
    QuasiPolynomial::new(common, pieces)
}

/// ι_{δ+Λ}(γ) · F(γ, ⌊⟨a, γ⟩ + c⌋) as a quasipolynomial over Ω(a, Λ), where
/// `f` is a polynomial in n + 1 variables whose last variable receives the
/// floor.
pub fn eliminate_floor(delta: &[BigInt], lattice: &Lattice, f: &Polynomial, a: &[Rational], c: &Rational) -> Result<QuasiPolynomial> {
    let n = lattice.dim();
    if f.nvars() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, found: f.nvars() });
    }
    let omega = omega_sublattice(a, lattice);
    let mut pieces = Vec::new();
    for mu in omega.coset_representatives()? {
        let diff: IntVector = mu.iter().zip(delta).map(|(x, y)| x - y).collect();
        if !lattice.contains_int(&diff) {
            continue;
        }
        let t = dot_mixed(a, &mu);
        let d = &t - rat_int(&floor(&(&t + c)));
        let mut subs: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
        subs.push(Polynomial::linear(a, -d));
        let piece = f.compose(&subs);
        if !piece.is_zero() {
            pieces.push((mu, piece));
        }
    }
    QuasiPolynomial::new(omega, pieces)
}

/// ι_{δ+Λ}(γ) · f(⌊⟨a, γ⟩ + c⌋) for a univariate polynomial `f`.
pub fn eliminate_floor_linear(delta: &[BigInt], lattice: &Lattice, f: &Polynomial, a: &[Rational], c: &Rational) -> Result<QuasiPolynomial> {
    let n = lattice.dim();
    if f.nvars() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: f.nvars() });
    }
    let last = Polynomial::var(n + 1, n);
    eliminate_floor(delta, lattice, &f.compose(&[last]), a, c)
}

/// γ ↦ Q(γ − ⌊⟨b, γ⟩ + c⌋ α) as a quasipolynomial over Ω(b, Λ) ∩ Ψ(b, α, Λ, Λ).
pub fn substitute_floor_argument(q: &QuasiPolynomial, b: &[Rational], c: &Rational, alpha: &[BigInt]) -> Result<QuasiPolynomial> {
    let n = q.dim();
    if alpha.iter().all(|x| x.is_zero()) {
        return Ok(q.clone());
    }
    if b.iter().all(|x| x.is_zero()) {
        let shift: IntVector = alpha.iter().map(|x| x * floor(c)).collect();
        return translate(q, &shift);
    }
    let lambda = q.lattice();
    let theta = omega_sublattice(b, lambda).intersect(&psi_sublattice(b, alpha, lambda, lambda)?);
    let alpha_r: Vec<Rational> = alpha.iter().map(rat_int).collect();
    let mut pieces = Vec::new();
    for mu in theta.coset_representatives()? {
        let t = dot_mixed(b, &mu);
        let f = floor(&(&t + c));
        let d = &t - rat_int(&f);
        let source: IntVector = mu.iter().zip(alpha).map(|(m, a)| m - &f * a).collect();
        let Some(p) = q.piece_at(&source) else { continue };
        // x_i - (⟨b, x⟩ - d) α_i
        let shift = Polynomial::linear(b, -d);
        let subs: Vec<Polynomial> =
            (0..n).map(|i| &Polynomial::var(n, i) - &shift.scale(&alpha_r[i])).collect();
        let piece = p.compose(&subs);
        if !piece.is_zero() {
            pieces.push((mu, piece));
        }
    }
    QuasiPolynomial::new(theta, pieces)
}

/// γ ↦ Q(γ - s) for an integer shift s.
pub fn translate(q: &QuasiPolynomial, shift: &[BigInt]) -> Result<QuasiPolynomial> {
    let n = q.dim();
    let shift_r: Vec<Rational> = shift.iter().map(rat_int).collect();
    let subs: Vec<Polynomial> =
        (0..n).map(|i| &Polynomial::var(n, i) - &Polynomial::constant(n, shift_r[i].clone())).collect();
    let pieces: Vec<(IntVector, Polynomial)> = q
        .pieces
        .iter()
        .map(|(k, p)| (k.iter().zip(shift).map(|(a, b)| a + b).collect(), p.compose(&subs)))
        .collect();
    QuasiPolynomial::new(q.lattice().clone(), pieces)
}

pub use crate::poly::bernoulli_sum;
