//! The vector partition function computed one vector at a time by summing
//! the previous partition function along rays, with Bernoulli sums and floor
//! elimination.
//!
//! Formulas attached to a chamber C are valid on the half-open cone
//! H(C) = {x : x + εv ∈ int C for all small ε > 0}, where v is an interior
//! direction of the cone of the first n vectors perturbed lexicographically by
//! the unit vectors. Every lattice point of the cone of Δ lies in exactly one
//! H(C).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{dot_int, lcm_denominators, rat_int, to_rational, IntVector, Rational};
use crate::cones::Chamber;
use crate::complex::{independent_first, starting_complex, ChamberComplex, SliceMode};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::partfrac::validate_delta;
use crate::poly::{bernoulli_sum, Polynomial};
use crate::quasipoly::{eliminate_floor, substitute_floor_argument, QuasiPolynomial};

/// The symbolic direction v = anchor + ε e_1 + ε² e_2 + … used to assign
/// boundary points to chambers.
#[derive(Clone, Debug)]
pub struct Perturbation {
    anchor: IntVector,
}

impl Perturbation {
    pub fn new(anchor: IntVector) -> Perturbation {
        Perturbation { anchor }
    }

    /// Whether ⟨b, v⟩ > 0. Never zero for b ≠ 0.
    pub fn is_positive(&self, b: &[BigInt]) -> bool {
        let s = dot_int(&self.anchor, b);
        if !s.is_zero() {
            return s.is_positive();
        }
        b.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
    }

    /// Whether x lies in the half-open cone H(C).
    pub fn owns(&self, chamber: &Chamber, x: &[BigInt]) -> bool {
        chamber.walls().iter().all(|w| {
            let p = dot_int(w, x);
            p.is_positive() || (p.is_zero() && self.is_positive(w))
        })
    }
}

/// Per-chamber formulas of the partition function of Δ over the chambers of
/// the final complex (arbitrary slicing), keyed by chamber id.
pub struct ElementaryRun {
    pub ordered: Vec<IntVector>,
    pub complex: ChamberComplex,
    pub formulas: BTreeMap<usize, QuasiPolynomial>,
    pub perturbation: Perturbation,
}

/// Runs the induction over Δ in the order produced by
/// [`independent_first`].
pub fn run_elementary(delta: &[IntVector]) -> Result<ElementaryRun> {
    let n = validate_delta(delta)?;
    let ordered = independent_first(delta);
    let first = &ordered[..n];
    let mut anchor = vec![BigInt::zero(); n];
    for v in first {
        for (a, x) in anchor.iter_mut().zip(v) {
            *a += x;
        }
    }
    let pert = Perturbation::new(anchor);
    let base_cone = Chamber::from_generators(first)?;
    let base_lattice = Lattice::from_int_generators(first)?;
    let mut complex = starting_complex(&ordered)?;
    let mut formulas: BTreeMap<usize, QuasiPolynomial> = BTreeMap::new();
    for c in complex.chambers() {
        let f = if base_cone.contains_in_interior(&c.internal_point()) {
            QuasiPolynomial::indicator(&vec![BigInt::zero(); n], &base_lattice)?
        } else {
            QuasiPolynomial::zero(n)
        };
        formulas.insert(c.id, f);
    }
    for (k, alpha) in ordered.iter().enumerate() {
        let before = complex.clone();
        complex.subdivide_direction(alpha, &SliceMode::Arbitrary)?;
        let inherited = inherit(&before, &formulas, &complex)?;
        formulas = if k < n { inherited } else { ray_step(&complex, &inherited, alpha, &pert)? };
    }
    Ok(ElementaryRun { ordered, complex, formulas, perturbation: pert })
}

/// Formulas of a refined complex read off from the chambers containing each
/// new chamber.
fn inherit(
    before: &ChamberComplex,
    formulas: &BTreeMap<usize, QuasiPolynomial>,
    after: &ChamberComplex,
) -> Result<BTreeMap<usize, QuasiPolynomial>> {
    let mut out = BTreeMap::new();
    for c in after.chambers() {
        let p = c.internal_point();
        let parent = before
            .chambers()
            .find(|d| d.contains_in_interior(&p))
            .ok_or_else(|| Error::InternalInconsistency("refined chamber has no parent".into()))?;
        out.insert(c.id, formulas[&parent.id].clone());
    }
    Ok(out)
}

/// The exit wall of a chamber normal with respect to α and the neighbor
/// across it, if any.
fn exit_of(complex: &ChamberComplex, id: usize, alpha: &[BigInt]) -> Result<(IntVector, Option<usize>)> {
    let chamber = complex.chamber(id).expect("known id");
    let exits = chamber.positive_walls(alpha);
    if exits.len() != 1 {
        return Err(Error::InternalInconsistency(format!("chamber {id} is not normal")));
    }
    let b = exits.into_iter().next().expect("one exit");
    let next = complex.neighbors(id, &b);
    if next.len() > 1 {
        return Err(Error::InternalInconsistency(format!("chamber {id} has several neighbors across its exit")));
    }
    Ok((b, next.into_iter().next()))
}

/// The constant c with t(γ) = ⌊⟨γ, b⟩/⟨α, b⟩ + c⌋ the last step of the ray
/// γ - tα owned by the chamber with exit wall b.
fn exit_offset(b: &[BigInt], alpha: &[BigInt], pert: &Perturbation) -> Rational {
    if pert.is_positive(b) {
        Rational::zero()
    } else {
        -Rational::new(BigInt::one(), dot_int(b, alpha))
    }
}

/// Partition function of Γ ∪ {α} over every chamber of a complex normal with
/// respect to α, from the formulas of Γ: per chamber, the Bernoulli sum over
/// its own stretch of the ray plus an alternating sum over the chambers met
/// further along the ray. Chambers further along are computed first.
pub fn ray_step(
    complex: &ChamberComplex,
    previous: &BTreeMap<usize, QuasiPolynomial>,
    alpha: &[BigInt],
    pert: &Perturbation,
) -> Result<BTreeMap<usize, QuasiPolynomial>> {
    let mut exits: BTreeMap<usize, (IntVector, Option<usize>)> = BTreeMap::new();
    for id in complex.ids() {
        exits.insert(id, exit_of(complex, id, alpha)?);
    }
    let mut done: BTreeMap<usize, QuasiPolynomial> = BTreeMap::new();
    for start in complex.ids() {
        // Chambers are finished in an order where every chamber met further
        // along the ray is already known.
        let mut pending = vec![start];
        while let Some(&id) = pending.last() {
            if done.contains_key(&id) {
                pending.pop();
                continue;
            }
            match exits[&id].1 {
                Some(next) if !done.contains_key(&next) => {
                    if pending.contains(&next) {
                        return Err(Error::InternalInconsistency("ray chain revisits a chamber".into()));
                    }
                    pending.push(next);
                }
                _ => {
                    let f = chamber_formula(id, &exits, previous, &done, alpha, pert)?;
                    done.insert(id, f);
                    pending.pop();
                }
            }
        }
    }
    Ok(done)
}

fn chamber_formula(
    id: usize,
    exits: &BTreeMap<usize, (IntVector, Option<usize>)>,
    previous: &BTreeMap<usize, QuasiPolynomial>,
    done: &BTreeMap<usize, QuasiPolynomial>,
    alpha: &[BigInt],
    pert: &Perturbation,
) -> Result<QuasiPolynomial> {
    let (b, mut next) = exits[&id].clone();
    let mut total = ray_sum(&previous[&id], alpha, &b, &exit_offset(&b, alpha, pert))?;
    let mut entry = b;
    while let Some(c) = next {
        let (exit, after) = exits[&c].clone();
        let q = &done[&c];
        let head = shifted_past(q, alpha, &entry, pert)?;
        let tail = shifted_past(q, alpha, &exit, pert)?;
        total = total.add(&head)?.add(&tail.scale(&-Rational::one()))?;
        entry = exit;
        next = after;
    }
    Ok(total.compress())
}

/// γ ↦ Q(γ - (t(γ) + 1)α) where t(γ) is the last step before the ray leaves
/// through the wall b.
fn shifted_past(q: &QuasiPolynomial, alpha: &[BigInt], b: &[BigInt], pert: &Perturbation) -> Result<QuasiPolynomial> {
    let d = rat_int(&dot_int(b, alpha));
    let scaled: Vec<Rational> = b.iter().map(|x| rat_int(x) / &d).collect();
    let c = exit_offset(b, alpha, pert) + Rational::one();
    substitute_floor_argument(q, &scaled, &c, alpha)
}

/// Σ_{t=0}^{X} q(γ - tα) with X = ⌊⟨γ, b⟩/⟨α, b⟩ + c⌋, as a quasipolynomial.
/// With a the least positive integer such that aα lies in the lattice of q,
/// the substitution t = au + w turns each coset piece into a Bernoulli sum in
/// u with upper limit ⌊⟨γ, b⟩/(a⟨α, b⟩) + (c - w)/a⌋.
pub fn ray_sum(q: &QuasiPolynomial, alpha: &[BigInt], b: &[BigInt], c: &Rational) -> Result<QuasiPolynomial> {
    let n = q.dim();
    if q.is_zero() {
        return Ok(QuasiPolynomial::zero(n));
    }
    let lattice = q.lattice();
    let alpha_r = to_rational(alpha);
    let a = lcm_denominators(&lattice.coordinates(&alpha_r));
    let a_r = rat_int(&a);
    let d = rat_int(&dot_int(b, alpha));
    let slope: Vec<Rational> = b.iter().map(|x| rat_int(x) / (&d * &a_r)).collect();
    let a_usize: usize = a.try_into().map_err(|_| Error::InternalInconsistency("lattice step too large".into()))?;
    let u = Polynomial::var(n + 1, n);
    let mut total = QuasiPolynomial::zero(n);
    for w in 0..a_usize {
        let w_r = Rational::from_integer(BigInt::from(w));
        // x_j ↦ x_j - (w + a u) α_j
        let step = &Polynomial::constant(n + 1, w_r.clone()) + &u.scale(&a_r);
        let subs: Vec<Polynomial> =
            (0..n).map(|j| &Polynomial::var(n + 1, j) - &step.scale(&alpha_r[j])).collect();
        let offset = (c - &w_r) / &a_r;
        for (rep, piece) in q.pieces() {
            let moved = piece.compose(&subs);
            let mut f = Polynomial::zero(n + 1);
            for (k, coeff) in moved.collect_last_var().into_iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let sum_k = bernoulli_sum(k as u32).compose(&[u.clone()]);
                f = &f + &(&coeff.extend_vars(1) * &sum_k);
            }
            let shift: IntVector = rep.iter().zip(alpha).map(|(r, x)| r + x * BigInt::from(w)).collect();
            total = total.add(&eliminate_floor(&shift, lattice, &f, &slope, &offset)?)?;
        }
    }
    Ok(total)
}
