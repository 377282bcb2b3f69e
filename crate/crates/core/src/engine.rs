//! End-to-end computation: chambers, per-chamber quasipolynomials from either
//! algorithm, and evaluation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{IntVector, Rational};
use crate::complex::{chambers_amalgamated, chambers_arbitrary, chambers_proper, ChamberComplex};
use crate::elementary::run_elementary;
use crate::error::{Error, Result};
use crate::partfrac::{random_point, FractionContribution, PartialFractionSum};
use crate::quasipoly::QuasiPolynomial;

/// Factor applied to a chamber's internal point before cone membership tests.
pub const INTERIOR_SCALE: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    PartialFractions,
    Elementary,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    Arbitrary,
    #[default]
    Proper,
    Amalgamated,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::PartialFractions => "pf",
            Algorithm::Elementary => "elementary",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pf" => Ok(Algorithm::PartialFractions),
            "elementary" => Ok(Algorithm::Elementary),
            _ => Err(Error::Parse(format!("unknown algorithm {s:?}"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Arbitrary => "arbitrary",
            Strategy::Proper => "proper",
            Strategy::Amalgamated => "amalgamated",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arbitrary" => Ok(Strategy::Arbitrary),
            "proper" => Ok(Strategy::Proper),
            "amalgamated" => Ok(Strategy::Amalgamated),
            _ => Err(Error::Parse(format!("unknown chamber strategy {s:?}"))),
        }
    }
}

/// Chambers of Δ under the given strategy, numbered 1, 2, ….
pub fn chambers(delta: &[IntVector], strategy: Strategy) -> Result<ChamberComplex> {
    match strategy {
        Strategy::Arbitrary => chambers_arbitrary(delta),
        Strategy::Proper => chambers_proper(delta),
        Strategy::Amalgamated => chambers_amalgamated(delta),
    }
}

/// Chambers together with the quasipolynomial of the partition function on
/// each of them.
#[derive(Clone, Debug)]
pub struct VpfResult {
    pub delta: Vec<IntVector>,
    pub complex: ChamberComplex,
    pub formulas: BTreeMap<usize, QuasiPolynomial>,
    pub algorithm: Algorithm,
    pub strategy: Strategy,
}

impl VpfResult {
    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn formula(&self, id: usize) -> Option<&QuasiPolynomial> {
        self.formulas.get(&id)
    }
}

/// The fully reduced partial fraction decomposition of the generating
/// function of Δ.
pub fn fully_reduced(delta: &[IntVector]) -> Result<PartialFractionSum> {
    Ok(PartialFractionSum::generating_sum(delta)?.decompose_semi_reduced().reduce_fully())
}

/// Values of the generating function at `points` random points through the
/// initial, semi-reduced and fully reduced sums and the single-monomial
/// split; an error names the first point where two stages differ.
pub fn identity_check(delta: &[IntVector], seed: u64, points: usize) -> Result<()> {
    let start = PartialFractionSum::generating_sum(delta)?;
    let semi = start.decompose_semi_reduced();
    let full = semi.reduce_fully();
    let split = full.brion_vergne()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    while checked < points {
        let p = random_point(start.dim(), &mut rng);
        let v0 = match start.numeric_check(&p) {
            Ok(v) => v,
            Err(Error::PoleAtPoint) => continue,
            Err(e) => return Err(e),
        };
        let v1 = semi.numeric_check(&p)?;
        let v2 = full.numeric_check(&p)?;
        let mut v3 = Rational::zero();
        for f in &split {
            v3 += f.value(&p)?;
        }
        if v0 != v1 || v0 != v2 || v0 != v3 {
            return Err(Error::InternalInconsistency(format!(
                "decomposition values differ at {p:?}: {v0}, {v1}, {v2}, {v3}"
            )));
        }
        checked += 1;
    }
    Ok(())
}

/// Sum of the contributions whose cone contains `point`, compressed.
pub fn assemble(contributions: &[FractionContribution], point: &[BigInt]) -> Result<QuasiPolynomial> {
    let n = point.len();
    let mut total = QuasiPolynomial::zero(n);
    for c in contributions {
        if c.cone.contains(point) {
            total = total.add(&c.quasipolynomial)?;
        }
    }
    Ok(total.compress())
}

fn scaled_internal_point(complex: &ChamberComplex, id: usize) -> IntVector {
    let scale = BigInt::from(INTERIOR_SCALE);
    complex.chamber(id).expect("known id").internal_point().iter().map(|x| x * &scale).collect()
}

/// Partition function via the partial fraction decomposition: each chamber
/// receives the fraction contributions whose cones contain its internal point.
pub fn compute_pf(delta: &[IntVector], strategy: Strategy) -> Result<VpfResult> {
    let contributions = fully_reduced(delta)?.contributions()?;
    let complex = chambers(delta, strategy)?;
    let mut formulas = BTreeMap::new();
    for id in complex.ids() {
        formulas.insert(id, assemble(&contributions, &scaled_internal_point(&complex, id))?);
    }
    Ok(VpfResult { delta: delta.to_vec(), complex, formulas, algorithm: Algorithm::PartialFractions, strategy })
}

/// Partition function via the inductive ray sums. The induction runs on
/// arbitrarily sliced chambers; for the other strategies each chamber takes
/// the formula of the inductive chamber owning its internal point.
pub fn compute_elementary(delta: &[IntVector], strategy: Strategy) -> Result<VpfResult> {
    let run = run_elementary(delta)?;
    let (complex, formulas) = if strategy == Strategy::Arbitrary {
        let complex = run.complex.renumbered();
        let formulas = run.formulas.into_values().enumerate().map(|(i, q)| (i + 1, q)).collect();
        (complex, formulas)
    } else {
        let complex = chambers(delta, strategy)?;
        let mut formulas = BTreeMap::new();
        for id in complex.ids() {
            let p = complex.chamber(id).expect("known id").internal_point();
            let owner = run
                .complex
                .chambers()
                .find(|c| run.perturbation.owns(c, &p))
                .ok_or_else(|| Error::InternalInconsistency(format!("no inductive chamber owns chamber {id}")))?;
            formulas.insert(id, run.formulas[&owner.id].clone());
        }
        (complex, formulas)
    };
    Ok(VpfResult { delta: delta.to_vec(), complex, formulas, algorithm: Algorithm::Elementary, strategy })
}

/// Either algorithm.
pub fn compute(delta: &[IntVector], strategy: Strategy, algorithm: Algorithm) -> Result<VpfResult> {
    match algorithm {
        Algorithm::PartialFractions => compute_pf(delta, strategy),
        Algorithm::Elementary => compute_elementary(delta, strategy),
    }
}

/// P_Δ(γ): the formula of the lowest-numbered chamber containing γ, or zero
/// outside every chamber. A value that is not a non-negative integer is an
/// internal inconsistency.
pub fn evaluate_result(result: &VpfResult, gamma: &[BigInt]) -> Result<BigInt> {
    if gamma.len() != result.dim() {
        return Err(Error::DimensionMismatch { expected: result.dim(), found: gamma.len() });
    }
    let Some(chamber) = result.complex.locate(gamma) else {
        return Ok(BigInt::zero());
    };
    let value = result.formulas[&chamber.id].evaluate(gamma);
    if !value.is_integer() || value.is_negative() {
        return Err(Error::InternalInconsistency(format!(
            "chamber {} evaluates to {} at {}",
            chamber.id,
            value,
            crate::cones::fmt_vector(gamma)
        )));
    }
    Ok(value.to_integer())
}
