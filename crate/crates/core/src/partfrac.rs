//! Partial fraction decompositions of 1/∏(1 - x^α) and their conversion into
//! quasipolynomial contributions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{
    graded_colex_cmp, invert, rank, rank_int, rat_int, row_echelon, IntVector, Rational, RationalMatrix,
    RationalVector,
};
use crate::cones::Chamber;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::poly::Polynomial;
use crate::quasipoly::QuasiPolynomial;

/// Laurent polynomial with integer exponents (negative entries allowed) and
/// exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn add_exponents(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x.checked_add(*y).expect("Laurent exponent overflow")).collect()
}

fn scale_exponent(a: &[i64], k: i64) -> Vec<i64> {
    a.iter().map(|x| x.checked_mul(k).expect("Laurent exponent overflow")).collect()
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], Rational::one())
    }

    pub fn monomial(exponent: Vec<i64>, c: Rational) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<i64>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_assign(&mut self, other: &LaurentPolynomial) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn mul(&self, other: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(add_exponents(e1, e2), c1 * c2);
            }
        }
        out
    }

    /// Multiplies by the monomial x^e.
    pub fn shift(&self, e: &[i64]) -> LaurentPolynomial {
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (add_exponents(k, e), c.clone())).collect(),
        }
    }

    /// Exact value at a point; a zero coordinate raised to a negative power is
    /// a pole.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            total += c * monomial_value(point, e)?;
        }
        Ok(total)
    }

    /// The geometric numerator g_k(x^β): 1 + y + … + y^{k-1} for k > 0 and
    /// -(y^{-1} + … + y^{k}) for k < 0, with y = x^β.
    pub fn geometric(beta: &[i64], k: i64) -> LaurentPolynomial {
        assert!(k != 0, "geometric numerator needs a non-zero index");
        let mut out = LaurentPolynomial::zero(beta.len());
        if k > 0 {
            for i in 0..k {
                out.add_term(scale_exponent(beta, i), Rational::one());
            }
        } else {
            for i in k..0 {
                out.add_term(scale_exponent(beta, i), -Rational::one());
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        self.render(false)
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.cmp(a.0));
        let mut out = String::new();
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_monomial(e, latex);
            let coeff = if latex && !a.is_integer() {
                format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
            } else {
                a.to_string()
            };
            if mono.is_empty() {
                out.push_str(&coeff);
            } else {
                if !a.is_one() {
                    out.push_str(&coeff);
                    if !latex {
                        out.push('*');
                    }
                }
                out.push_str(&mono);
            }
        }
        out
    }
}

fn render_monomial(e: &[i64], latex: bool) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| match (latex, k) {
            (true, 1) => format!("x_{{{}}}", i + 1),
            (true, _) => format!("x_{{{}}}^{{{}}}", i + 1, k),
            (false, 1) => format!("x{}", i + 1),
            (false, _) => format!("x{}^{}", i + 1, k),
        })
        .collect();
    parts.join(if latex { "" } else { "*" })
}

fn monomial_value(point: &[Rational], e: &[i64]) -> Result<Rational> {
    let mut v = Rational::one();
    for (x, &k) in point.iter().zip(e) {
        if k == 0 {
            continue;
        }
        if x.is_zero() {
            if k < 0 {
                return Err(Error::PoleAtPoint);
            }
            return Ok(Rational::zero());
        }
        let p = num_traits::pow(x.clone(), k.unsigned_abs() as usize);
        v *= if k > 0 { p } else { p.recip() };
    }
    Ok(v)
}

/// Denominator data of one fraction: for each direction of Δ (by index), the
/// list of (b, m) pairs standing for (1 - x^{bα})^m, with b strictly
/// increasing. Directions absent from the denominator have empty lists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DenominatorKey {
    entries: Vec<Vec<(i64, u32)>>,
}

impl DenominatorKey {
    pub fn entries(&self) -> &[Vec<(i64, u32)>] {
        &self.entries
    }

    /// Indices of directions present in the denominator, in Δ order.
    pub fn directions(&self) -> Vec<usize> {
        (0..self.entries.len()).filter(|&i| !self.entries[i].is_empty()).collect()
    }

    fn add_factor(&mut self, index: usize, b: i64, m: u32) {
        let list = &mut self.entries[index];
        match list.binary_search_by(|(x, _)| x.cmp(&b)) {
            Ok(pos) => list[pos].1 += m,
            Err(pos) => list.insert(pos, (b, m)),
        }
    }

    fn remove_one(&mut self, index: usize, b: i64) {
        let list = &mut self.entries[index];
        let pos = list.iter().position(|(x, _)| *x == b).expect("factor present");
        list[pos].1 -= 1;
        if list[pos].1 == 0 {
            list.remove(pos);
        }
    }

    /// Whether every present direction carries a single (b, m) pair.
    pub fn is_single_scale(&self) -> bool {
        self.entries.iter().all(|l| l.len() <= 1)
    }
}

/// A sum of fractions numerator / ∏(1 - x^{bα})^m over a fixed vector set Δ.
#[derive(Clone, PartialEq, Eq)]
pub struct PartialFractionSum {
    delta: Vec<IntVector>,
    delta_exp: Vec<Vec<i64>>,
    fractions: BTreeMap<DenominatorKey, LaurentPolynomial>,
}

impl fmt::Debug for PartialFractionSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Checks that Δ is a non-empty list of non-zero vectors with non-negative
/// integer coordinates spanning Q^n.
pub fn validate_delta(delta: &[IntVector]) -> Result<usize> {
    let Some(first) = delta.first() else {
        return Err(Error::NotFullRank { rank: 0, dim: 0 });
    };
    let n = first.len();
    if n == 0 {
        return Err(Error::NotFullRank { rank: 0, dim: 0 });
    }
    for v in delta {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        if v.iter().any(|x| x.is_negative()) {
            return Err(Error::NegativeCoordinate(crate::cones::fmt_vector(v)));
        }
        if v.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroVector);
        }
    }
    let r = rank_int(delta);
    if r != n {
        return Err(Error::NotFullRank { rank: r, dim: n });
    }
    Ok(n)
}

impl PartialFractionSum {
    /// The single fraction 1/∏_{α∈Δ}(1 - x^α). Repeated vectors raise the
    /// multiplicity.
    pub fn generating_sum(delta: &[IntVector]) -> Result<Self> {
        let n = validate_delta(delta)?;
        let mut sorted = delta.to_vec();
        sorted.sort_by(|a, b| graded_colex_cmp(a, b));
        let mut distinct: Vec<IntVector> = Vec::new();
        let mut mult: Vec<u32> = Vec::new();
        for v in sorted {
            if distinct.last() == Some(&v) {
                *mult.last_mut().unwrap() += 1;
            } else {
                distinct.push(v);
                mult.push(1);
            }
        }
        let delta_exp: Vec<Vec<i64>> = distinct
            .iter()
            .map(|v| v.iter().map(|x| x.to_i64().expect("coordinates fit in 64 bits")).collect())
            .collect();
        let key = DenominatorKey { entries: mult.iter().map(|&m| vec![(1, m)]).collect() };
        let mut fractions = BTreeMap::new();
        fractions.insert(key, LaurentPolynomial::one(n));
        Ok(PartialFractionSum { delta: distinct, delta_exp, fractions })
    }

    pub fn dim(&self) -> usize {
        self.delta_exp[0].len()
    }

    /// The distinct vectors of Δ in graded colex order.
    pub fn delta(&self) -> &[IntVector] {
        &self.delta
    }

    pub fn fractions(&self) -> &BTreeMap<DenominatorKey, LaurentPolynomial> {
        &self.fractions
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    fn empty_like(&self) -> Self {
        PartialFractionSum { delta: self.delta.clone(), delta_exp: self.delta_exp.clone(), fractions: BTreeMap::new() }
    }

    /// Adds a fraction, merging numerators with equal denominators.
    pub fn insert(&mut self, key: DenominatorKey, numerator: LaurentPolynomial) {
        insert_into(&mut self.fractions, key, numerator);
    }

    /// Whether every fraction has linearly independent directions.
    pub fn is_semi_reduced(&self) -> bool {
        self.fractions.keys().all(|k| self.directions_independent(k))
    }

    /// Whether every fraction is semi-reduced and uses one scale per direction.
    pub fn is_fully_reduced(&self) -> bool {
        self.is_semi_reduced() && self.fractions.keys().all(|k| k.is_single_scale())
    }

    fn directions_independent(&self, key: &DenominatorKey) -> bool {
        let dirs = key.directions();
        let vs: Vec<IntVector> = dirs.iter().map(|&i| self.delta[i].clone()).collect();
        rank_int(&vs) == vs.len()
    }

    /// Rewrites every fraction until all have linearly independent
    /// directions, by repeated use of the generalized Szenes–Vergne formula.
    pub fn decompose_semi_reduced(&self) -> PartialFractionSum {
        let mut pending = self.fractions.clone();
        let mut done = self.empty_like();
        while let Some((key, numerator)) = pending.pop_first() {
            if self.directions_independent(&key) {
                done.insert(key, numerator);
                continue;
            }
            for (k, p) in self.szenes_vergne_step(&key, &numerator) {
                insert_into(&mut pending, k, p);
            }
        }
        done
    }

    /// One application of the generalized Szenes–Vergne formula to a fraction
    /// whose directions are linearly dependent.
    fn szenes_vergne_step(&self, key: &DenominatorKey, numerator: &LaurentPolynomial) -> Vec<(DenominatorKey, LaurentPolynomial)> {
        let dirs = key.directions();
        // Top scale per direction: the w part of the fraction.
        let top: Vec<i64> = dirs.iter().map(|&i| key.entries[i].last().unwrap().0).collect();
        let betas: Vec<RationalVector> = dirs
            .iter()
            .zip(&top)
            .map(|(&i, &b)| self.delta_exp[i].iter().map(|&x| Rational::from_integer(BigInt::from(x * b))).collect())
            .collect();
        let mut s = 0;
        while s < betas.len() && rank(&betas[..=s]) == s + 1 {
            s += 1;
        }
        assert!(s < betas.len(), "directions are dependent");
        let coeffs = dependency(&betas[..=s]);
        let combo = normalize_combination(&coeffs);
        let lead = combo.lead;
        let rhs: Vec<(usize, i64)> = combo.rhs;
        let lead_index = dirs[lead];
        let new_b = combo.lead_coeff * top[lead];
        let mut base = key.clone();
        for &(pos, _) in &rhs {
            base.remove_one(dirs[pos], top[pos]);
        }
        base.add_factor(lead_index, new_b, 1);
        let mut out = Vec::with_capacity(rhs.len());
        let mut prefix = vec![0i64; self.dim()];
        for (j, &(pos, a)) in rhs.iter().enumerate() {
            let beta_j = scale_exponent(&self.delta_exp[dirs[pos]], top[pos]);
            let mut k = base.clone();
            for (i, &(other, _)) in rhs.iter().enumerate() {
                if i != j {
                    k.add_factor(dirs[other], top[other], 1);
                }
            }
            let num = numerator.shift(&prefix).mul(&LaurentPolynomial::geometric(&beta_j, a));
            out.push((k, num));
            prefix = add_exponents(&prefix, &scale_exponent(&beta_j, a));
        }
        out
    }

    /// Replaces the several scales of each direction by their least common
    /// multiple using the geometric series numerators.
    pub fn reduce_fully(&self) -> PartialFractionSum {
        let mut out = self.empty_like();
        for (key, numerator) in &self.fractions {
            let mut k = key.clone();
            let mut num = numerator.clone();
            for i in 0..key.entries.len() {
                let list = &key.entries[i];
                if list.len() <= 1 {
                    continue;
                }
                let l = list.iter().fold(1i64, |acc, (b, _)| acc.lcm(b));
                let mut total = 0;
                for &(b, m) in list {
                    let g = LaurentPolynomial::geometric(&scale_exponent(&self.delta_exp[i], b), l / b);
                    for _ in 0..m {
                        num = num.mul(&g);
                    }
                    total += m;
                }
                k.entries[i] = vec![(l, total)];
            }
            out.insert(k, num);
        }
        out
    }

    /// Exact value of the sum at a rational point.
    pub fn numeric_check(&self, point: &[Rational]) -> Result<Rational> {
        let mut total = Rational::zero();
        for (key, num) in &self.fractions {
            let mut denom = Rational::one();
            for (i, list) in key.entries.iter().enumerate() {
                for &(b, m) in list {
                    let f = Rational::one() - monomial_value(point, &scale_exponent(&self.delta_exp[i], b))?;
                    if f.is_zero() {
                        return Err(Error::PoleAtPoint);
                    }
                    denom *= num_traits::pow(f, m as usize);
                }
            }
            total += num.eval(point)? / denom;
        }
        Ok(total)
    }

    /// Splits a fully reduced sum into single-monomial fractions.
    pub fn brion_vergne(&self) -> Result<Vec<ReducedFraction>> {
        let mut out = Vec::new();
        for (key, num) in &self.fractions {
            let (directions, multiplicities) = self.fraction_directions(key)?;
            for (e, c) in num.terms() {
                out.push(ReducedFraction {
                    shift: e.iter().map(|&x| BigInt::from(x)).collect(),
                    coefficient: c.clone(),
                    directions: directions.clone(),
                    multiplicities: multiplicities.clone(),
                });
            }
        }
        Ok(out)
    }

    fn fraction_directions(&self, key: &DenominatorKey) -> Result<(Vec<IntVector>, Vec<u32>)> {
        let mut directions = Vec::new();
        let mut multiplicities = Vec::new();
        for i in key.directions() {
            let list = &key.entries[i];
            if list.len() != 1 {
                return Err(Error::InternalInconsistency("fraction is not fully reduced".into()));
            }
            let (b, m) = list[0];
            directions.push(scale_exponent(&self.delta_exp[i], b).into_iter().map(BigInt::from).collect());
            multiplicities.push(m);
        }
        if directions.len() != self.dim() || rank_int(&directions) != self.dim() {
            return Err(Error::NotFullRank { rank: rank_int(&directions), dim: self.dim() });
        }
        Ok((directions, multiplicities))
    }

    /// The quasipolynomial contribution of each fraction together with the
    /// cone spanned by its directions. Numerator monomials of one fraction are
    /// grouped by their coset modulo the lattice of the directions.
    pub fn contributions(&self) -> Result<Vec<FractionContribution>> {
        let n = self.dim();
        let mut out = Vec::new();
        for (key, num) in &self.fractions {
            let (directions, multiplicities) = self.fraction_directions(key)?;
            let duals = dual_basis(&directions)?;
            let lattice = Lattice::from_int_generators(&directions)?;
            // Per coset, accumulate Σ c_δ ∏ binom(y_i - k_i(δ) + m_i - 1, m_i - 1)
            // in the coordinates y_i = ⟨β_i*, γ⟩.
            let mut per_coset: BTreeMap<IntVector, Polynomial> = BTreeMap::new();
            for (e, c) in num.terms() {
                let shift: IntVector = e.iter().map(|&x| BigInt::from(x)).collect();
                let shift_r: RationalVector = shift.iter().map(rat_int).collect();
                let mut term = Polynomial::constant(n, c.clone());
                for i in 0..n {
                    let k: Rational = duals[i].iter().zip(&shift_r).map(|(a, b)| a * b).sum();
                    let mut coeffs = vec![Rational::zero(); n];
                    coeffs[i] = Rational::one();
                    let y = Polynomial::linear(&coeffs, -k);
                    term = &term * &binomial_poly(&y, multiplicities[i]);
                }
                let rep = lattice.reduce_int(&shift);
                let entry = per_coset.entry(rep).or_insert_with(|| Polynomial::zero(n));
                *entry = &*entry + &term;
            }
            let subs: Vec<Polynomial> = duals.iter().map(|d| Polynomial::linear(d, Rational::zero())).collect();
            let pieces: Vec<(IntVector, Polynomial)> =
                per_coset.into_iter().map(|(rep, p)| (rep, p.compose(&subs))).collect();
            let qp = QuasiPolynomial::new(lattice, pieces)?;
            out.push(FractionContribution { cone: Chamber::from_generators(&directions)?, quasipolynomial: qp });
        }
        Ok(out)
    }

    /// Coefficient of x^γ in the power series expansion of a fully reduced
    /// sum, each fraction expanded on its own cone.
    pub fn series_coefficient(&self, gamma: &[BigInt]) -> Result<Rational> {
        let mut total = Rational::zero();
        for f in self.brion_vergne()? {
            total += f.series_coefficient(gamma)?;
        }
        Ok(total)
    }

    pub fn to_text(&self) -> String {
        self.render(false)
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        let mut parts = Vec::new();
        for (key, num) in &self.fractions {
            let mut factors = Vec::new();
            for (i, list) in key.entries.iter().enumerate() {
                for &(b, m) in list {
                    let mono = render_monomial(&scale_exponent(&self.delta_exp[i], b), latex);
                    let f = format!("(1-{})", mono);
                    factors.push(if m == 1 {
                        f
                    } else if latex {
                        format!("{}^{{{}}}", f, m)
                    } else {
                        format!("{}^{}", f, m)
                    });
                }
            }
            if latex {
                parts.push(format!("\\frac{{{}}}{{{}}}", num.to_latex(), factors.join("")));
            } else {
                parts.push(format!("({})/({})", num.to_text(), factors.join("")));
            }
        }
        parts.join(" + ")
    }
}

/// A fraction's contribution: valid on translates of `cone` through its
/// numerator shifts.
#[derive(Clone, Debug)]
pub struct FractionContribution {
    pub cone: Chamber,
    pub quasipolynomial: QuasiPolynomial,
}

fn insert_into(map: &mut BTreeMap<DenominatorKey, LaurentPolynomial>, key: DenominatorKey, numerator: LaurentPolynomial) {
    if numerator.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(numerator);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            o.get_mut().add_assign(&numerator);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Kernel vector of vectors whose last one depends on the others.
fn dependency(vectors: &[RationalVector]) -> RationalVector {
    let m = RationalMatrix::new(vectors.to_vec()).expect("equal lengths").transpose();
    let (_, kernel, _) = row_echelon(&m);
    kernel.into_iter().next().expect("one-dimensional dependency")
}

/// A dependency Σ c_i β_i = 0 rewritten as a_lead β_lead = Σ a_k β_k with
/// integer coefficients of gcd 1 and a_lead > 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination {
    pub lead: usize,
    pub lead_coeff: i64,
    pub rhs: Vec<(usize, i64)>,
}

/// Normalizes a dependency vector into a [`Combination`].
pub fn normalize_combination(coeffs: &[Rational]) -> Combination {
    let lead = coeffs.iter().position(|c| !c.is_zero()).expect("non-zero dependency");
    let l = crate::arith::lcm_denominators(coeffs);
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * rat_int(&l)).to_integer()).collect();
    let g = crate::arith::gcd_all(&ints);
    let sign = if ints[lead].is_negative() { -BigInt::one() } else { BigInt::one() };
    let ints: Vec<i64> = ints.iter().map(|x| (x / &g * &sign).to_i64().expect("small coefficients")).collect();
    let rhs = (lead + 1..ints.len()).filter(|&k| ints[k] != 0).map(|k| (k, -ints[k])).collect();
    Combination { lead, lead_coeff: ints[lead], rhs }
}

/// Applies the generalized Szenes–Vergne formula to 1/∏(1 - x^{δ_j}):
/// returns (numerator, indices of the δ's remaining in the denominator) per
/// summand; every summand also carries the factor 1/(1 - x^{Σ a_j δ_j}).
pub fn szenes_vergne_apply(deltas: &[Vec<i64>], a: &[i64]) -> Result<Vec<(LaurentPolynomial, Vec<usize>)>> {
    assert_eq!(deltas.len(), a.len(), "one coefficient per vector");
    let n = deltas[0].len();
    let mut target = vec![0i64; n];
    for (d, &k) in deltas.iter().zip(a) {
        target = add_exponents(&target, &scale_exponent(d, k));
    }
    if target.iter().all(|&x| x == 0) || a.contains(&0) {
        return Err(Error::InvalidCombination);
    }
    let mut prefix = vec![0i64; n];
    let mut out = Vec::new();
    for j in 0..deltas.len() {
        let num = LaurentPolynomial::geometric(&deltas[j], a[j]).shift(&prefix);
        let rest: Vec<usize> = (0..deltas.len()).filter(|&i| i != j).collect();
        out.push((num, rest));
        prefix = add_exponents(&prefix, &scale_exponent(&deltas[j], a[j]));
    }
    Ok(out)
}

/// A fully reduced single-monomial fraction c·x^δ / ∏(1 - x^{β_i})^{m_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedFraction {
    pub shift: IntVector,
    pub coefficient: Rational,
    pub directions: Vec<IntVector>,
    pub multiplicities: Vec<u32>,
}

impl ReducedFraction {
    /// Dual vectors β_i* with ⟨β_i*, β_k⟩ = [i = k].
    pub fn duals(&self) -> Result<Vec<RationalVector>> {
        dual_basis(&self.directions)
    }

    /// Exact value of the fraction at a rational point.
    pub fn value(&self, point: &[Rational]) -> Result<Rational> {
        let exps = |v: &IntVector| -> Vec<i64> { v.iter().map(|x| x.to_i64().expect("exponent fits in 64 bits")).collect() };
        let mut out = &self.coefficient * monomial_value(point, &exps(&self.shift))?;
        for (d, &m) in self.directions.iter().zip(&self.multiplicities) {
            let f = Rational::one() - monomial_value(point, &exps(d))?;
            if f.is_zero() {
                return Err(Error::PoleAtPoint);
            }
            out /= num_traits::pow(f, m as usize);
        }
        Ok(out)
    }

    /// Coefficient of x^γ in the power series expansion of the fraction.
    pub fn series_coefficient(&self, gamma: &[BigInt]) -> Result<Rational> {
        let duals = self.duals()?;
        let diff: RationalVector = gamma.iter().zip(&self.shift).map(|(g, d)| rat_int(&(g - d))).collect();
        let mut value = self.coefficient.clone();
        for (d, &m) in duals.iter().zip(&self.multiplicities) {
            let k: Rational = d.iter().zip(&diff).map(|(a, b)| a * b).sum();
            if !k.is_integer() || k.is_negative() {
                return Ok(Rational::zero());
            }
            value *= rat_int(&binomial(&(k.to_integer() + (m as i64) - 1), m - 1));
        }
        Ok(value)
    }

    /// The cone of the directions, the shift, and the quasipolynomial
    /// γ ↦ c·ι_{Λ(β)}(γ - δ)·∏ binom(⟨β_i*, γ - δ⟩ + m_i - 1, m_i - 1).
    pub fn to_quasipoly(&self) -> Result<(Chamber, IntVector, QuasiPolynomial)> {
        let n = self.shift.len();
        let duals = self.duals()?;
        let shift_r: RationalVector = self.shift.iter().map(rat_int).collect();
        let mut p = Polynomial::constant(n, self.coefficient.clone());
        for (d, &m) in duals.iter().zip(&self.multiplicities) {
            let k: Rational = d.iter().zip(&shift_r).map(|(a, b)| a * b).sum();
            p = &p * &binomial_poly(&Polynomial::linear(d, -k), m);
        }
        let lattice = Lattice::from_int_generators(&self.directions)?;
        let qp = QuasiPolynomial::new(lattice, [(self.shift.clone(), p)])?;
        Ok((Chamber::from_generators(&self.directions)?, self.shift.clone(), qp))
    }
}

/// Columns of A⁻¹ where the rows of A are the given directions.
pub fn dual_basis(directions: &[IntVector]) -> Result<Vec<RationalVector>> {
    let a = RationalMatrix::from_int_rows(directions)?;
    let inv = invert(&a).map_err(|_| Error::NotFullRank { rank: rank_int(directions), dim: directions.len() })?;
    Ok(inv.transpose().into_rows())
}

/// binom(y + m - 1, m - 1) as a polynomial, for a polynomial y.
fn binomial_poly(y: &Polynomial, m: u32) -> Polynomial {
    let n = y.nvars();
    let mut out = Polynomial::one(n);
    for j in 1..m {
        let factor = (y + &Polynomial::constant(n, Rational::from_integer(BigInt::from(j)))).scale(&Rational::new(
            BigInt::one(),
            BigInt::from(j),
        ));
        out = &out * &factor;
    }
    out
}

fn binomial(n: &BigInt, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// A pseudo-random pole-free rational point for substitution checks.
pub fn random_point(n: usize, rng: &mut impl rand::Rng) -> RationalVector {
    (0..n)
        .map(|_| {
            let num: i64 = rng.gen_range(1..=9);
            let den: i64 = rng.gen_range(2..=11);
            Rational::new(BigInt::from(num), BigInt::from(den + num))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ivec, rat};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn vs(rows: &[&[i64]]) -> Vec<IntVector> {
        rows.iter().map(|r| ivec(r)).collect()
    }

    /// Renders a sum as sorted "numerator | denominator" strings for golden
    /// comparisons.
    fn shape(s: &PartialFractionSum) -> Vec<String> {
        let mut out: Vec<String> = s
            .fractions()
            .iter()
            .map(|(k, num)| {
                let mut dens = Vec::new();
                for (i, list) in k.entries().iter().enumerate() {
                    for &(b, m) in list {
                        dens.push(format!("{:?}^{}", scale_exponent(&s.delta_exp[i], b), m));
                    }
                }
                format!("{} | {}", num.to_text(), dens.join(" "))
            })
            .collect();
        out.sort();
        out
    }

    fn points(n: usize) -> Vec<RationalVector> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        (0..5).map(|_| random_point(n, &mut rng)).collect()
    }

    #[test]
    fn generating_sum_examples() {
        let s = PartialFractionSum::generating_sum(&vs(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(shape(&s), vec!["1 | [1, 0]^1 [0, 1]^1 [1, 1]^1"]);
        assert_eq!(PartialFractionSum::generating_sum(&vs(&[&[0, 0], &[1, 0]])), Err(Error::ZeroVector));
        assert_eq!(PartialFractionSum::generating_sum(&vs(&[&[1, 0]])).unwrap_err(), Error::NotFullRank { rank: 1, dim: 2 });
        assert!(matches!(
            PartialFractionSum::generating_sum(&vs(&[&[1, -1], &[0, 1]])),
            Err(Error::NegativeCoordinate(_))
        ));
    }

    #[test]
    fn szenes_vergne_examples() {
        // 1/((1-x2)(1-x1x2)) with (1,0) = -(0,1) + (1,1).
        let terms = szenes_vergne_apply(&[vec![0, 1], vec![1, 1]], &[-1, 1]).unwrap();
        assert_eq!(terms[0].0, LaurentPolynomial::monomial(vec![0, -1], rat(-1, 1)));
        assert_eq!(terms[0].1, vec![1]);
        assert_eq!(terms[1].0, LaurentPolynomial::monomial(vec![0, -1], rat(1, 1)));
        assert_eq!(terms[1].1, vec![0]);
        // k = 1, a = 2: (1 + x^α)/(1 - x^{2α}).
        let g = szenes_vergne_apply(&[vec![1, 0]], &[2]).unwrap();
        let mut expected = LaurentPolynomial::one(2);
        expected.add_term(vec![1, 0], rat(1, 1));
        assert_eq!(g[0].0, expected);
        // k = 1, a = -1: -x^{-α}/(1 - x^{-α}) equals 1/(1 - x^α) numerically.
        let g = szenes_vergne_apply(&[vec![1, 2]], &[-1]).unwrap();
        let p = vec![rat(2, 3), rat(3, 7)];
        let y = monomial_value(&p, &[1, 2]).unwrap();
        let lhs = (rat(1, 1) - y.clone()).recip();
        let rhs = g[0].0.eval(&p).unwrap() / (rat(1, 1) - y.recip());
        assert_eq!(lhs, rhs);
        assert_eq!(szenes_vergne_apply(&[vec![1, 0], vec![1, 0]], &[1, -1]), Err(Error::InvalidCombination));
    }

    #[test]
    fn a2_decomposition_matches_golden() {
        let s = PartialFractionSum::generating_sum(&vs(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap();
        let semi = s.decompose_semi_reduced();
        assert!(semi.is_fully_reduced());
        assert_eq!(shape(&semi), vec!["-x2^-1 | [1, 0]^2 [1, 1]^1", "x2^-1 | [1, 0]^2 [0, 1]^1"]);
        assert_eq!(semi.reduce_fully(), semi);
        assert_eq!(semi.decompose_semi_reduced(), semi);
    }

    #[test]
    fn b2_decomposition_matches_golden() {
        let s = PartialFractionSum::generating_sum(&vs(&[&[1, 0], &[0, 1], &[1, 1], &[1, 2]])).unwrap();
        let semi = s.decompose_semi_reduced();
        assert_eq!(
            shape(&semi),
            vec![
                "-x1 - x2^-1 - x2^-2 - x2^-3 | [1, 0]^3 [1, 2]^1",
                "x1*x2^-1 | [1, 0]^3 [1, 1]^1",
                "x2^-3 | [1, 0]^3 [0, 1]^1",
            ]
        );
        for p in points(2) {
            assert_eq!(s.numeric_check(&p).unwrap(), semi.numeric_check(&p).unwrap());
        }
    }

    #[test]
    fn elongation_example_reduces_fully() {
        let s = PartialFractionSum::generating_sum(&vs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[2, 2, 2]])).unwrap();
        let semi = s.decompose_semi_reduced();
        assert!(semi.is_semi_reduced());
        assert!(!semi.is_fully_reduced());
        let full = semi.reduce_fully();
        assert!(full.is_fully_reduced());
        assert_eq!(
            shape(&full),
            vec![
                "-x1*x2^-1 - x1*x2^-2 - x2^-1 - x2^-2 | [2, 0, 0]^2 [0, 0, 1]^1 [2, 2, 2]^1",
                "-x1*x2^-2*x3^-1 - x1*x2^-2*x3^-2 - x2^-2*x3^-1 - x2^-2*x3^-2 | [2, 0, 0]^2 [0, 1, 0]^1 [2, 2, 2]^1",
                "x1*x2^-2*x3^-2 + x2^-2*x3^-2 | [2, 0, 0]^2 [0, 1, 0]^1 [0, 0, 1]^1",
            ]
        );
        for p in points(3) {
            let v = s.numeric_check(&p).unwrap();
            assert_eq!(semi.numeric_check(&p).unwrap(), v);
            assert_eq!(full.numeric_check(&p).unwrap(), v);
        }
        assert_eq!(full.reduce_fully(), full);
    }

    #[test]
    fn numeric_check_examples() {
        let s = PartialFractionSum::generating_sum(&vs(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert_eq!(s.numeric_check(&[rat(1, 2), rat(1, 3)]).unwrap(), rat(18, 5));
        assert_eq!(s.numeric_check(&[rat(1, 1), rat(1, 3)]), Err(Error::PoleAtPoint));
        let semi = s.decompose_semi_reduced();
        assert_eq!(semi.numeric_check(&[rat(1, 2), rat(1, 3)]).unwrap(), rat(18, 5));
        assert_eq!(s.empty_like().numeric_check(&[rat(1, 2), rat(1, 3)]).unwrap(), rat(0, 1));
        let full = semi.reduce_fully();
        let split: Rational =
            full.brion_vergne().unwrap().iter().map(|f| f.value(&[rat(1, 2), rat(1, 3)]).unwrap()).sum();
        assert_eq!(split, rat(18, 5));
    }

    #[test]
    fn brion_vergne_examples() {
        let s = PartialFractionSum::generating_sum(&vs(&[&[1, 0], &[0, 1], &[1, 1], &[1, 2]])).unwrap();
        let full = s.decompose_semi_reduced().reduce_fully();
        let fracs = full.brion_vergne().unwrap();
        let first = fracs.iter().find(|f| f.shift == ivec(&[1, -1])).unwrap();
        assert_eq!(first.directions, vs(&[&[1, 0], &[1, 1]]));
        assert_eq!(first.multiplicities, vec![3, 1]);
        assert_eq!(first.duals().unwrap(), vec![vec![rat(1, 1), rat(-1, 1)], vec![rat(0, 1), rat(1, 1)]]);
        // x2^-3/((1-x1)^3(1-x2)) contributes binom(x1 + 2, 2) on x2 >= -3.
        let f = fracs.iter().find(|f| f.shift == ivec(&[0, -3]) && f.directions[1] == ivec(&[0, 1])).unwrap();
        let (cone, shift, qp) = f.to_quasipoly().unwrap();
        assert_eq!(cone, Chamber::from_generators(&vs(&[&[1, 0], &[0, 1]])).unwrap());
        assert_eq!(shift, ivec(&[0, -3]));
        assert_eq!(qp.evaluate(&ivec(&[2, 1])), rat(6, 1));
        // n = 1: 1/(1-x)^2 has dual 1 and multiplicity 2.
        let one = ReducedFraction { shift: ivec(&[0]), coefficient: rat(1, 1), directions: vs(&[&[1]]), multiplicities: vec![2] };
        assert_eq!(one.duals().unwrap(), vec![vec![rat(1, 1)]]);
        for k in 0..8 {
            assert_eq!(one.series_coefficient(&ivec(&[k])).unwrap(), rat(k + 1, 1));
        }
        // Pure indicator when all multiplicities are one.
        let ind = ReducedFraction { shift: ivec(&[1, 0]), coefficient: rat(1, 1), directions: vs(&[&[2, 0], &[0, 1]]), multiplicities: vec![1, 1] };
        let (_, _, q) = ind.to_quasipoly().unwrap();
        assert_eq!(q, QuasiPolynomial::indicator(&ivec(&[1, 0]), &Lattice::from_int_generators(&vs(&[&[2, 0], &[0, 1]])).unwrap()).unwrap());
    }

    #[test]
    fn series_coefficients_count_partitions() {
        for delta in [vs(&[&[1, 0], &[0, 1], &[1, 1]]), vs(&[&[1, 0], &[0, 1], &[1, 1], &[1, 2]]), vs(&[&[2, 2], &[1, 0], &[0, 1]])] {
            let full = PartialFractionSum::generating_sum(&delta).unwrap().decompose_semi_reduced().reduce_fully();
            for g in crate::cones::box_points(2, 0, 6) {
                let expected = crate::oracle::count_partitions(&delta, &g);
                assert_eq!(full.series_coefficient(&g).unwrap(), rat_int(&expected));
            }
        }
    }

    #[test]
    fn contributions_match_single_monomial_formulas() {
        let full = PartialFractionSum::generating_sum(&vs(&[&[1, 0], &[0, 1], &[1, 1], &[1, 2]]))
            .unwrap()
            .decompose_semi_reduced()
            .reduce_fully();
        let contributions = full.contributions().unwrap();
        let singles = full.brion_vergne().unwrap();
        for g in crate::cones::box_points(2, -3, 6) {
            let grouped: Rational = contributions.iter().map(|c| c.quasipolynomial.evaluate(&g)).sum();
            let single: Rational = singles.iter().map(|f| f.to_quasipoly().unwrap().2.evaluate(&g)).sum();
            assert_eq!(grouped, single);
        }
    }

    fn small_delta() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(0i64..=2, 2), 2..5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn decomposition_preserves_values(d in small_delta()) {
            let delta: Vec<IntVector> = d.iter().map(|r| ivec(r)).collect();
            prop_assume!(validate_delta(&delta).is_ok());
            let s = PartialFractionSum::generating_sum(&delta).unwrap();
            let semi = s.decompose_semi_reduced();
            let full = semi.reduce_fully();
            prop_assert!(semi.is_semi_reduced());
            prop_assert!(full.is_fully_reduced());
            for p in points(2) {
                let v = s.numeric_check(&p);
                prop_assume!(v.is_ok());
                let v = v.unwrap();
                prop_assert_eq!(semi.numeric_check(&p).unwrap(), v.clone());
                prop_assert_eq!(full.numeric_check(&p).unwrap(), v);
            }
            for g in crate::cones::box_points(2, 0, 4) {
                prop_assert_eq!(full.series_coefficient(&g).unwrap(), rat_int(&crate::oracle::count_partitions(&delta, &g)));
            }
        }

        #[test]
        fn multiplicity_tuple_increases(d in small_delta()) {
            let delta: Vec<IntVector> = d.iter().map(|r| ivec(r)).collect();
            prop_assume!(validate_delta(&delta).is_ok());
            let s = PartialFractionSum::generating_sum(&delta).unwrap();
            let tuple = |k: &DenominatorKey| -> Vec<u32> { k.entries().iter().map(|l| l.iter().map(|p| p.1).sum()).collect() };
            let mut pending: Vec<(DenominatorKey, LaurentPolynomial)> = s.fractions().clone().into_iter().collect();
            let mut steps = 0;
            while let Some((k, num)) = pending.pop() {
                if s.directions_independent(&k) || steps > 200 {
                    continue;
                }
                steps += 1;
                let before = tuple(&k);
                let total: u32 = before.iter().sum();
                for (k2, p2) in s.szenes_vergne_step(&k, &num) {
                    let after = tuple(&k2);
                    prop_assert!(after > before);
                    prop_assert_eq!(after.iter().sum::<u32>(), total);
                    pending.push((k2, p2));
                }
            }
        }
    }
}
