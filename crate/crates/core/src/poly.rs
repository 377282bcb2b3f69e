//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{rat_int, Rational};

/// Multivariate polynomial in a fixed number of variables. Coefficients are
/// keyed by exponent vectors; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The variable x_i (zero-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// The affine polynomial Σ coeffs_i x_i + c.
    pub fn linear(coeffs: &[Rational], c: Rational) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, c);
        for (i, a) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, a.clone());
        }
        p
    }

    /// Builds a polynomial from (exponents, coefficient) pairs.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length must match variable count");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Constant term, when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Value at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension must match variable count");
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Value at an integer point.
    pub fn eval_int(&self, point: &[BigInt]) -> Rational {
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = BigInt::one();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += c * rat_int(&t);
        }
        total
    }

    /// Substitutes `subs[i]` for the variable x_i. All substituted polynomials
    /// must share a variable count, which becomes that of the result.
    pub fn compose(&self, subs: &[Polynomial]) -> Polynomial {
        assert_eq!(subs.len(), self.nvars, "one substitution per variable");
        let m = subs.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<Vec<Polynomial>> = subs.iter().map(|s| vec![Polynomial::one(s.nvars)]).collect();
        let mut out = Polynomial::zero(m);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &subs[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Writes the polynomial as Σ_k c_k · x_last^k and returns the c_k as
    /// polynomials in the remaining variables.
    pub fn collect_last_var(&self) -> Vec<Polynomial> {
        assert!(self.nvars > 0, "polynomial has no variables");
        let m = self.nvars - 1;
        let mut out: Vec<Polynomial> = Vec::new();
        for (e, c) in &self.terms {
            let k = e[m] as usize;
            while out.len() <= k {
                out.push(Polynomial::zero(m));
            }
            out[k].add_term(e[..m].to_vec(), c.clone());
        }
        out
    }

    /// Adds `extra` unused trailing variables.
    pub fn extend_vars(&self, extra: usize) -> Polynomial {
        Polynomial {
            nvars: self.nvars + extra,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.extend(std::iter::repeat_n(0, extra));
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Terms ordered for display: higher total degree first, then
    /// lexicographically larger exponents first.
    pub fn display_terms(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        t
    }

    /// Plain-text rendering such as `-1/2*x1^2 + x1*x2 + 3/4`.
    pub fn to_text(&self) -> String {
        self.render(false)
    }

    /// LaTeX rendering such as `-\frac{1}{2}x_{1}^{2} + x_{1}x_{2} + \frac{3}{4}`.
    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.display_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| match (latex, k) {
                    (true, 1) => format!("x_{{{}}}", i + 1),
                    (true, _) => format!("x_{{{}}}^{{{}}}", i + 1, k),
                    (false, 1) => format!("x{}", i + 1),
                    (false, _) => format!("x{}^{}", i + 1, k),
                })
                .collect();
            let coeff = if latex {
                if a.is_integer() {
                    a.numer().to_string()
                } else {
                    format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
                }
            } else {
                a.to_string()
            };
            if monomial.is_empty() {
                out.push_str(&coeff);
            } else {
                if !a.is_one() {
                    out.push_str(&coeff);
                    if !latex {
                        out.push('*');
                    }
                }
                out.push_str(&monomial.join(if latex { "" } else { "*" }));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "variable counts must agree");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, other: &Polynomial) -> Polynomial {
        self + &(-other)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "variable counts must agree");
        let mut out = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

/// B_k(X) = Σ_{t=0}^{X} t^k as a polynomial of degree k + 1 in one variable,
/// obtained by exact Lagrange interpolation through X = -1, 0, …, k.
pub fn bernoulli_sum(k: u32) -> Polynomial {
    let nodes: Vec<i64> = (-1..=k as i64).collect();
    let values: Vec<Rational> = nodes
        .iter()
        .map(|&x| {
            let mut s = BigInt::zero();
            for t in 0..=x.max(-1) {
                s += num_traits::pow(BigInt::from(t), k as usize);
            }
            if x < 0 {
                Rational::zero()
            } else {
                rat_int(&s)
            }
        })
        .collect();
    let x = Polynomial::var(1, 0);
    let mut out = Polynomial::zero(1);
    for (i, &xi) in nodes.iter().enumerate() {
        if values[i].is_zero() {
            continue;
        }
        let mut basis = Polynomial::one(1);
        let mut denom = Rational::one();
        for (j, &xj) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = &basis * &(&x - &Polynomial::constant(1, Rational::from_integer(BigInt::from(xj))));
            denom *= Rational::from_integer(BigInt::from(xi - xj));
        }
        out = &out + &basis.scale(&(&values[i] / denom));
    }
    out
}
