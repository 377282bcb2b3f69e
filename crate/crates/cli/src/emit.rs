//! Text, JSON and LaTeX renderings of a computed result, and JSON parsing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use vecpart_core::arith::{rat_int, IntVector, Rational};
use vecpart_core::oracle::count_partitions;
use vecpart_core::{evaluate_result, Error, Lattice, Polynomial, QuasiPolynomial, Result, VpfResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

pub fn emit(result: &VpfResult, format: Format) -> Result<String> {
    match format {
        Format::Text => Ok(to_text(result)),
        Format::Json => to_json(result),
        Format::Latex => Ok(to_latex(result)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub delta: Vec<Vec<i64>>,
    pub strategy: String,
    pub algorithm: String,
    pub chambers: Vec<ChamberDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChamberDoc {
    pub id: usize,
    pub walls: Vec<Vec<i64>>,
    pub vertices: Vec<Vec<i64>>,
    pub internal_point: Vec<i64>,
    pub neighbors: BTreeMap<String, Vec<usize>>,
    pub quasipolynomial: QuasiPolynomialDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiPolynomialDoc {
    pub lattice_basis: Vec<Vec<String>>,
    pub pieces: Vec<PieceDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceDoc {
    pub shift: Vec<i64>,
    pub polynomial: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

fn small(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Parse(format!("coordinate {x} does not fit in 64 bits"))))
        .collect()
}

fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(rat_int(&s.trim().parse::<BigInt>().map_err(|_| bad())?)),
    }
}

fn qp_doc(q: &QuasiPolynomial) -> Result<QuasiPolynomialDoc> {
    let lattice_basis = q.lattice().basis().rows().iter().map(|r| r.iter().map(rational_string).collect()).collect();
    let mut pieces = Vec::new();
    for (shift, p) in q.pieces() {
        let polynomial = p
            .terms()
            .iter()
            .map(|(e, c)| TermDoc { exponents: e.clone(), coefficient: rational_string(c) })
            .collect();
        pieces.push(PieceDoc { shift: small(shift)?, polynomial });
    }
    Ok(QuasiPolynomialDoc { lattice_basis, pieces })
}

/// The JSON document of a result.
pub fn document(result: &VpfResult) -> Result<Document> {
    let mut chambers = Vec::new();
    for c in result.complex.chambers() {
        let mut neighbors = BTreeMap::new();
        for (i, w) in c.walls().iter().enumerate() {
            neighbors.insert(i.to_string(), result.complex.neighbors(c.id, w).into_iter().collect());
        }
        chambers.push(ChamberDoc {
            id: c.id,
            walls: c.walls().iter().map(|w| small(w)).collect::<Result<_>>()?,
            vertices: c.vertices().iter().map(|v| small(v)).collect::<Result<_>>()?,
            internal_point: small(&c.internal_point())?,
            neighbors,
            quasipolynomial: qp_doc(&result.formulas[&c.id])?,
        });
    }
    Ok(Document {
        delta: result.delta.iter().map(|v| small(v)).collect::<Result<_>>()?,
        strategy: result.strategy.to_string(),
        algorithm: result.algorithm.to_string(),
        chambers,
    })
}

pub fn to_json(result: &VpfResult) -> Result<String> {
    let doc = document(result)?;
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))
}

/// Rebuilds a quasipolynomial from its JSON form.
pub fn quasipolynomial_from_doc(doc: &QuasiPolynomialDoc) -> Result<QuasiPolynomial> {
    let rows: Vec<Vec<Rational>> = doc
        .lattice_basis
        .iter()
        .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let lattice = Lattice::from_generators(&rows)?;
    let n = lattice.dim();
    let mut pieces = Vec::new();
    for piece in &doc.pieces {
        let terms = piece
            .polynomial
            .iter()
            .map(|t| Ok((t.exponents.clone(), parse_rational(&t.coefficient)?)))
            .collect::<Result<Vec<_>>>()?;
        if terms.iter().any(|(e, _)| e.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: terms[0].0.len() });
        }
        let shift: IntVector = piece.shift.iter().map(|&x| BigInt::from(x)).collect();
        pieces.push((shift, Polynomial::from_terms(n, terms)));
    }
    QuasiPolynomial::new(lattice, pieces)
}

/// Per-chamber formulas read back from a JSON document.
pub fn formulas_from_json(text: &str) -> Result<BTreeMap<usize, QuasiPolynomial>> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.chambers.iter().map(|c| Ok((c.id, quasipolynomial_from_doc(&c.quasipolynomial)?))).collect()
}

fn pretty_vector(v: &[BigInt]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn pretty_vectors(vs: &[IntVector]) -> String {
    vs.iter().map(|v| pretty_vector(v)).collect::<Vec<_>>().join(", ")
}

fn neighbor_ids(result: &VpfResult, id: usize) -> Vec<usize> {
    result.complex.all_neighbors(id).into_iter().collect()
}

fn linear_form(w: &[BigInt], latex: bool) -> String {
    let coeffs: Vec<Rational> = w.iter().map(rat_int).collect();
    let p = Polynomial::linear(&coeffs, Rational::zero());
    if latex {
        p.to_latex()
    } else {
        p.to_text()
    }
}

pub fn to_text(result: &VpfResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vectors: {}", pretty_vectors(&result.delta));
    let _ = writeln!(out, "strategy: {}, algorithm: {}", result.strategy, result.algorithm);
    let _ = writeln!(out, "chambers: {}", result.complex.len());
    for c in result.complex.chambers() {
        let _ = writeln!(out);
        let _ = writeln!(out, "chamber {}", c.id);
        let inequalities: Vec<String> = c.walls().iter().map(|w| format!("{} >= 0", linear_form(w, false))).collect();
        let _ = writeln!(out, "  inequalities: {}", inequalities.join(", "));
        let _ = writeln!(out, "  vertices: {}", pretty_vectors(c.vertices()));
        let _ = writeln!(out, "  internal point: {}", pretty_vector(&c.internal_point()));
        let _ = writeln!(out, "  neighbors: {:?}", neighbor_ids(result, c.id));
        let formula = result.formulas[&c.id].to_text().replace('\n', "\n  ");
        let _ = writeln!(out, "  P = {formula}");
    }
    out
}

fn latex_lattice(q: &QuasiPolynomial) -> String {
    let rows: Vec<String> = q
        .lattice()
        .basis()
        .rows()
        .iter()
        .map(|r| format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("\\Lambda=\\langle({})\\rangle", rows.join(","))
}

fn latex_value(result: &VpfResult, point: &[BigInt]) -> String {
    match evaluate_result(result, point) {
        Ok(v) => {
            let check = if point.iter().all(|x| x >= &BigInt::zero()) && count_partitions(&result.delta, point) == v {
                "\\checkmark"
            } else {
                ""
            };
            format!("{}: {}{}", pretty_vector(point), v, check)
        }
        Err(e) => format!("{}: {}", pretty_vector(point), e),
    }
}

pub fn to_latex(result: &VpfResult) -> String {
    let title = format!("V.p.f. of {}", pretty_vectors(&result.delta));
    let mut out = String::new();
    out.push_str("\\documentclass{article}\n\\usepackage{amssymb,longtable,multirow}\n\\begin{document}\n");
    let _ = writeln!(
        out,
        "\\begin{{longtable}}{{|c|c|c|}}\\caption{{\\footnotesize {title}}}\\\\\\hline N & Polynomial/Lattice & Shift(s)\\\\ \\hline"
    );
    out.push_str("\\endfirsthead\\hline N & Polynomial/Lattice & Shift(s)\\\\ \\hline\\endhead\n");
    for c in result.complex.chambers() {
        let q = &result.formulas[&c.id];
        if q.lattice().is_standard() || q.is_zero() {
            let p = q.pieces().first().map_or_else(|| "0".to_string(), |(_, p)| p.to_latex());
            let _ = writeln!(out, "{}&\\({}\\)&-\\\\\n\\hline\\hline", c.id, p);
        } else {
            let pieces = q.pieces();
            let _ = writeln!(
                out,
                "\\multirow{{{}}}{{*}}{{{}}}&\\({}\\)&\\\\\\cline{{2-3}}",
                pieces.len() + 1,
                c.id,
                latex_lattice(q)
            );
            for (shift, p) in pieces {
                let _ = writeln!(out, "&\\({}\\)&\\({}\\)\\\\\\cline{{2-3}}", p.to_latex(), pretty_vector(shift));
            }
            out.push_str("\\hline\\hline\n");
        }
    }
    out.push_str("\\end{longtable}\n\n");
    let _ = writeln!(
        out,
        "\\begin{{longtable}}{{|ccccc|}}\\caption{{\\footnotesize {title}}}\\\\\\hline N & Defining inequalities & Vertices & Int. Pt. & Neighbors\\\\ \\hline"
    );
    out.push_str("\\endfirsthead\\hline N & Defining inequalities & Vertices & Int. Pt. & Neighbors\\\\ \\hline\\endhead\n");
    for c in result.complex.chambers() {
        let inequalities: String =
            c.walls().iter().map(|w| format!("{}&\\geq& 0\\\\", linear_form(w, true))).collect();
        let vertices: Vec<String> = c.vertices().iter().map(|v| latex_value(result, v)).collect();
        let _ = writeln!(
            out,
            "{}&\\(\\begin{{array}}{{rcl}}{}\\end{{array}}\\)&\\(\\begin{{array}}{{l}}{}\\end{{array}}\\)&{}&{:?}\\\\\\hline",
            c.id,
            inequalities,
            vertices.join("\\\\"),
            latex_value(result, &c.internal_point()),
            neighbor_ids(result, c.id)
        );
    }
    out.push_str("\\end{longtable}\n\\end{document}\n");
    out
}
