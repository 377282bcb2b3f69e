//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Usage: `cargo test -p vecpart-core --release --test acceptance [-- --slow] [-- --strict]`.
//! `--slow` adds the D4 arbitrary chamber count. `--strict` turns any FAIL
//! into a nonzero exit status; without it the run always exits 0 so that the
//! workspace test suite reports the lines without aborting.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vecpart_core::arith::{determinant_int, floor, integral_gaussian_eliminate, ivec, rat, rat_int, RationalMatrix};
use vecpart_core::complex::chambers_arbitrary;
use vecpart_core::cones::{normals_from_generators, vertices_from_normals};
use vecpart_core::engine::chambers;
use vecpart_core::oracle::CountTable;
use vecpart_core::poly::bernoulli_sum;
use vecpart_core::quasipoly::eliminate_floor_linear;
use vecpart_core::{
    compute_elementary, compute_pf, evaluate_result, identity_check, root_system, IntVector, Lattice,
    PartialFractionSum, Polynomial, QuasiPolynomial, Rational, Strategy, VpfResult,
};

/// Wall-clock budget for all proper chamber counts.
const PROPER_COUNT_BUDGET: Duration = Duration::from_secs(600);
/// Wall-clock budget for the oracle grid comparison.
const GRID_BUDGET: Duration = Duration::from_secs(300);
/// Coordinates of the oracle grid run over 0..=GRID_BOUND.
const GRID_BOUND: usize = 10;
/// Coordinates of the cross-algorithm grid run over 0..CROSS_GRID.
const CROSS_GRID: usize = 12;
/// Random points per preset for the decomposition identity.
const IDENTITY_POINTS: usize = 5;
/// Seed for every random choice in this run.
const SEED: u64 = 20_240_601;
/// Presets whose decomposition identity is checked.
const PRESETS: [&str; 9] = ["A2", "B2", "C2", "G2", "A3", "B3", "C3", "A4", "D4"];

const PROPER_COUNTS: [(&str, usize); 8] =
    [("A2", 2), ("B2", 3), ("C2", 3), ("G2", 5), ("A3", 7), ("B3", 23), ("C3", 23), ("A4", 48)];
const ARBITRARY_COUNTS: [(&str, usize); 3] = [("B3", 45), ("C3", 31), ("A4", 56)];
const ARBITRARY_SLOW: (&str, usize) = ("D4", 12721);
const AMALGAMATED_COUNTS: [(&str, usize); 2] = [("D4", 133), ("A4", 48)];

/// Known values at chamber internal points and vertices.
const TABLE_VALUES: &[(&str, &[i64], i64)] = &[
    ("A2", &[0, 1], 1),
    ("A2", &[1, 0], 1),
    ("A2", &[1, 1], 2),
    ("A2", &[1, 2], 2),
    ("A2", &[2, 1], 2),
    ("B2", &[0, 1], 1),
    ("B2", &[1, 0], 1),
    ("B2", &[1, 1], 2),
    ("B2", &[1, 2], 3),
    ("B2", &[1, 3], 3),
    ("B2", &[2, 1], 2),
    ("B2", &[2, 3], 5),
    ("C2", &[0, 1], 1),
    ("C2", &[1, 0], 1),
    ("C2", &[1, 1], 2),
    ("C2", &[1, 2], 2),
    ("C2", &[2, 1], 3),
    ("C2", &[3, 1], 3),
    ("C2", &[3, 2], 5),
    ("G2", &[0, 1], 1),
    ("G2", &[1, 0], 1),
    ("G2", &[1, 1], 2),
    ("G2", &[1, 2], 2),
    ("G2", &[2, 1], 3),
    ("G2", &[3, 1], 4),
    ("G2", &[3, 2], 7),
    ("G2", &[4, 1], 4),
    ("G2", &[4, 3], 12),
    ("G2", &[5, 2], 10),
    ("G2", &[5, 3], 16),
    ("A3", &[0, 0, 1], 1),
    ("A3", &[0, 1, 0], 1),
    ("A3", &[0, 1, 1], 2),
    ("A3", &[1, 0, 0], 1),
    ("A3", &[1, 1, 0], 2),
    ("A3", &[1, 1, 1], 4),
    ("A3", &[1, 2, 1], 5),
    ("A3", &[1, 2, 3], 7),
    ("A3", &[1, 4, 2], 8),
    ("A3", &[2, 1, 2], 4),
    ("A3", &[2, 4, 1], 8),
    ("A3", &[2, 4, 3], 19),
    ("A3", &[3, 2, 1], 7),
    ("A3", &[3, 4, 2], 19),
    ("C3", &[4, 3, 2], 28),
];

type Outcome = std::result::Result<String, String>;

struct Report {
    passed: usize,
    failed: usize,
}

impl Report {
    fn run(&mut self, id: &str, title: &str, check: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => {
                self.passed += 1;
                println!("PASS [{id}] {title}: {detail} ({secs:.1}s)");
            }
            Err(detail) => {
                self.failed += 1;
                println!("FAIL [{id}] {title}: {detail} ({secs:.1}s)");
            }
        }
    }
}

/// Proper-strategy partial fraction results, computed once per root system.
struct Cache {
    results: BTreeMap<&'static str, VpfResult>,
}

impl Cache {
    fn pf(&mut self, name: &'static str) -> std::result::Result<&VpfResult, String> {
        if !self.results.contains_key(name) {
            let r = compute_pf(&roots(name)?, Strategy::Proper).map_err(|e| format!("{name}: {e}"))?;
            self.results.insert(name, r);
        }
        Ok(&self.results[name])
    }
}

fn roots(name: &str) -> std::result::Result<Vec<IntVector>, String> {
    root_system(name).map_err(|e| format!("{name}: {e}"))
}

fn vecs(rows: &[&[i64]]) -> Vec<IntVector> {
    rows.iter().map(|r| ivec(r)).collect()
}

fn grid(n: usize, hi: usize) -> Vec<IntVector> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..=hi as i64).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.iter().map(|p| ivec(p)).collect()
}

fn count_check(list: &[(&str, usize)], strategy: Strategy) -> Outcome {
    let mut got = Vec::new();
    let mut wrong = Vec::new();
    for &(name, want) in list {
        let n = chambers(&roots(name)?, strategy).map_err(|e| format!("{name}: {e}"))?.len();
        got.push(format!("{name} {n}"));
        if n != want {
            wrong.push(format!("{name} has {n}, expected {want}"));
        }
    }
    if wrong.is_empty() {
        Ok(got.join(", "))
    } else {
        Err(wrong.join("; "))
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let detail = count_check(&PROPER_COUNTS, Strategy::Proper)?;
    let elapsed = start.elapsed();
    if elapsed > PROPER_COUNT_BUDGET {
        return Err(format!("{detail} in {elapsed:?}, budget {PROPER_COUNT_BUDGET:?}"));
    }
    Ok(detail)
}

fn criterion_2(slow: bool) -> Outcome {
    let mut detail = count_check(&ARBITRARY_COUNTS, Strategy::Arbitrary)?;
    if slow {
        let (name, want) = ARBITRARY_SLOW;
        let n = chambers_arbitrary(&roots(name)?).map_err(|e| e.to_string())?.len();
        if n != want {
            return Err(format!("{name} has {n}, expected {want}"));
        }
        detail.push_str(&format!(", {name} {n}"));
    }
    Ok(detail)
}

fn criterion_4(cache: &mut Cache) -> Outcome {
    let x = |i: usize| Polynomial::var(2, i);
    let c = |p: i64, q: i64| Polynomial::constant(2, rat(p, q));
    let half = rat(1, 2);
    let quarter = rat(1, 4);
    let lattice = Lattice::from_int_generators(&vecs(&[&[1, 0], &[0, 2]])).map_err(|e| e.to_string())?;
    let b2_second = &x(1).pow(2).scale(&quarter) + &x(1);
    let b2_third = &(&(&(&x(0).pow(2).scale(&-&half) + &(&x(0) * &x(1))) - &x(1).pow(2).scale(&quarter))
        + &x(0).scale(&half))
        + &x(1).scale(&half);
    let qp = |pieces: [(IntVector, Polynomial); 2]| QuasiPolynomial::new(lattice.clone(), pieces).map_err(|e| e.to_string());
    let expected: [(&'static str, Vec<QuasiPolynomial>); 2] = [
        (
            "A2",
            vec![
                QuasiPolynomial::from_polynomial(&x(0) + &c(1, 1)),
                QuasiPolynomial::from_polynomial(&x(1) + &c(1, 1)),
            ],
        ),
        (
            "B2",
            vec![
                QuasiPolynomial::from_polynomial(&(&x(0).pow(2).scale(&half) + &x(0).scale(&rat(3, 2))) + &c(1, 1)),
                qp([(ivec(&[0, 0]), &b2_second + &c(1, 1)), (ivec(&[0, 1]), &b2_second + &c(3, 4))])?,
                qp([(ivec(&[0, 0]), &b2_third + &c(1, 1)), (ivec(&[0, 1]), &b2_third + &c(3, 4))])?,
            ],
        ),
    ];
    for (name, want) in expected {
        let r = cache.pf(name)?;
        let mut got: Vec<String> = r.formulas.values().map(|q| q.to_text()).collect();
        let mut want: Vec<String> = want.iter().map(|q| q.to_text()).collect();
        got.sort();
        want.sort();
        if got != want {
            return Err(format!("{name} formulas {got:?}, expected {want:?}"));
        }
    }
    Ok("A2 2 formulas and B2 3 formulas identical".into())
}

fn criterion_5(cache: &mut Cache) -> Outcome {
    for &(name, point, want) in TABLE_VALUES {
        let r = cache.pf(name)?;
        let got = evaluate_result(r, &ivec(point)).map_err(|e| format!("{name} at {point:?}: {e}"))?;
        if got != BigInt::from(want) {
            return Err(format!("{name} at {point:?} gives {got}, expected {want}"));
        }
    }
    Ok(format!("{} values", TABLE_VALUES.len()))
}

fn compare_with_oracle(r: &VpfResult, bound: usize) -> std::result::Result<usize, String> {
    let n = r.dim();
    let table = CountTable::new(&r.delta, &vec![bound; n]);
    let points = grid(n, bound);
    for g in &points {
        let got = evaluate_result(r, g).map_err(|e| e.to_string())?;
        let want = table.get(g).expect("inside the table");
        if got != want {
            return Err(format!("mismatch at {g:?}: formula {got}, oracle {want}"));
        }
    }
    Ok(points.len())
}

fn criterion_6(cache: &mut Cache) -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for name in ["A2", "B2", "C2", "G2", "A3"] {
        let r = cache.pf(name)?;
        total += compare_with_oracle(r, GRID_BOUND).map_err(|e| format!("{name}: {e}"))?;
    }
    let elapsed = start.elapsed();
    if elapsed > GRID_BUDGET {
        return Err(format!("{total} points in {elapsed:?}, budget {GRID_BUDGET:?}"));
    }
    Ok(format!("{total} points, 0 mismatches"))
}

fn criterion_7() -> Outcome {
    let printed = [
        ("A2", "(-x2^-1)/((1-x1)^2(1-x1*x2)) + (x2^-1)/((1-x1)^2(1-x2))"),
        (
            "B2",
            "(-x1 - x2^-1 - x2^-2 - x2^-3)/((1-x1)^3(1-x1*x2^2)) + (x1*x2^-1)/((1-x1)^3(1-x1*x2)) + (x2^-3)/((1-x1)^3(1-x2))",
        ),
    ];
    for (name, want) in printed {
        let semi = PartialFractionSum::generating_sum(&roots(name)?).map_err(|e| e.to_string())?.decompose_semi_reduced();
        let got = semi.reduce_fully().to_text();
        if got != want {
            return Err(format!("{name} decomposition {got}, expected {want}"));
        }
    }
    for name in PRESETS {
        identity_check(&roots(name)?, SEED, IDENTITY_POINTS).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} presets at {IDENTITY_POINTS} points, A2 and B2 match term for term", PRESETS.len()))
}

fn criterion_8() -> Outcome {
    let worked = vecs(&[&[2, 2], &[1, 0], &[0, 1]]);
    let el = compute_elementary(&worked, Strategy::Arbitrary).map_err(|e| e.to_string())?;
    let c1 = el.complex.chambers().find(|c| c.contains_in_interior(&ivec(&[2, 1]))).ok_or("no chamber at (2, 1)")?;
    let q = &el.formulas[&c1.id];
    let x2 = Polynomial::var(2, 1).scale(&rat(1, 2));
    let lattice = Lattice::from_int_generators(&vecs(&[&[1, 0], &[0, 2]])).map_err(|e| e.to_string())?;
    let even = &x2 + &Polynomial::constant(2, rat(1, 1));
    let odd = &x2 + &Polynomial::constant(2, rat(1, 2));
    if q.lattice() != &lattice
        || q.piece_at(&ivec(&[0, 0])) != Some(&even)
        || q.piece_at(&ivec(&[0, 1])) != Some(&odd)
    {
        return Err(format!("worked example first chamber gives {q}"));
    }
    let mut inputs: Vec<(&str, Vec<IntVector>)> = vec![("A2", roots("A2")?), ("B2", roots("B2")?)];
    inputs.push(("{(2,2),(1,0),(0,1)}", worked));
    let mut total = 0;
    for (label, delta) in inputs {
        let pf = compute_pf(&delta, Strategy::Proper).map_err(|e| e.to_string())?;
        let el = compute_elementary(&delta, Strategy::Proper).map_err(|e| e.to_string())?;
        for g in grid(2, CROSS_GRID - 1) {
            let a = evaluate_result(&pf, &g).map_err(|e| e.to_string())?;
            let b = evaluate_result(&el, &g).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("{label} at {g:?}: pf {a}, elementary {b}"));
            }
            total += 1;
        }
    }
    Ok(format!("{total} points agree, worked example chamber matches"))
}

fn gcd_of_minors(rows: &[IntVector]) -> BigInt {
    let mut g = BigInt::zero();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            g = g.gcd(&determinant_int(&[rows[i].clone(), rows[j].clone()]));
        }
    }
    g
}

fn random_rows(rng: &mut ChaCha8Rng, count: usize) -> Vec<IntVector> {
    (0..count).map(|_| ivec(&[rng.gen_range(-6..=6), rng.gen_range(-6..=6)])).collect()
}

fn lattice_properties(rng: &mut ChaCha8Rng) -> Outcome {
    let mut checked = 0;
    while checked < 40 {
        let a = random_rows(rng, 2);
        let b = random_rows(rng, 3);
        if gcd_of_minors(&a).is_zero() || gcd_of_minors(&b).is_zero() {
            continue;
        }
        let la = Lattice::from_int_generators(&a).map_err(|e| e.to_string())?;
        let lb = Lattice::from_int_generators(&b).map_err(|e| e.to_string())?;
        if la.index() != gcd_of_minors(&a) || lb.index() != gcd_of_minors(&b) {
            return Err(format!("index of {a:?} or {b:?} differs from the gcd of minors"));
        }
        for v in a.iter() {
            if !la.contains_int(v) {
                return Err(format!("{v:?} missing from the lattice it generates"));
            }
        }
        let sum = la.refine(&lb);
        let meet = la.intersect(&lb);
        if !la.is_sublattice_of(&sum) || !meet.is_sublattice_of(&la) || !meet.is_sublattice_of(&lb) {
            return Err(format!("refine or intersect of {a:?} and {b:?} is not ordered"));
        }
        if meet.index() * sum.index() != la.index() * lb.index() {
            return Err(format!("index identity fails for {a:?} and {b:?}"));
        }
        let v = ivec(&[rng.gen_range(-20..=20), rng.gen_range(-20..=20)]);
        let r = la.reduce_int(&v);
        let diff: IntVector = v.iter().zip(&r).map(|(x, y)| x - y).collect();
        if !la.contains_int(&diff) || la.reduce_int(&r) != r {
            return Err(format!("reduction of {v:?} modulo {a:?}"));
        }
        checked += 1;
    }
    Ok("lattice".into())
}

fn ige_properties(rng: &mut ChaCha8Rng) -> Outcome {
    let mut checked = 0;
    while checked < 40 {
        let count = rng.gen_range(2..=4);
        let rows = random_rows(rng, count);
        let g = gcd_of_minors(&rows);
        if g.is_zero() {
            continue;
        }
        let m = RationalMatrix::from_int_rows(&rows).map_err(|e| e.to_string())?;
        let basis = integral_gaussian_eliminate(&m).drop_zero_rows();
        if basis.nrows() != 2 || !basis.is_integral() {
            return Err(format!("eliminating {rows:?} gives {} rows", basis.nrows()));
        }
        let b: Vec<IntVector> = basis.rows().iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
        if determinant_int(&b).abs() != g {
            return Err(format!("eliminating {rows:?} changes the index"));
        }
        checked += 1;
    }
    Ok("IGE".into())
}

fn cone_properties(cache: &mut Cache) -> Outcome {
    for name in ["A2", "B2", "C2", "G2", "A3", "C3"] {
        for c in cache.pf(name)?.complex.chambers() {
            let walls = normals_from_generators(c.vertices()).map_err(|e| e.to_string())?;
            if walls != c.walls() || vertices_from_normals(&walls) != c.vertices() {
                return Err(format!("{name} chamber {} does not round-trip", c.id));
            }
        }
    }
    Ok("cone round-trip".into())
}

fn bernoulli_properties() -> Outcome {
    for k in 0..=6u32 {
        let b = bernoulli_sum(k);
        let mut running = BigInt::zero();
        for x in 0..=30i64 {
            running += num_traits::pow(BigInt::from(x), k as usize);
            if b.eval(&[rat(x, 1)]) != rat_int(&running) {
                return Err(format!("power sum of degree {k} at {x}"));
            }
        }
        if !b.eval(&[rat(-1, 1)]).is_zero() {
            return Err(format!("power sum of degree {k} at -1"));
        }
    }
    Ok("Bernoulli k <= 6".into())
}

fn floor_properties(rng: &mut ChaCha8Rng) -> Outcome {
    let z2 = Lattice::standard(2);
    for _ in 0..20 {
        let a: Vec<Rational> = (0..2).map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=4))).collect();
        let c = rat(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        let k = rng.gen_range(0..=3);
        let f = bernoulli_sum(k);
        let q = eliminate_floor_linear(&ivec(&[0, 0]), &z2, &f, &a, &c).map_err(|e| e.to_string())?;
        for g in grid(2, 8) {
            let t = &a[0] * rat_int(&g[0]) + &a[1] * rat_int(&g[1]) + &c;
            let want = f.eval(&[rat_int(&floor(&t))]);
            if q.evaluate(&g) != want {
                return Err(format!("floor elimination with a = {a:?}, c = {c} at {g:?}"));
            }
        }
    }
    Ok("floor elimination".into())
}

fn qp_properties(cache: &mut Cache) -> Outcome {
    let mut names = Vec::new();
    for name in ["B2", "G2"] {
        names.push(cache.pf(name)?.formulas.values().cloned().collect::<Vec<_>>());
    }
    let all: Vec<QuasiPolynomial> = names.into_iter().flatten().collect();
    let three = rat(3, 1);
    for p in &all {
        for q in &all {
            let sum = p.add(q).map_err(|e| e.to_string())?;
            let scaled = p.scale(&three);
            for g in grid(2, 7) {
                if sum.evaluate(&g) != p.evaluate(&g) + q.evaluate(&g)
                    || sum.compress().evaluate(&g) != sum.evaluate(&g)
                    || scaled.evaluate(&g) != &three * p.evaluate(&g)
                {
                    return Err(format!("sum or scale of {p} and {q} at {g:?}"));
                }
            }
        }
    }
    Ok("QP algebra".into())
}

fn nonnegativity(cache: &mut Cache, rng: &mut ChaCha8Rng) -> Outcome {
    for name in ["A2", "B2", "C2", "G2", "A3", "C3"] {
        let r = cache.pf(name)?;
        for _ in 0..200 {
            let g: IntVector = (0..r.dim()).map(|_| BigInt::from(rng.gen_range(-5..=25))).collect();
            evaluate_result(r, &g).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    Ok("non-negative integer values".into())
}

fn criterion_9(cache: &mut Cache) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let parts = [
        lattice_properties(&mut rng)?,
        ige_properties(&mut rng)?,
        cone_properties(cache)?,
        bernoulli_properties()?,
        floor_properties(&mut rng)?,
        qp_properties(cache)?,
        nonnegativity(cache, &mut rng)?,
    ];
    Ok(parts.join(", "))
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let slow = args.iter().any(|a| a == "--slow");
    let strict = args.iter().any(|a| a == "--strict");
    let mut report = Report { passed: 0, failed: 0 };
    let mut cache = Cache { results: BTreeMap::new() };
    report.run("1", "proper chamber counts", criterion_1);
    report.run("2", "arbitrary chamber counts", || criterion_2(slow));
    report.run("3", "amalgamated chamber counts", || count_check(&AMALGAMATED_COUNTS, Strategy::Amalgamated));
    report.run("4", "A2 and B2 formulas", || criterion_4(&mut cache));
    report.run("5", "known values", || criterion_5(&mut cache));
    report.run("6", "oracle grid", || criterion_6(&mut cache));
    report.run("7", "decomposition identity", criterion_7);
    report.run("8", "pf and elementary agree", criterion_8);
    report.run("9", "property suites", || criterion_9(&mut cache));
    println!("acceptance: {} passed, {} failed", report.passed, report.failed);
    if strict && report.failed > 0 {
        std::process::exit(1);
    }
}
