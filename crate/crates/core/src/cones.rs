//! Pointed polyhedral cones given by normalized walls and vertices, and the
//! geometric predicates used by the subdivision algorithms.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{dot_int, graded_colex_cmp, hyperplane_normal, primitive, rank_int, IntVector};
use crate::error::{Error, Result};

/// A full-dimensional pointed cone {x : ⟨w, x⟩ ≥ 0 for every wall w}.
///
/// Walls and vertices are primitive integer vectors in graded colex order.
/// Two chambers are equal when their wall lists agree; the id is ignored.
#[derive(Clone)]
pub struct Chamber {
    pub id: usize,
    walls: Vec<IntVector>,
    vertices: Vec<IntVector>,
}

impl PartialEq for Chamber {
    fn eq(&self, other: &Self) -> bool {
        self.walls == other.walls
    }
}

impl Eq for Chamber {}

impl fmt::Debug for Chamber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chamber")
            .field("id", &self.id)
            .field("walls", &fmt_vectors(&self.walls))
            .field("vertices", &fmt_vectors(&self.vertices))
            .finish()
    }
}

/// Formats a list of integer vectors as `(a,b),(c,d)`.
pub fn fmt_vectors(vs: &[IntVector]) -> String {
    vs.iter().map(|v| fmt_vector(v)).join(",")
}

/// Formats an integer vector as `(a,b)`.
pub fn fmt_vector(v: &[BigInt]) -> String {
    format!("({})", v.iter().join(","))
}

/// Outcome of cutting a chamber with a hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitResult {
    NoSplit,
    Split(Chamber, Chamber),
}

fn sorted_dedup(mut vs: Vec<IntVector>) -> Vec<IntVector> {
    vs.sort_by(|a, b| graded_colex_cmp(a, b));
    vs.dedup();
    vs
}

fn negate(v: &[BigInt]) -> IntVector {
    v.iter().map(|x| -x).collect()
}

/// Normalized vertices (extreme rays) of the cone cut out by `walls`.
///
/// Every (n-1)-subset of walls with a one-dimensional common kernel gives a
/// candidate ray, which is kept when it, or its negative, has non-negative
/// product with every wall.
pub fn vertices_from_normals(walls: &[IntVector]) -> Vec<IntVector> {
    let Some(first) = walls.first() else { return Vec::new() };
    let n = first.len();
    let walls: Vec<IntVector> = sorted_dedup(walls.to_vec());
    let mut out = Vec::new();
    for subset in walls.iter().cloned().combinations(n - 1) {
        let h = hyperplane_normal(&subset, n);
        if h.iter().all(|x| x.is_zero()) {
            continue;
        }
        let products: Vec<BigInt> = walls.iter().map(|w| dot_int(w, &h)).collect();
        if products.iter().all(|p| !p.is_negative()) {
            out.push(h);
        } else if products.iter().all(|p| !p.is_positive()) {
            out.push(negate(&h));
        }
    }
    sorted_dedup(out)
}

/// Normalized walls of the cone generated by `generators`.
pub fn normals_from_generators(generators: &[IntVector]) -> Result<Vec<IntVector>> {
    let Some(first) = generators.first() else {
        return Err(Error::NotFullRank { rank: 0, dim: 0 });
    };
    let n = first.len();
    let rank = rank_int(generators);
    if rank != n {
        return Err(Error::NotFullRank { rank, dim: n });
    }
    let gens = sorted_dedup(generators.iter().map(|g| primitive(g)).collect());
    let mut out = Vec::new();
    for subset in gens.iter().cloned().combinations(n - 1) {
        let h = hyperplane_normal(&subset, n);
        if h.iter().all(|x| x.is_zero()) {
            continue;
        }
        let products: Vec<BigInt> = gens.iter().map(|g| dot_int(g, &h)).collect();
        if products.iter().all(|p| !p.is_negative()) {
            out.push(h);
        } else if products.iter().all(|p| !p.is_positive()) {
            out.push(negate(&h));
        }
    }
    Ok(sorted_dedup(out))
}

impl Chamber {
    /// Chamber from a possibly redundant list of inequalities. Returns `None`
    /// when the inequalities do not cut out a full-dimensional pointed cone.
    pub fn from_walls(walls: &[IntVector]) -> Option<Chamber> {
        let candidates: Vec<IntVector> =
            walls.iter().filter(|w| w.iter().any(|x| !x.is_zero())).map(|w| primitive(w)).collect();
        let vertices = vertices_from_normals(&candidates);
        let normalized = normals_from_generators(&vertices).ok()?;
        // A lower-dimensional intersection can still produce spanning candidate
        // rays only if some inequality is violated; re-check against the input.
        if vertices.iter().any(|v| candidates.iter().any(|w| dot_int(w, v).is_negative())) {
            return None;
        }
        let vertices = vertices_from_normals(&normalized);
        Some(Chamber { id: 0, walls: normalized, vertices })
    }

    /// The cone generated by `generators`.
    pub fn from_generators(generators: &[IntVector]) -> Result<Chamber> {
        let walls = normals_from_generators(generators)?;
        let vertices = vertices_from_normals(&walls);
        Ok(Chamber { id: 0, walls, vertices })
    }

    pub fn with_id(mut self, id: usize) -> Chamber {
        self.id = id;
        self
    }

    pub fn dim(&self) -> usize {
        self.walls[0].len()
    }

    pub fn walls(&self) -> &[IntVector] {
        &self.walls
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn has_wall(&self, w: &[BigInt]) -> bool {
        self.walls.iter().any(|x| x.as_slice() == w)
    }

    /// Whether `v` satisfies every wall inequality.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.walls.iter().all(|w| !dot_int(w, v).is_negative())
    }

    /// Whether `v` satisfies every wall inequality strictly.
    pub fn contains_in_interior(&self, v: &[BigInt]) -> bool {
        self.walls.iter().all(|w| dot_int(w, v).is_positive())
    }

    /// Whether every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Chamber) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }

    /// The primitive vector along the sum of the vertices; it lies in the
    /// interior.
    pub fn internal_point(&self) -> IntVector {
        let n = self.dim();
        let mut s = vec![BigInt::zero(); n];
        for v in &self.vertices {
            for (a, b) in s.iter_mut().zip(v) {
                *a += b;
            }
        }
        primitive(&s)
    }

    /// Vertices lying on the plane orthogonal to `a`.
    pub fn vertices_on_plane(&self, a: &[BigInt]) -> Vec<IntVector> {
        self.vertices.iter().filter(|v| dot_int(a, v).is_zero()).cloned().collect()
    }

    /// Whether the plane orthogonal to `a` has vertices strictly on both sides.
    pub fn is_split_by(&self, a: &[BigInt]) -> bool {
        let mut pos = false;
        let mut neg = false;
        for v in &self.vertices {
            let p = dot_int(a, v);
            pos |= p.is_positive();
            neg |= p.is_negative();
        }
        pos && neg
    }

    /// Cuts the chamber with the plane orthogonal to `a`.
    pub fn split_by_plane(&self, a: &[BigInt]) -> SplitResult {
        if !self.is_split_by(a) {
            return SplitResult::NoSplit;
        }
        let mut plus = self.walls.clone();
        plus.push(a.to_vec());
        let mut minus = self.walls.clone();
        minus.push(negate(a));
        match (Chamber::from_walls(&plus), Chamber::from_walls(&minus)) {
            (Some(p), Some(m)) => SplitResult::Split(p, m),
            _ => SplitResult::NoSplit,
        }
    }

    /// Whether exactly one wall has positive product with `nu`.
    pub fn is_normal_wrt(&self, nu: &[BigInt]) -> bool {
        self.walls.iter().filter(|w| dot_int(w, nu).is_positive()).count() == 1
    }

    /// Walls with positive product with `nu`.
    pub fn positive_walls(&self, nu: &[BigInt]) -> Vec<IntVector> {
        self.walls.iter().filter(|w| dot_int(w, nu).is_positive()).cloned().collect()
    }
}

/// Dimension of the intersection of two chambers.
pub fn intersection_dim(c: &Chamber, d: &Chamber) -> usize {
    let mut walls = c.walls.clone();
    walls.extend(d.walls.iter().cloned());
    let vertices = vertices_from_normals(&walls);
    if vertices.is_empty() {
        0
    } else {
        rank_int(&vertices)
    }
}

/// Whether `c` and `d` touch along a common (n-1)-dimensional patch of the
/// plane orthogonal to `a`, with `a` a wall of `c` and `-a` a wall of `d`.
pub fn touch_along(c: &Chamber, d: &Chamber, a: &[BigInt]) -> bool {
    c.has_wall(a) && d.has_wall(&negate(a)) && intersection_dim(c, d) + 1 == c.dim()
}

/// Whether two chambers are normally separated: their interiors are disjoint
/// and, when they share an (n-1)-dimensional patch, they cut the same facet
/// out of the common plane.
pub fn normally_separated(c: &Chamber, d: &Chamber) -> bool {
    let n = c.dim();
    let k = intersection_dim(c, d);
    if k == n {
        return false;
    }
    if k + 1 < n {
        return true;
    }
    for a in &c.walls {
        if !d.has_wall(&negate(a)) {
            continue;
        }
        let fc: BTreeSet<IntVector> = c.vertices_on_plane(a).into_iter().collect();
        let fd: BTreeSet<IntVector> = d.vertices_on_plane(a).into_iter().collect();
        if rank_int(&fc.iter().cloned().collect::<Vec<_>>()) + 1 == n && fc.iter().all(|v| d.contains(v)) {
            return fc == fd;
        }
    }
    // Full-rank touching patch without opposite walls cannot occur for
    // interior-disjoint convex cones; treat it as not separated.
    false
}

/// Integer points of a box, used as an oracle in tests.
#[cfg(test)]
pub(crate) fn box_points(n: usize, lo: i64, hi: i64) -> Vec<IntVector> {
    let mut pts: Vec<IntVector> = vec![Vec::new()];
    for _ in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(BigInt::from(x));
                    q
                })
            })
            .collect();
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ivec;
    use proptest::prelude::*;

    fn vs(rows: &[&[i64]]) -> Vec<IntVector> {
        rows.iter().map(|r| ivec(r)).collect()
    }

    #[test]
    fn vertices_examples() {
        assert_eq!(vertices_from_normals(&vs(&[&[1, 0], &[-1, 1]])), vs(&[&[0, 1], &[1, 1]]));
        assert_eq!(vertices_from_normals(&vs(&[&[-1, 1], &[2, -1]])), vs(&[&[1, 1], &[1, 2]]));
        assert_eq!(vertices_from_normals(&vs(&[&[1, 0], &[0, 1]])), vs(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn normals_examples() {
        assert_eq!(normals_from_generators(&vs(&[&[1, 1], &[1, 2]])).unwrap(), vs(&[&[-1, 1], &[2, -1]]));
        assert_eq!(normals_from_generators(&vs(&[&[1, 0], &[0, 1]])).unwrap(), vs(&[&[1, 0], &[0, 1]]));
        assert_eq!(
            normals_from_generators(&vs(&[&[1, 1], &[2, 2]])),
            Err(Error::NotFullRank { rank: 1, dim: 2 })
        );
    }

    #[test]
    fn round_trip_on_table_chambers() {
        let tables: Vec<(Vec<IntVector>, Vec<IntVector>)> = vec![
            (vs(&[&[0, 1], &[1, 1]]), vs(&[&[1, 0], &[-1, 1]])),
            (vs(&[&[1, 0], &[1, 1]]), vs(&[&[0, 1], &[1, -1]])),
            (vs(&[&[1, 1], &[1, 2]]), vs(&[&[-1, 1], &[2, -1]])),
            (vs(&[&[0, 1], &[1, 2]]), vs(&[&[1, 0], &[-2, 1]])),
            (vs(&[&[1, 0], &[1, 1]]), vs(&[&[0, 1], &[1, -1]])),
            (vs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), vs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])),
        ];
        for (vertices, walls) in tables {
            let w = normals_from_generators(&vertices).unwrap();
            let mut expected = walls.clone();
            expected.sort_by(|a, b| graded_colex_cmp(a, b));
            assert_eq!(w, expected);
            assert_eq!(vertices_from_normals(&w), sorted_dedup(vertices));
        }
    }

    #[test]
    fn split_examples() {
        let quadrant = Chamber::from_generators(&vs(&[&[1, 0], &[0, 1]])).unwrap();
        match quadrant.split_by_plane(&ivec(&[1, -1])) {
            SplitResult::Split(p, m) => {
                assert_eq!(p, Chamber::from_generators(&vs(&[&[1, 0], &[1, 1]])).unwrap());
                assert_eq!(m, Chamber::from_generators(&vs(&[&[0, 1], &[1, 1]])).unwrap());
            }
            SplitResult::NoSplit => panic!("expected a split"),
        }
        assert_eq!(quadrant.split_by_plane(&ivec(&[1, 1])), SplitResult::NoSplit);
        assert_eq!(quadrant.split_by_plane(&ivec(&[1, 0])), SplitResult::NoSplit);
    }

    #[test]
    fn normally_separated_examples() {
        let c1 = Chamber::from_walls(&vs(&[&[1, 0], &[-1, 1]])).unwrap();
        let c2 = Chamber::from_walls(&vs(&[&[0, 1], &[1, -1]])).unwrap();
        assert!(normally_separated(&c1, &c2));
        assert!(!normally_separated(&c1, &c1));
        // A big chamber next to a small piece of the opposite side: the
        // common plane is shared but the facets differ.
        let big = Chamber::from_generators(&vs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        let small = Chamber::from_generators(&vs(&[&[1, 0, 0], &[1, 1, 0], &[1, 0, -1]])).unwrap();
        assert_eq!(intersection_dim(&big, &small), 2);
        assert!(!normally_separated(&big, &small));
        let mirror = Chamber::from_generators(&vs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]])).unwrap();
        assert!(normally_separated(&big, &mirror));
    }

    #[test]
    fn normal_wrt_examples() {
        let quadrant = Chamber::from_walls(&vs(&[&[1, 0], &[0, 1]])).unwrap();
        assert!(!quadrant.is_normal_wrt(&ivec(&[1, 1])));
        let c = Chamber::from_walls(&vs(&[&[0, 1], &[1, -1]])).unwrap();
        assert!(c.is_normal_wrt(&ivec(&[1, 0])));
        assert!(!quadrant.is_normal_wrt(&ivec(&[-1, -1])));
    }

    #[test]
    fn degenerate_walls_give_none() {
        assert!(Chamber::from_walls(&vs(&[&[1, 0], &[-1, 0], &[0, 1]])).is_none());
        assert!(Chamber::from_walls(&vs(&[&[1, -1], &[-1, 1], &[1, 0], &[0, 1]])).is_none());
    }

    fn generator_set() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(0i64..=3, 3), 3..6)
    }

    proptest! {
        #[test]
        fn cone_membership_matches_generators(g in generator_set()) {
            let gens: Vec<IntVector> = g.iter().map(|r| ivec(r)).collect();
            prop_assume!(rank_int(&gens) == 3);
            let c = Chamber::from_generators(&gens).unwrap();
            // Normalization is idempotent.
            let again = Chamber::from_walls(c.walls()).unwrap();
            prop_assert_eq!(again.walls(), c.walls());
            prop_assert_eq!(again.vertices(), c.vertices());
            for v in c.vertices() {
                prop_assert!(c.contains(v));
                let active: Vec<IntVector> = c.walls().iter().filter(|w| dot_int(w, v).is_zero()).cloned().collect();
                prop_assert!(rank_int(&active) >= 2);
            }
            for gen in &gens {
                prop_assert!(c.contains(gen));
            }
            prop_assert!(c.contains_in_interior(&c.internal_point()));
        }

        #[test]
        fn split_pieces_cover_the_chamber(g in generator_set(), a in prop::collection::vec(-2i64..=2, 3)) {
            let gens: Vec<IntVector> = g.iter().map(|r| ivec(r)).collect();
            prop_assume!(rank_int(&gens) == 3);
            let c = Chamber::from_generators(&gens).unwrap();
            let av = ivec(&a);
            match c.split_by_plane(&av) {
                SplitResult::NoSplit => {
                    prop_assert!(!c.is_split_by(&av));
                }
                SplitResult::Split(p, m) => {
                    for v in p.vertices() { prop_assert!(!dot_int(&av, v).is_negative()); }
                    for v in m.vertices() { prop_assert!(!dot_int(&av, v).is_positive()); }
                    prop_assert!(normally_separated(&p, &m));
                    for x in box_points(3, 0, 4) {
                        let inside = c.contains(&x);
                        prop_assert_eq!(inside, p.contains(&x) || m.contains(&x));
                        if inside {
                            prop_assert_eq!(p.contains(&x), !dot_int(&av, &x).is_negative());
                        }
                    }
                }
            }
        }
    }
}
