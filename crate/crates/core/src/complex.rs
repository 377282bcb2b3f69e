//! Collections of chambers with neighbor maps, subdivision into chambers
//! normal with respect to a direction, and amalgamation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{dot_int, hyperplane_normal, primitive, primitive_from_rational, rank_int, IntVector, Rational};
use crate::cones::{intersection_dim, normally_separated, Chamber, SplitResult};
use crate::error::{Error, Result};
use crate::partfrac::validate_delta;

/// How a chamber with several exit walls is cut during directional
/// subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SliceMode {
    /// Cut into one piece per exit wall.
    Arbitrary,
    /// Cut once, with the first exit-wall difference whose plane is spanned by
    /// vectors of Δ; chambers without such a plane are left whole.
    Proper(BTreeSet<IntVector>),
}

/// Neighbor relation: chamber id → wall normal → neighboring chamber ids.
pub type NeighborMap = BTreeMap<usize, BTreeMap<IntVector, BTreeSet<usize>>>;

/// Chambers with pairwise disjoint interiors together with their neighbors
/// across each wall.
#[derive(Clone, Debug)]
pub struct ChamberComplex {
    chambers: BTreeMap<usize, Chamber>,
    neighbors: NeighborMap,
    next_id: usize,
}

fn negate(v: &[BigInt]) -> IntVector {
    v.iter().map(|x| -x).collect()
}

/// Primitive normals, up to sign, of hyperplanes spanned by n-1 vectors of Δ.
/// Each normal is stored with its first non-zero coordinate positive.
pub fn delta_planes(delta: &[IntVector]) -> BTreeSet<IntVector> {
    let n = delta[0].len();
    let mut out = BTreeSet::new();
    for subset in delta.iter().cloned().combinations(n - 1) {
        let h = hyperplane_normal(&subset, n);
        if h.iter().any(|x| !x.is_zero()) {
            out.insert(sign_normalized(&h));
        }
    }
    out
}

fn sign_normalized(v: &[BigInt]) -> IntVector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => negate(v),
        _ => v.to_vec(),
    }
}

impl ChamberComplex {
    /// A complex consisting of one chamber.
    pub fn single(chamber: Chamber) -> ChamberComplex {
        let mut c = ChamberComplex { chambers: BTreeMap::new(), neighbors: BTreeMap::new(), next_id: 0 };
        c.insert(chamber);
        c
    }

    /// A complex from chambers with disjoint interiors; neighbors are found by
    /// exact pairwise checks.
    pub fn from_chambers(chambers: Vec<Chamber>) -> ChamberComplex {
        let mut c = ChamberComplex { chambers: BTreeMap::new(), neighbors: BTreeMap::new(), next_id: 0 };
        for ch in chambers {
            c.insert(ch);
        }
        let ids: Vec<usize> = c.chambers.keys().copied().collect();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                c.link_if_touching(a, b);
            }
        }
        c
    }

    fn insert(&mut self, chamber: Chamber) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        self.chambers.insert(id, chamber.with_id(id));
        self.neighbors.insert(id, BTreeMap::new());
        id
    }

    fn remove(&mut self, id: usize) -> Chamber {
        self.neighbors.remove(&id);
        self.chambers.remove(&id).expect("chamber present")
    }

    pub fn dim(&self) -> usize {
        self.chambers.values().next().map_or(0, |c| c.dim())
    }

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    pub fn chambers(&self) -> impl Iterator<Item = &Chamber> {
        self.chambers.values()
    }

    pub fn chamber(&self, id: usize) -> Option<&Chamber> {
        self.chambers.get(&id)
    }

    pub fn ids(&self) -> Vec<usize> {
        self.chambers.keys().copied().collect()
    }

    /// Neighbors of chamber `id` across its wall `wall`.
    pub fn neighbors(&self, id: usize, wall: &[BigInt]) -> BTreeSet<usize> {
        self.neighbors.get(&id).and_then(|m| m.get(wall)).cloned().unwrap_or_default()
    }

    pub fn neighbor_map(&self) -> &NeighborMap {
        &self.neighbors
    }

    /// All neighbors of a chamber across any wall.
    pub fn all_neighbors(&self, id: usize) -> BTreeSet<usize> {
        self.neighbors.get(&id).map(|m| m.values().flatten().copied().collect()).unwrap_or_default()
    }

    fn add_link(&mut self, a: usize, wall: &IntVector, b: usize) {
        self.neighbors.entry(a).or_default().entry(wall.clone()).or_default().insert(b);
    }

    fn remove_link(&mut self, a: usize, wall: &IntVector, b: usize) {
        if let Some(m) = self.neighbors.get_mut(&a) {
            if let Some(s) = m.get_mut(wall) {
                s.remove(&b);
                if s.is_empty() {
                    m.remove(wall);
                }
            }
        }
    }

    /// Records a and b as neighbors if they share an (n-1)-dimensional patch
    /// of a common wall plane.
    fn link_if_touching(&mut self, a: usize, b: usize) -> bool {
        let (ca, cb) = (&self.chambers[&a], &self.chambers[&b]);
        let wall = ca.walls().iter().find(|w| cb.has_wall(&negate(w))).cloned();
        let Some(w) = wall else { return false };
        if intersection_dim(ca, cb) + 1 != ca.dim() {
            return false;
        }
        let minus = negate(&w);
        self.add_link(a, &w, b);
        self.add_link(b, &minus, a);
        true
    }

    /// Whether a and b are genuine neighbors across the wall `wall` of a.
    fn touching_across(&self, a: usize, wall: &IntVector, b: usize) -> bool {
        match (self.chambers.get(&a), self.chambers.get(&b)) {
            (Some(ca), Some(cb)) => {
                ca.has_wall(wall) && cb.has_wall(&negate(wall)) && intersection_dim(ca, cb) + 1 == ca.dim()
            }
            _ => false,
        }
    }

    /// Replaces chamber `old` by `pieces` (already inserted) in the neighbor
    /// maps of all chambers that listed `old`, and gives each piece the
    /// neighbors `old` had across walls the piece keeps.
    fn replace_in_maps(&mut self, old: usize, old_map: &BTreeMap<IntVector, BTreeSet<usize>>, pieces: &[usize]) {
        for (wall, set) in old_map {
            for &p in pieces {
                if self.chambers[&p].has_wall(wall) {
                    for &e in set {
                        if self.chambers.contains_key(&e) {
                            self.add_link(p, wall, e);
                        }
                    }
                }
            }
        }
        let others: BTreeSet<usize> = old_map.values().flatten().copied().collect();
        for e in others {
            let Some(emap) = self.neighbors.get(&e).cloned() else { continue };
            for (k, set) in emap {
                if !set.contains(&old) {
                    continue;
                }
                self.remove_link(e, &k, old);
                let opposite = negate(&k);
                for &p in pieces {
                    if self.chambers[&p].has_wall(&opposite) {
                        self.add_link(e, &k, p);
                    }
                }
            }
        }
    }

    /// Replaces chamber `replaced` by `pieces` and subdivides the result until
    /// every chamber meets each neighbor facet to facet.
    ///
    /// `piece_neighbors` lists (i, wall, j) with piece j adjacent to piece i
    /// across the wall of piece i. Returns, for every chamber created by the
    /// call, the id of the chamber present before the call it was cut from.
    pub fn extend_to_normal(
        &mut self,
        replaced: usize,
        pieces: Vec<Chamber>,
        piece_neighbors: &[(usize, IntVector, usize)],
    ) -> Result<BTreeMap<usize, usize>> {
        let Some(original) = self.chambers.get(&replaced).cloned() else {
            return Err(Error::BadSubdivision(format!("unknown chamber {replaced}")));
        };
        if pieces.len() == 1 && pieces[0] == original {
            return Ok(BTreeMap::new());
        }
        validate_pieces(&original, &pieces)?;
        let old_map = self.neighbors.get(&replaced).cloned().unwrap_or_default();
        self.remove(replaced);
        let ids: Vec<usize> = pieces.into_iter().map(|p| self.insert(p)).collect();
        let mut origin: BTreeMap<usize, usize> = ids.iter().map(|&i| (i, replaced)).collect();
        for (i, wall, j) in piece_neighbors {
            self.add_link(ids[*i], wall, ids[*j]);
        }
        self.replace_in_maps(replaced, &old_map, &ids);
        self.normalize_neighbors(&mut origin)?;
        Ok(origin)
    }

    /// Splits chamber `c` by the plane orthogonal to `b`, keeping the neighbor
    /// upper bounds. Returns the ids of the (+b, -b) pieces.
    fn split(&mut self, c: usize, b: &IntVector, origin: &mut BTreeMap<usize, usize>) -> Option<(usize, usize)> {
        let SplitResult::Split(plus, minus) = self.chambers[&c].split_by_plane(b) else {
            return None;
        };
        let old_map = self.neighbors.get(&c).cloned().unwrap_or_default();
        self.remove(c);
        let p = self.insert(plus);
        let m = self.insert(minus);
        let minus_b = negate(b);
        if self.chambers[&p].has_wall(b) && self.chambers[&m].has_wall(&minus_b) {
            self.add_link(p, b, m);
            self.add_link(m, &minus_b, p);
        }
        self.replace_in_maps(c, &old_map, &[p, m]);
        let root = origin.remove(&c).unwrap_or(c);
        origin.insert(p, root);
        origin.insert(m, root);
        Some((p, m))
    }

    /// Removes extraneous neighbors and splits chambers whose wall meets more
    /// than one neighbor, until every listed neighbor is a facet-to-facet
    /// match.
    fn normalize_neighbors(&mut self, origin: &mut BTreeMap<usize, usize>) -> Result<()> {
        let mut guard = 0usize;
        'restart: loop {
            guard += 1;
            if guard > 1_000_000 {
                return Err(Error::InternalInconsistency("neighbor normalization does not terminate".into()));
            }
            let queue: Vec<usize> = self
                .neighbors
                .iter()
                .filter(|(_, m)| m.values().any(|s| s.len() > 1))
                .map(|(&id, _)| id)
                .collect();
            for c in queue {
                let crowded: Vec<IntVector> =
                    self.neighbors[&c].iter().filter(|(_, s)| s.len() > 1).map(|(w, _)| w.clone()).collect();
                for a in crowded {
                    let minus_a = negate(&a);
                    for e in self.neighbors(c, &a) {
                        let Some(ce) = self.chambers.get(&e).cloned() else {
                            self.remove_link(c, &a, e);
                            continue 'restart;
                        };
                        for beta in ce.vertices_on_plane(&a) {
                            for b in ce.walls() {
                                if *b == minus_a || !dot_int(b, &beta).is_zero() {
                                    continue;
                                }
                                let cc = &self.chambers[&c];
                                let mut pos = false;
                                let mut neg = false;
                                for v in cc.vertices() {
                                    let p = dot_int(b, v);
                                    pos |= p.is_positive();
                                    neg |= p.is_negative();
                                }
                                if !pos {
                                    // c lies on the far side of a wall of e: they
                                    // meet in at most n-2 dimensions.
                                    self.remove_link(c, &a, e);
                                    self.remove_link(e, &minus_a, c);
                                    continue 'restart;
                                }
                                if neg {
                                    self.split(c, b, origin);
                                    continue 'restart;
                                }
                            }
                        }
                    }
                }
            }
            break;
        }
        // Final pass: keep only facet-to-facet neighbors, symmetrically.
        let mut links: Vec<(usize, IntVector, usize)> = Vec::new();
        for (&c, m) in &self.neighbors {
            for (w, set) in m {
                for &e in set {
                    links.push((c, w.clone(), e));
                }
            }
        }
        for (c, w, e) in links {
            if self.touching_across(c, &w, e) {
                self.add_link(e, &negate(&w), c);
            } else {
                self.remove_link(c, &w, e);
                self.remove_link(e, &negate(&w), c);
            }
        }
        Ok(())
    }

    /// Subdivides the complex until every chamber has a unique wall with
    /// positive product with `nu`, processing chambers so that each one is
    /// handled only after its neighbors across exit walls.
    pub fn subdivide_direction(&mut self, nu: &[BigInt], mode: &SliceMode) -> Result<()> {
        let mut queue: VecDeque<usize> = self.chambers.keys().copied().collect();
        let mut refined: BTreeSet<usize> = BTreeSet::new();
        let mut idle = 0usize;
        while let Some(c) = queue.pop_front() {
            let chamber = self.chambers[&c].clone();
            let exits = chamber.positive_walls(nu);
            let waiting = exits.iter().any(|b| self.neighbors(c, b).iter().any(|d| !refined.contains(d)));
            if waiting {
                queue.push_back(c);
                idle += 1;
                if idle > queue.len() {
                    return Err(Error::InternalInconsistency("directional subdivision stalled".into()));
                }
                continue;
            }
            idle = 0;
            if exits.len() <= 1 {
                refined.insert(c);
                continue;
            }
            let (pieces, links) = match mode {
                SliceMode::Arbitrary => directional_pieces(&chamber, &exits, nu),
                SliceMode::Proper(planes) => match proper_cut(&chamber, &exits, nu, planes) {
                    Some(cut) => cut,
                    None => {
                        refined.insert(c);
                        continue;
                    }
                },
            };
            let origin = self.extend_to_normal(c, pieces, &links)?;
            let mut by_origin: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (&id, &root) in &origin {
                by_origin.entry(root).or_default().push(id);
            }
            let mut next: VecDeque<usize> = VecDeque::new();
            for id in queue {
                if self.chambers.contains_key(&id) {
                    next.push_back(id);
                } else if let Some(ps) = by_origin.get(&id) {
                    next.extend(ps.iter().copied());
                }
            }
            if let Some(ps) = by_origin.get(&c) {
                next.extend(ps.iter().copied());
            }
            queue = next;
            let mut next_refined = BTreeSet::new();
            for id in refined {
                if self.chambers.contains_key(&id) {
                    next_refined.insert(id);
                } else if let Some(ps) = by_origin.get(&id) {
                    next_refined.extend(ps.iter().copied());
                }
            }
            refined = next_refined;
        }
        Ok(())
    }

    /// Cuts every chamber split by the plane orthogonal to `a`.
    pub fn cut_by_plane(&mut self, a: &IntVector) -> Result<()> {
        for id in self.ids() {
            let Some(ch) = self.chambers.get(&id).cloned() else { continue };
            if let SplitResult::Split(p, m) = ch.split_by_plane(a) {
                let links = vec![(0, a.clone(), 1), (1, negate(a), 0)];
                self.extend_to_normal(id, vec![p, m], &links)?;
            }
        }
        Ok(())
    }

    /// Whether every pair of chambers is normally separated.
    pub fn is_normally_separated(&self) -> bool {
        let all: Vec<&Chamber> = self.chambers.values().collect();
        all.iter().tuple_combinations().all(|(a, b)| normally_separated(a, b))
    }

    /// Whether the neighbor map is symmetric and lists exactly the
    /// facet-sharing pairs.
    pub fn neighbors_consistent(&self) -> bool {
        for (&a, m) in &self.neighbors {
            for (w, set) in m {
                if set.len() > 1 {
                    return false;
                }
                for &b in set {
                    if !self.touching_across(a, w, b) || !self.neighbors(b, &negate(w)).contains(&a) {
                        return false;
                    }
                }
            }
        }
        let ids = self.ids();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                let (ca, cb) = (&self.chambers[&a], &self.chambers[&b]);
                if let Some(w) = ca.walls().iter().find(|w| cb.has_wall(&negate(w))) {
                    if intersection_dim(ca, cb) + 1 == ca.dim() && !self.neighbors(a, w).contains(&b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Copy with chamber ids renumbered 1, 2, … in current id order.
    pub fn renumbered(&self) -> ChamberComplex {
        let map: BTreeMap<usize, usize> = self.chambers.keys().enumerate().map(|(i, &id)| (id, i + 1)).collect();
        let chambers = self.chambers.iter().map(|(id, c)| (map[id], c.clone().with_id(map[id]))).collect();
        let neighbors = self
            .neighbors
            .iter()
            .map(|(id, m)| {
                let m2 = m.iter().map(|(w, s)| (w.clone(), s.iter().map(|x| map[x]).collect())).collect();
                (map[id], m2)
            })
            .collect();
        ChamberComplex { chambers, neighbors, next_id: map.len() + 1 }
    }

    /// The chamber containing γ, preferring the lowest id.
    pub fn locate(&self, gamma: &[BigInt]) -> Option<&Chamber> {
        self.chambers.values().find(|c| c.contains(gamma))
    }
}

fn validate_pieces(original: &Chamber, pieces: &[Chamber]) -> Result<()> {
    if pieces.is_empty() {
        return Err(Error::BadSubdivision("no pieces".into()));
    }
    for p in pieces {
        if !p.is_subset_of(original) {
            return Err(Error::BadSubdivision("piece leaves the replaced chamber".into()));
        }
    }
    for (a, b) in pieces.iter().tuple_combinations() {
        if intersection_dim(a, b) == a.dim() {
            return Err(Error::BadSubdivision("pieces overlap".into()));
        }
    }
    Ok(())
}

/// Normal of the plane where the ray γ - tν reaches wall b_i and wall b_j at
/// the same time: b_j/⟨ν,b_j⟩ - b_i/⟨ν,b_i⟩, made primitive.
fn exit_difference(bi: &IntVector, bj: &IntVector, nu: &[BigInt]) -> IntVector {
    let ni = dot_int(bi, nu);
    let nj = dot_int(bj, nu);
    let v: Vec<Rational> = bi
        .iter()
        .zip(bj)
        .map(|(x, y)| Rational::new(y.clone(), nj.clone()) - Rational::new(x.clone(), ni.clone()))
        .collect();
    primitive_from_rational(&v)
}

/// One piece per exit wall: the points whose ray in direction -ν leaves the
/// chamber through that wall first.
fn directional_pieces(chamber: &Chamber, exits: &[IntVector], nu: &[BigInt]) -> (Vec<Chamber>, Vec<(usize, IntVector, usize)>) {
    let others: Vec<IntVector> = chamber.walls().iter().filter(|w| !exits.contains(w)).cloned().collect();
    let mut pieces = Vec::new();
    for (i, bi) in exits.iter().enumerate() {
        let mut walls = vec![bi.clone()];
        walls.extend(others.iter().cloned());
        for (j, bj) in exits.iter().enumerate() {
            if i != j {
                walls.push(exit_difference(bi, bj, nu));
            }
        }
        if let Some(p) = Chamber::from_walls(&walls) {
            pieces.push(p);
        }
    }
    let mut links = Vec::new();
    for i in 0..pieces.len() {
        for j in 0..pieces.len() {
            if i == j {
                continue;
            }
            if let Some(w) = pieces[i].walls().iter().find(|w| pieces[j].has_wall(&negate(w))) {
                if intersection_dim(&pieces[i], &pieces[j]) + 1 == pieces[i].dim() {
                    links.push((i, w.clone(), j));
                }
            }
        }
    }
    (pieces, links)
}

/// Two pieces cut by the first exit-wall difference that is normal to a plane
/// spanned by vectors of Δ and actually splits the chamber.
fn proper_cut(
    chamber: &Chamber,
    exits: &[IntVector],
    nu: &[BigInt],
    planes: &BTreeSet<IntVector>,
) -> Option<(Vec<Chamber>, Vec<(usize, IntVector, usize)>)> {
    for (i, bi) in exits.iter().enumerate() {
        for (j, bj) in exits.iter().enumerate() {
            if i == j {
                continue;
            }
            let c = exit_difference(bi, bj, nu);
            if !planes.contains(&sign_normalized(&c)) {
                continue;
            }
            if let SplitResult::Split(p, m) = chamber.split_by_plane(&c) {
                let links = vec![(0, c.clone(), 1), (1, negate(&c), 0)];
                return Some((vec![p, m], links));
            }
        }
    }
    None
}

/// Δ reordered so that the earliest linearly independent n vectors come first;
/// the remaining vectors keep their relative order.
pub fn independent_first(delta: &[IntVector]) -> Vec<IntVector> {
    let mut basis: Vec<IntVector> = Vec::new();
    let mut chosen = vec![false; delta.len()];
    for (i, v) in delta.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if rank_int(&trial) == trial.len() {
            basis = trial;
            chosen[i] = true;
        }
    }
    let mut out = basis;
    out.extend(delta.iter().zip(&chosen).filter(|(_, &c)| !c).map(|(v, _)| v.clone()));
    out
}

/// The cone of Δ cut by the planes spanned by n-1 of the first n (linearly
/// independent) vectors, so that the cone of those n vectors is a chamber.
pub fn starting_complex(ordered: &[IntVector]) -> Result<ChamberComplex> {
    let n = ordered[0].len();
    let mut complex = ChamberComplex::single(Chamber::from_generators(ordered)?);
    for subset in ordered[..n].iter().cloned().combinations(n - 1) {
        let a = primitive(&hyperplane_normal(&subset, n));
        complex.cut_by_plane(&a)?;
    }
    Ok(complex)
}

fn build(delta: &[IntVector], mode: impl Fn(&[IntVector]) -> SliceMode) -> Result<(Vec<IntVector>, ChamberComplex)> {
    validate_delta(delta)?;
    let ordered = independent_first(delta);
    let mode = mode(&ordered);
    let mut complex = starting_complex(&ordered)?;
    for alpha in &ordered {
        complex.subdivide_direction(alpha, &mode)?;
    }
    Ok((ordered, complex))
}

/// Chambers obtained by subdividing with respect to each vector of Δ in turn,
/// cutting a chamber into one piece per exit wall.
pub fn chambers_arbitrary(delta: &[IntVector]) -> Result<ChamberComplex> {
    Ok(build(delta, |_| SliceMode::Arbitrary)?.1.renumbered())
}

/// Chambers obtained by subdividing with respect to each vector of Δ in turn,
/// cutting only along planes spanned by vectors of Δ.
pub fn chambers_proper(delta: &[IntVector]) -> Result<ChamberComplex> {
    Ok(build(delta, |d| SliceMode::Proper(delta_planes(d)))?.1.renumbered())
}

/// Proper chambers followed by amalgamation.
pub fn chambers_amalgamated(delta: &[IntVector]) -> Result<ChamberComplex> {
    let proper = chambers_proper(delta)?;
    amalgamate(&proper, delta)
}

/// Membership of a chamber's interior in a cone: Some(true) inside, Some(false)
/// interior-disjoint, None when the cone cuts through the chamber.
fn cone_membership(chamber: &Chamber, cone: &Chamber) -> Option<bool> {
    if chamber.is_subset_of(cone) {
        return Some(true);
    }
    if cone.walls().iter().any(|w| chamber.vertices().iter().all(|v| !dot_int(w, v).is_positive())) {
        return Some(false);
    }
    if chamber.walls().iter().any(|w| cone.vertices().iter().all(|v| !dot_int(w, v).is_positive())) {
        return Some(false);
    }
    let mut walls = chamber.walls().to_vec();
    walls.extend(cone.walls().iter().cloned());
    match Chamber::from_walls(&walls) {
        None => Some(false),
        Some(_) => None,
    }
}

/// Merges chambers that lie in exactly the same cones spanned by n vectors of
/// Δ, whenever their union is convex.
pub fn amalgamate(complex: &ChamberComplex, delta: &[IntVector]) -> Result<ChamberComplex> {
    let n = complex.dim();
    let mut sorted = delta.to_vec();
    sorted.sort_by(|a, b| crate::arith::graded_colex_cmp(a, b));
    sorted.dedup();
    let cones: Vec<Chamber> = sorted
        .iter()
        .cloned()
        .combinations(n)
        .filter(|s| rank_int(s) == n)
        .map(|s| Chamber::from_generators(&s))
        .collect::<Result<_>>()?;
    let mut groups: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
    let mut index: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    for ch in complex.chambers() {
        let mut signature = Vec::with_capacity(cones.len());
        for cone in &cones {
            signature.push(cone_membership(ch, cone).ok_or(Error::NotRefined)?);
        }
        match index.get(&signature) {
            Some(&g) => groups[g].1.push(ch.id),
            None => {
                index.insert(signature.clone(), groups.len());
                groups.push((signature, vec![ch.id]));
            }
        }
    }
    let mut merged: Vec<Chamber> = Vec::new();
    for (_, members) in groups {
        if members.len() == 1 {
            merged.push(complex.chambers[&members[0]].clone());
            continue;
        }
        match convex_union(complex, &members)? {
            Some(hull) => merged.push(hull),
            None => merged.extend(members.iter().map(|m| complex.chambers[m].clone())),
        }
    }
    Ok(ChamberComplex::from_chambers(merged).renumbered())
}

/// The union of the member chambers when it is convex. Members have disjoint
/// interiors and meet neighbors facet to facet, so the union equals the cone
/// of all member vertices exactly when every member facet either lies on the
/// boundary of that cone or is shared with another member.
fn convex_union(complex: &ChamberComplex, members: &[usize]) -> Result<Option<Chamber>> {
    let member_set: BTreeSet<usize> = members.iter().copied().collect();
    let vertices: Vec<IntVector> =
        members.iter().flat_map(|m| complex.chambers[m].vertices().iter().cloned()).collect();
    let hull = Chamber::from_generators(&vertices)?;
    for &m in members {
        for w in complex.chambers[&m].walls() {
            if hull.has_wall(w) {
                continue;
            }
            if !complex.neighbors(m, w).iter().any(|e| member_set.contains(e)) {
                return Ok(None);
            }
        }
    }
    Ok(Some(hull))
}
