//! Rational polyhedral fans: primitive ray generators, simplicial cones as
//! ray-index sets, and the validity / smoothness / completeness checks that
//! every other module relies on.
//!
//! All cones are simplicial by contract. This keeps face computation and
//! membership testing exact linear algebra: a point is in a cone iff the
//! unique coordinates over the cone's rays are nonnegative.

use std::collections::{BTreeMap, BTreeSet};

use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    self, det_int, gcd_all, kernel_basis, rank as rat_rank, smith_normal_form,
    solve_full_column_rank, Int, Rat,
};

/// An integer vector in a cocharacter lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(pub Vec<Int>);

impl LatticeVector {
    pub fn from_i64(entries: &[i64]) -> Self {
        LatticeVector(entries.iter().map(|&v| Int::from(v)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// The primitive generator on the same ray: the vector divided by the
    /// gcd of its entries.
    pub fn primitive(&self) -> Result<LatticeVector> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let g = gcd_all(&self.0);
        Ok(LatticeVector(self.0.iter().map(|v| v / &g).collect()))
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && gcd_all(&self.0).is_one()
    }

    pub fn dot(&self, other: &LatticeVector) -> Int {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_rat(&self, other: &RationalVector) -> Rat {
        debug_assert_eq!(self.rank(), other.rank());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| Rat::from_integer(a.clone()) * b)
            .sum()
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(self.0.iter().map(|v| Rat::from_integer(v.clone())).collect())
    }
}

/// An exact rational vector (a point of N_R or M_R).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<Rat>);

impl RationalVector {
    pub fn from_i64(entries: &[i64]) -> Self {
        RationalVector(entries.iter().map(|&v| linalg::rat(v)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        RationalVector(vec![Rat::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        debug_assert_eq!(self.rank(), other.rank());
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        debug_assert_eq!(self.rank(), other.rank());
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rat) -> RationalVector {
        RationalVector(self.0.iter().map(|a| a * c).collect())
    }
}

/// A simplicial cone recorded as a sorted set of indices into its fan's rays.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut ray_indices: Vec<usize>) -> Self {
        ray_indices.sort_unstable();
        ray_indices.dedup();
        Cone(ray_indices)
    }

    pub fn ray_indices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.0.iter().all(|i| other.contains_index(*i))
    }

    /// The cone on the rays shared with `other`.
    pub fn intersection_indices(&self, other: &Cone) -> Cone {
        Cone::new(
            self.0
                .iter()
                .copied()
                .filter(|i| other.contains_index(*i))
                .collect(),
        )
    }
}

fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > n {
        return out;
    }
    let mut current = Vec::with_capacity(size);
    fn rec(
        start: usize,
        n: usize,
        size: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, size, current, out);
            current.pop();
        }
    }
    rec(0, n, size, &mut current, &mut out);
    out
}

/// Scale a nonzero rational vector to the primitive integer vector on the
/// same ray.
fn primitive_direction(v: &[Rat]) -> LatticeVector {
    let denom_lcm = v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Int> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    let g = gcd_all(&ints);
    debug_assert!(!g.is_zero());
    LatticeVector(ints.iter().map(|x| x / &g).collect())
}

/// Findings from `Fan::validate`.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub is_valid: bool,
    pub is_smooth: bool,
    pub is_complete: bool,
    pub violations: Vec<String>,
}

/// Face enumeration output: every face of every cone plus face counts.
#[derive(Debug, Clone)]
pub struct FaceData {
    /// All faces as (dimension, cone), including the zero cone, sorted.
    pub faces: Vec<(usize, Cone)>,
    /// f_vector[d] = number of d-dimensional cones; f_vector[0] = 1.
    pub f_vector: Vec<usize>,
}

/// A rational polyhedral fan with primitive ray generators and simplicial
/// maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<LatticeVector>,
    maximal_cones: Vec<Cone>,
}

impl Fan {
    /// Structural construction: checks lengths and index bounds only.
    /// Geometric validity is the business of `validate`.
    pub fn new(rank: usize, rays: Vec<LatticeVector>, maximal_cones: Vec<Cone>) -> Result<Fan> {
        for ray in &rays {
            if ray.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: ray.rank(),
                });
            }
        }
        for cone in &maximal_cones {
            for &i in cone.ray_indices() {
                if i >= rays.len() {
                    return Err(Error::InvalidFan(format!(
                        "cone references ray index {i} but the fan has {} rays",
                        rays.len()
                    )));
                }
            }
        }
        Ok(Fan {
            rank,
            rays,
            maximal_cones,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal_cones
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    /// Matrix whose columns are the rays selected by `cone`, as rationals.
    fn cone_column_matrix(&self, cone: &Cone) -> Vec<Vec<Rat>> {
        (0..self.rank)
            .map(|row| {
                cone.ray_indices()
                    .iter()
                    .map(|&i| Rat::from_integer(self.rays[i].0[row].clone()))
                    .collect()
            })
            .collect()
    }

    /// Coordinates of `x` over the cone's rays, when `x` lies in their span.
    pub fn cone_coefficients(&self, cone: &Cone, x: &RationalVector) -> Result<Option<Vec<Rat>>> {
        if x.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: x.rank(),
            });
        }
        if cone.dim() == 0 {
            return Ok(if x.is_zero() { Some(vec![]) } else { None });
        }
        let a = self.cone_column_matrix(cone);
        Ok(solve_full_column_rank(&a, &x.0))
    }

    /// Membership: `x` is a nonnegative rational combination of the cone's
    /// rays. For simplicial cones the combination is unique.
    pub fn cone_contains(&self, cone: &Cone, x: &RationalVector) -> Result<bool> {
        Ok(match self.cone_coefficients(cone, x)? {
            Some(coeffs) => coeffs.iter().all(|c| !c.is_negative()),
            None => false,
        })
    }

    /// A cone is smooth when its rays extend to a lattice basis: all
    /// elementary divisors of the ray matrix equal 1.
    pub fn is_smooth_cone(&self, cone: &Cone) -> bool {
        if cone.dim() == 0 {
            return true;
        }
        let rows: Vec<Vec<Int>> = cone
            .ray_indices()
            .iter()
            .map(|&i| self.rays[i].0.clone())
            .collect();
        let diag = smith_normal_form(rows);
        diag.len() >= cone.dim()
            && diag.iter().take(cone.dim()).all(One::is_one)
            && diag.iter().skip(cone.dim()).all(Zero::is_zero)
    }

    fn is_simplicial_cone(&self, cone: &Cone) -> bool {
        if cone.dim() == 0 {
            return true;
        }
        let a = self.cone_column_matrix(cone);
        rat_rank(&a) == cone.dim()
    }

    /// Generators of the set-theoretic intersection of two simplicial cones,
    /// found by enumerating minimal supports of the compatibility cone
    /// { (a, b) >= 0 : sum a_i v_i = sum b_j w_j }.
    fn cone_intersection_generators(&self, c1: &Cone, c2: &Cone) -> Vec<RationalVector> {
        let d1 = c1.dim();
        let d2 = c2.dim();
        let total = d1 + d2;
        if total == 0 {
            return vec![];
        }
        // B z = 0 with columns: rays of c1, then negated rays of c2.
        let b: Vec<Vec<Rat>> = (0..self.rank)
            .map(|row| {
                let mut r = Vec::with_capacity(total);
                for &i in c1.ray_indices() {
                    r.push(Rat::from_integer(self.rays[i].0[row].clone()));
                }
                for &j in c2.ray_indices() {
                    r.push(-Rat::from_integer(self.rays[j].0[row].clone()));
                }
                r
            })
            .collect();
        let mut found: BTreeSet<LatticeVector> = BTreeSet::new();
        for support in 1u32..(1 << total) {
            let cols: Vec<usize> = (0..total).filter(|&c| support & (1 << c) != 0).collect();
            let restricted: Vec<Vec<Rat>> = b
                .iter()
                .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
                .collect();
            let kernel = kernel_basis(&restricted, cols.len());
            if kernel.len() != 1 {
                continue;
            }
            let g = &kernel[0];
            if g.iter().any(Zero::is_zero) {
                continue; // a smaller support covers this ray
            }
            let sign = if g.iter().all(|v| v.is_positive()) {
                Rat::one()
            } else if g.iter().all(|v| v.is_negative()) {
                -Rat::one()
            } else {
                continue;
            };
            // Image point inside the first cone.
            let mut x = vec![Rat::zero(); self.rank];
            for (pos, &c) in cols.iter().enumerate() {
                if c >= d1 {
                    continue;
                }
                let coeff = &g[pos] * &sign;
                let ray = &self.rays[c1.ray_indices()[c]];
                for (xi, ri) in x.iter_mut().zip(&ray.0) {
                    *xi += &coeff * Rat::from_integer(ri.clone());
                }
            }
            if x.iter().all(Zero::is_zero) {
                continue;
            }
            found.insert(primitive_direction(&x));
        }
        found.into_iter().map(|v| v.to_rational()).collect()
    }

    /// Generators of the intersection of two full-dimensional simplicial
    /// cones, via the coefficient functionals (inverse ray matrices): the
    /// intersection is { x : inv1 x >= 0, inv2 x >= 0 }, and its extreme
    /// rays arise from kernels of (rank-1)-subsets of those functionals.
    fn full_dim_intersection_generators(
        &self,
        inv1: &[Vec<Rat>],
        inv2: &[Vec<Rat>],
    ) -> Vec<RationalVector> {
        let n = self.rank;
        let rows: Vec<&Vec<Rat>> = inv1.iter().chain(inv2.iter()).collect();
        let mut found: BTreeSet<LatticeVector> = BTreeSet::new();
        for indices in subsets_of_size(rows.len(), n.saturating_sub(1)) {
            let sub: Vec<Vec<Rat>> = indices.iter().map(|&i| rows[i].clone()).collect();
            let kernel = kernel_basis(&sub, n);
            if kernel.len() != 1 {
                continue;
            }
            for sign in [Rat::one(), -Rat::one()] {
                let candidate: Vec<Rat> = kernel[0].iter().map(|v| v * &sign).collect();
                let feasible = rows.iter().all(|row| {
                    let value: Rat = row.iter().zip(&candidate).map(|(a, b)| a * b).sum();
                    !value.is_negative()
                });
                if feasible {
                    found.insert(primitive_direction(&candidate));
                    break;
                }
            }
        }
        found.into_iter().map(|v| v.to_rational()).collect()
    }

    /// The pairwise face condition: the set intersection of two maximal
    /// cones equals the cone on their shared rays. The inverse ray matrices
    /// are supplied when both cones are full-dimensional (the fast path).
    fn pair_is_face(
        &self,
        c1: &Cone,
        c2: &Cone,
        inv1: Option<&Vec<Vec<Rat>>>,
        inv2: Option<&Vec<Vec<Rat>>>,
    ) -> bool {
        let shared = c1.intersection_indices(c2);
        let generators = match (inv1, inv2) {
            (Some(i1), Some(i2)) => self.full_dim_intersection_generators(i1, i2),
            _ => self.cone_intersection_generators(c1, c2),
        };
        for generator in generators {
            match self.cone_contains(&shared, &generator) {
                Ok(true) => {}
                _ => return false,
            }
        }
        true
    }

    /// Full geometric validation: primitivity, distinctness, lattice span,
    /// simpliciality, smoothness per cone, the pairwise face condition, and
    /// completeness.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        for (i, ray) in self.rays.iter().enumerate() {
            if ray.is_zero() {
                violations.push(format!("ray {i} is the zero vector"));
            } else if !ray.is_primitive() {
                violations.push(format!("ray {i} is not primitive"));
            }
        }
        for i in 0..self.rays.len() {
            for j in i + 1..self.rays.len() {
                if self.rays[i] == self.rays[j] {
                    violations.push(format!("rays {i} and {j} coincide"));
                }
            }
        }

        let mut used = vec![false; self.rays.len()];
        for cone in &self.maximal_cones {
            for &i in cone.ray_indices() {
                used[i] = true;
            }
        }
        for (i, u) in used.iter().enumerate() {
            if !u {
                violations.push(format!("ray {i} appears in no maximal cone"));
            }
        }

        // Rays must span the ambient lattice over the integers.
        if self.rank > 0 {
            let rows: Vec<Vec<Int>> = self.rays.iter().map(|r| r.0.clone()).collect();
            let diag = smith_normal_form(rows);
            let full = diag.iter().filter(|d| !d.is_zero()).count() == self.rank
                && diag.iter().take(self.rank).all(One::is_one);
            if !full {
                violations.push("rays do not span the ambient lattice over Z".into());
            }
        } else if !self.rays.is_empty() {
            violations.push("rank-0 fan cannot have rays".into());
        }

        let mut is_smooth = true;
        let mut simplicial = vec![false; self.maximal_cones.len()];
        for (ci, cone) in self.maximal_cones.iter().enumerate() {
            if !self.is_simplicial_cone(cone) {
                violations.push(format!("maximal cone {ci} is not simplicial"));
                is_smooth = false;
                continue;
            }
            simplicial[ci] = true;
            if !self.is_smooth_cone(cone) {
                is_smooth = false;
            }
        }

        // Coefficient functionals of the full-dimensional simplicial cones,
        // computed once and shared by all pair checks.
        let inverses: Vec<Option<Vec<Vec<Rat>>>> = self
            .maximal_cones
            .iter()
            .enumerate()
            .map(|(ci, cone)| {
                if !simplicial[ci] || cone.dim() != self.rank {
                    return None;
                }
                linalg::inverse(&self.cone_column_matrix(cone))
            })
            .collect();

        for i in 0..self.maximal_cones.len() {
            for j in i + 1..self.maximal_cones.len() {
                let (a, b) = (&self.maximal_cones[i], &self.maximal_cones[j]);
                if a.is_subset_of(b) || b.is_subset_of(a) {
                    violations.push(format!(
                        "maximal cones {i} and {j} are nested; neither is maximal"
                    ));
                    continue;
                }
                if simplicial[i]
                    && simplicial[j]
                    && !self.pair_is_face(a, b, inverses[i].as_ref(), inverses[j].as_ref())
                {
                    violations.push(format!(
                        "maximal cones {i} and {j} do not intersect in a common face"
                    ));
                }
            }
        }

        let is_valid = violations.is_empty();
        let is_complete = is_valid && self.is_complete();
        ValidationReport {
            is_valid,
            is_smooth: is_valid && is_smooth,
            is_complete,
            violations,
        }
    }

    /// Completeness by the wall condition: maximal cones of full dimension,
    /// every wall shared by exactly two of them, and the wall-adjacency
    /// graph connected.
    pub fn is_complete(&self) -> bool {
        if self.maximal_cones.is_empty() {
            return self.rank == 0 && false;
        }
        if self
            .maximal_cones
            .iter()
            .any(|c| c.dim() != self.rank)
        {
            return false;
        }
        if self.rank == 0 {
            return self.maximal_cones.len() == 1;
        }
        // Wall = (rank-1)-subset of a maximal cone's rays.
        let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, cone) in self.maximal_cones.iter().enumerate() {
            let idx = cone.ray_indices();
            for leave_out in 0..idx.len() {
                let wall: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| *p != leave_out)
                    .map(|(_, &i)| i)
                    .collect();
                walls.entry(wall).or_default().push(ci);
            }
        }
        if walls.values().any(|cones| cones.len() != 2) {
            return false;
        }
        // Connectivity of the adjacency graph across walls.
        let n = self.maximal_cones.len();
        let mut adjacency = vec![Vec::new(); n];
        for cones in walls.values() {
            adjacency[cones[0]].push(cones[1]);
            adjacency[cones[1]].push(cones[0]);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for &next in &adjacency[c] {
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Every face of every maximal cone, deduplicated, with face counts.
    pub fn enumerate_faces(&self) -> FaceData {
        let mut faces: BTreeSet<Cone> = BTreeSet::new();
        faces.insert(Cone::new(vec![]));
        for cone in &self.maximal_cones {
            let idx = cone.ray_indices();
            for mask in 1u64..(1 << idx.len()) {
                let subset: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| mask & (1 << *p) != 0)
                    .map(|(_, &i)| i)
                    .collect();
                faces.insert(Cone::new(subset));
            }
        }
        let max_dim = faces.iter().map(Cone::dim).max().unwrap_or(0);
        let mut f_vector = vec![0usize; max_dim + 1];
        for f in &faces {
            f_vector[f.dim()] += 1;
        }
        let mut faces: Vec<(usize, Cone)> = faces.into_iter().map(|c| (c.dim(), c)).collect();
        faces.sort();
        FaceData { faces, f_vector }
    }

    /// Image fan under a unimodular lattice automorphism: rays are mapped,
    /// cone combinatorics is untouched.
    pub fn apply_unimodular(&self, u: &[Vec<Int>]) -> Result<Fan> {
        if u.len() != self.rank || u.iter().any(|row| row.len() != self.rank) {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: u.len(),
            });
        }
        let d = det_int(u);
        if !d.abs().is_one() {
            return Err(Error::NotUnimodular {
                determinant: d.to_string(),
            });
        }
        let rays = self
            .rays
            .iter()
            .map(|ray| {
                let mapped: Vec<Int> = u
                    .iter()
                    .map(|row| row.iter().zip(&ray.0).map(|(a, b)| a * b).sum())
                    .collect();
                let v = LatticeVector(mapped);
                debug_assert!(v.is_primitive());
                v
            })
            .collect();
        Fan::new(self.rank, rays, self.maximal_cones.clone())
    }

    /// Canonical form: rays sorted lexicographically, cone indices remapped,
    /// cones sorted. Two fans are equal as fans iff their canonical forms
    /// are structurally equal.
    pub fn canonical(&self) -> Fan {
        let mut order: Vec<usize> = (0..self.rays.len()).collect();
        order.sort_by(|&a, &b| self.rays[a].cmp(&self.rays[b]));
        let mut position = vec![0usize; self.rays.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let rays = order.iter().map(|&i| self.rays[i].clone()).collect();
        let mut cones: Vec<Cone> = self
            .maximal_cones
            .iter()
            .map(|c| Cone::new(c.ray_indices().iter().map(|&i| position[i]).collect()))
            .collect();
        cones.sort();
        cones.dedup();
        Fan {
            rank: self.rank,
            rays,
            maximal_cones: cones,
        }
    }

    pub fn canonically_equal(&self, other: &Fan) -> bool {
        self.canonical() == other.canonical()
    }
}

#[cfg(test)]
pub(crate) mod testfans {
    use super::*;

    /// P^1 with rays (+1), (-1): the standard fiber fan.
    pub fn p1() -> Fan {
        Fan::new(
            1,
            vec![LatticeVector::from_i64(&[1]), LatticeVector::from_i64(&[-1])],
            vec![Cone::new(vec![0]), Cone::new(vec![1])],
        )
        .unwrap()
    }

    /// P^1 with rays (-1), (+1): the base order used by the Hirzebruch data.
    pub fn p1_base() -> Fan {
        Fan::new(
            1,
            vec![LatticeVector::from_i64(&[-1]), LatticeVector::from_i64(&[1])],
            vec![Cone::new(vec![0]), Cone::new(vec![1])],
        )
        .unwrap()
    }

    pub fn p2() -> Fan {
        Fan::new(
            2,
            vec![
                LatticeVector::from_i64(&[1, 0]),
                LatticeVector::from_i64(&[0, 1]),
                LatticeVector::from_i64(&[-1, -1]),
            ],
            vec![
                Cone::new(vec![0, 1]),
                Cone::new(vec![1, 2]),
                Cone::new(vec![0, 2]),
            ],
        )
        .unwrap()
    }

    /// The Hirzebruch surface fan with rays (0,1),(0,-1),(-1,0),(1,a).
    pub fn hirzebruch(a: i64) -> Fan {
        Fan::new(
            2,
            vec![
                LatticeVector::from_i64(&[0, 1]),
                LatticeVector::from_i64(&[0, -1]),
                LatticeVector::from_i64(&[-1, 0]),
                LatticeVector::from_i64(&[1, a]),
            ],
            vec![
                Cone::new(vec![0, 2]),
                Cone::new(vec![1, 2]),
                Cone::new(vec![0, 3]),
                Cone::new(vec![1, 3]),
            ],
        )
        .unwrap()
    }

    /// A point: the unique fan in the rank-0 lattice.
    pub fn point() -> Fan {
        Fan::new(0, vec![], vec![Cone::new(vec![])]).unwrap()
    }
}
