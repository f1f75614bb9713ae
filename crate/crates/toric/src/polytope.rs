//! Exact polytope geometry: divisor polytopes, vertex enumeration, volumes,
//! mixed volumes, Minkowski sums, lifted polytopes, and exact polynomial
//! integration. This is the geometric half of the intersection-number
//! dictionary; the algebraic half lives in `cohomology`.
//!
//! Volumes are normalized so a fundamental domain of the lattice has volume
//! one; the factorials appearing in the intersection identities are kept
//! explicit, never folded into volumes. Only genuine convex data is
//! accepted here: divisors must be nef wherever a polytope is demanded,
//! while arbitrary divisors are handled algebraically in `cohomology`.

use num::{Integer as _, One, Signed, Zero};

use crate::cohomology::{self, CohomologyRing, Divisor};
use crate::error::{Error, Result};
use crate::fan::{Fan, LatticeVector, RationalVector};
use crate::linalg::{self, factorial, kernel_basis, solve_full_column_rank, Int, Rat};
use crate::poly::{Monomial, Polynomial};
use crate::twist::TwistData;

/// { x : <x, normal_i> <= bound_i } — one inequality per fan ray when built
/// from a divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    pub rank: usize,
    pub normals: Vec<LatticeVector>,
    pub bounds: Vec<Rat>,
}

/// A polytope by its extreme points, deduplicated and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    rank: usize,
    vertices: Vec<RationalVector>,
}

/// The polytope of a divisor: one inequality per ray, bounded by the
/// divisor coefficients.
pub fn divisor_polytope(fan: &Fan, divisor: &Divisor) -> HPolytope {
    HPolytope {
        rank: fan.rank(),
        normals: fan.rays().to_vec(),
        bounds: divisor.coefficients().to_vec(),
    }
}

impl HPolytope {
    /// Exact vertex enumeration: solve every rank-sized subsystem, keep
    /// feasible solutions. Errors on unbounded polyhedra (the divisor fails
    /// to be nef in some direction of an incomplete support).
    pub fn vertices(&self) -> Result<VPolytope> {
        let n = self.rank;
        if n == 0 {
            return Ok(VPolytope {
                rank: 0,
                vertices: vec![RationalVector(vec![])],
            });
        }
        if self.recession_cone_is_nontrivial() {
            return Err(Error::Unbounded);
        }
        let m = self.normals.len();
        let mut points: Vec<RationalVector> = Vec::new();
        for subset in subsets_of_size(m, n) {
            let a: Vec<Vec<Rat>> = subset
                .iter()
                .map(|&i| {
                    self.normals[i]
                        .0
                        .iter()
                        .map(|v| Rat::from_integer(v.clone()))
                        .collect()
                })
                .collect();
            let b: Vec<Rat> = subset.iter().map(|&i| self.bounds[i].clone()).collect();
            let Some(x) = solve_full_column_rank(&a, &b) else {
                continue;
            };
            let x = RationalVector(x);
            if self.contains(&x) {
                points.push(x);
            }
        }
        points.sort();
        points.dedup();
        Ok(VPolytope {
            rank: n,
            vertices: points,
        })
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.normals
            .iter()
            .zip(&self.bounds)
            .all(|(normal, bound)| normal.dot_rat(x) <= *bound)
    }

    /// The recession cone { y : <y, normal_i> <= 0 } is nontrivial iff the
    /// polyhedron is unbounded (or has an unbounded relaxation). Checks the
    /// lineality space and the extreme-ray candidates exactly.
    fn recession_cone_is_nontrivial(&self) -> bool {
        let n = self.rank;
        let rows: Vec<Vec<Rat>> = self
            .normals
            .iter()
            .map(|v| v.0.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        if !kernel_basis(&rows, n).is_empty() {
            return true;
        }
        let m = self.normals.len();
        for subset in subsets_of_size(m, n - 1) {
            let sub: Vec<Vec<Rat>> = subset.iter().map(|&i| rows[i].clone()).collect();
            let kernel = kernel_basis(&sub, n);
            if kernel.len() != 1 {
                continue;
            }
            let g = RationalVector(kernel[0].clone());
            let neg = g.scale(&-Rat::one());
            for candidate in [g, neg] {
                if self
                    .normals
                    .iter()
                    .all(|normal| !normal.dot_rat(&candidate).is_positive())
                {
                    return true;
                }
            }
        }
        false
    }
}

impl VPolytope {
    pub fn empty(rank: usize) -> VPolytope {
        VPolytope {
            rank,
            vertices: vec![],
        }
    }

    /// Hull of an arbitrary point set: deduplicates, keeps extreme points,
    /// sorts.
    pub fn from_points(rank: usize, points: Vec<RationalVector>) -> Result<VPolytope> {
        for p in &points {
            if p.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: p.rank(),
                });
            }
        }
        let mut points = points;
        points.sort();
        points.dedup();
        let mut vertices = extreme_points(&points);
        vertices.sort();
        Ok(VPolytope { rank, vertices })
    }

    pub fn from_i64(rank: usize, points: &[&[i64]]) -> VPolytope {
        VPolytope::from_points(
            rank,
            points.iter().map(|p| RationalVector::from_i64(p)).collect(),
        )
        .expect("literal points")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the affine hull; `None` when empty.
    pub fn affine_dim(&self) -> Option<usize> {
        if self.vertices.is_empty() {
            return None;
        }
        Some(affine_rank(&self.vertices))
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == Some(self.rank)
    }

    pub fn translate(&self, shift: &RationalVector) -> VPolytope {
        VPolytope {
            rank: self.rank,
            vertices: self.vertices.iter().map(|v| v.add(shift)).collect(),
        }
    }

    pub fn dilate(&self, c: &Rat) -> Result<VPolytope> {
        VPolytope::from_points(
            self.rank,
            self.vertices.iter().map(|v| v.scale(c)).collect(),
        )
    }

    /// Triangulation by coning from the lexicographically least vertex over
    /// recursively triangulated facets; simplices are vertex-index tuples.
    pub fn triangulate(&self) -> Vec<Vec<usize>> {
        self.triangulate_from_anchor(0)
    }

    /// Same construction anchored at an arbitrary vertex; every anchor
    /// yields the same volume, a cross-check the tests exercise.
    pub fn triangulate_from_anchor(&self, anchor: usize) -> Vec<Vec<usize>> {
        if self.rank == 0 || !self.is_full_dimensional() {
            return vec![];
        }
        let coords: Vec<usize> = (0..self.rank).collect();
        let indices: Vec<usize> = (0..self.vertices.len()).collect();
        triangulate_rec(&self.vertices, &indices, &coords, Some(anchor))
    }

    /// Lattice-normalized volume: zero unless full-dimensional, and the
    /// 0-dimensional polytope (a point in the rank-0 space) has volume one.
    pub fn volume(&self) -> Rat {
        if self.rank == 0 {
            return if self.is_empty() { Rat::zero() } else { Rat::one() };
        }
        self.volume_from_anchor(0)
    }

    pub fn volume_from_anchor(&self, anchor: usize) -> Rat {
        let simplices = self.triangulate_from_anchor(anchor);
        let mut total = Rat::zero();
        for simplex in &simplices {
            total += simplex_volume(&self.vertices, simplex);
        }
        total
    }
}

fn simplex_volume(points: &[RationalVector], simplex: &[usize]) -> Rat {
    let d = simplex.len() - 1;
    let v0 = &points[simplex[0]];
    let rows: Vec<Vec<Rat>> = simplex[1..].iter().map(|&i| points[i].sub(v0).0).collect();
    let det = linalg::det(&rows);
    det.abs() / Rat::from_integer(factorial(d))
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

/// Dimension of the affine hull of a nonempty point set.
fn affine_rank(points: &[RationalVector]) -> usize {
    let rows: Vec<Vec<Rat>> = points[1..].iter().map(|p| p.sub(&points[0]).0).collect();
    linalg::rank(&rows)
}

/// A supporting hyperplane of a point set spanning a facet: primitive
/// integer normal, points satisfy <normal, p> <= offset, equality on the
/// incident list.
struct FacetPlane {
    normal: Vec<Rat>,
    incident: Vec<usize>,
}

/// Facet-supporting hyperplanes of a point set that is full-dimensional in
/// the coordinate subset `coords`. `selection` indexes into `points`.
fn facet_planes(points: &[RationalVector], selection: &[usize], coords: &[usize]) -> Vec<FacetPlane> {
    let d = coords.len();
    let restricted: Vec<Vec<Rat>> = selection
        .iter()
        .map(|&i| coords.iter().map(|&c| points[i].0[c].clone()).collect())
        .collect();
    let mut seen: std::collections::BTreeSet<(Vec<Int>, Int)> = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for subset in subsets_of_size(selection.len(), d) {
        let base = &restricted[subset[0]];
        let diffs: Vec<Vec<Rat>> = subset[1..]
            .iter()
            .map(|&i| restricted[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let kernel = kernel_basis(&diffs, d);
        if kernel.len() != 1 {
            continue; // affinely dependent subset
        }
        let mut normal = kernel[0].clone();
        let mut offset: Rat = normal.iter().zip(base).map(|(a, b)| a * b).sum();
        let mut has_below = false;
        let mut has_above = false;
        for r in &restricted {
            let value: Rat = normal.iter().zip(r).map(|(a, b)| a * b).sum();
            match value.cmp(&offset) {
                std::cmp::Ordering::Less => has_below = true,
                std::cmp::Ordering::Greater => has_above = true,
                std::cmp::Ordering::Equal => {}
            }
        }
        if has_below && has_above {
            continue;
        }
        if has_above {
            for v in normal.iter_mut() {
                *v = -v.clone();
            }
            offset = -offset;
        }
        // Canonical primitive integer form for deduplication.
        let denom_lcm = normal
            .iter()
            .chain(std::iter::once(&offset))
            .fold(Int::one(), |acc, v| acc.lcm(v.denom()));
        let mut ints: Vec<Int> = normal
            .iter()
            .map(|v| v.numer() * (&denom_lcm / v.denom()))
            .collect();
        let mut off_int = offset.numer() * (&denom_lcm / offset.denom());
        let mut with_offset = ints.clone();
        with_offset.push(off_int.clone());
        let g = linalg::gcd_all(&with_offset);
        if !g.is_one() && !g.is_zero() {
            for v in ints.iter_mut() {
                *v = &*v / &g;
            }
            off_int = off_int / &g;
        }
        if !seen.insert((ints.clone(), off_int.clone())) {
            continue;
        }
        let normal: Vec<Rat> = ints.into_iter().map(Rat::from_integer).collect();
        let offset = Rat::from_integer(off_int);
        let incident: Vec<usize> = selection
            .iter()
            .enumerate()
            .filter(|(pos, _)| {
                let value: Rat = normal
                    .iter()
                    .zip(&restricted[*pos])
                    .map(|(a, b)| a * b)
                    .sum();
                value == offset
            })
            .map(|(_, &i)| i)
            .collect();
        out.push(FacetPlane { normal, incident });
    }
    out
}

/// Recursive facet triangulation. `selection` holds global point indices;
/// the geometry lives in the coordinate subset `coords`, where the selected
/// points are full-dimensional. `anchor_hint` selects the coning vertex at
/// the top level; recursion uses the lexicographically least point.
fn triangulate_rec(
    points: &[RationalVector],
    selection: &[usize],
    coords: &[usize],
    anchor_hint: Option<usize>,
) -> Vec<Vec<usize>> {
    let d = coords.len();
    if d == 0 {
        return vec![vec![selection[0]]];
    }
    if d == 1 {
        let c = coords[0];
        let min = *selection
            .iter()
            .min_by(|&&a, &&b| points[a].0[c].cmp(&points[b].0[c]))
            .unwrap();
        let max = *selection
            .iter()
            .max_by(|&&a, &&b| points[a].0[c].cmp(&points[b].0[c]))
            .unwrap();
        return vec![vec![min, max]];
    }
    let anchor = match anchor_hint {
        Some(a) if selection.contains(&a) => a,
        _ => *selection
            .iter()
            .min_by(|&&a, &&b| points[a].cmp(&points[b]))
            .unwrap(),
    };
    let mut simplices = Vec::new();
    for facet in facet_planes(points, selection, coords) {
        if facet.incident.contains(&anchor) {
            continue;
        }
        // Drop a coordinate with a nonzero normal entry: projecting the
        // facet along it is an affine isomorphism.
        let drop_pos = facet
            .normal
            .iter()
            .position(|v| !v.is_zero())
            .expect("facet normal is nonzero");
        let child_coords: Vec<usize> = coords
            .iter()
            .enumerate()
            .filter(|(pos, _)| *pos != drop_pos)
            .map(|(_, &c)| c)
            .collect();
        for child in triangulate_rec(points, &facet.incident, &child_coords, None) {
            let mut simplex = vec![anchor];
            simplex.extend(child);
            simplices.push(simplex);
        }
    }
    simplices
}

/// The extreme points of a finite deduplicated point set: reduce to
/// affine-hull coordinates, then recurse over facets (every vertex of a
/// polytope is a vertex of one of its facets, and points incident to no
/// facet are interior).
fn extreme_points(points: &[RationalVector]) -> Vec<RationalVector> {
    if points.len() <= 1 {
        return points.to_vec();
    }
    let origin = &points[0];
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for q in &points[1..] {
        let candidate = q.sub(origin).0;
        let mut trial = basis.clone();
        trial.push(candidate.clone());
        if linalg::rank(&trial) > basis.len() {
            basis.push(candidate);
        }
    }
    let d = basis.len();
    debug_assert!(d > 0, "distinct points span a line at least");
    let basis_columns: Vec<Vec<Rat>> = (0..origin.rank())
        .map(|row| basis.iter().map(|b| b[row].clone()).collect())
        .collect();
    let projected: Vec<RationalVector> = points
        .iter()
        .map(|q| {
            RationalVector(
                solve_full_column_rank(&basis_columns, &q.sub(origin).0)
                    .expect("points lie in their own affine hull"),
            )
        })
        .collect();
    let selection: Vec<usize> = (0..projected.len()).collect();
    let coords: Vec<usize> = (0..d).collect();
    let mut indices = extreme_indices_rec(&projected, &selection, &coords);
    indices.sort_unstable();
    indices.dedup();
    indices.into_iter().map(|i| points[i].clone()).collect()
}

fn extreme_indices_rec(
    points: &[RationalVector],
    selection: &[usize],
    coords: &[usize],
) -> Vec<usize> {
    if selection.len() <= 1 {
        return selection.to_vec();
    }
    if coords.len() == 1 {
        let c = coords[0];
        let min = *selection
            .iter()
            .min_by(|&&a, &&b| points[a].0[c].cmp(&points[b].0[c]))
            .unwrap();
        let max = *selection
            .iter()
            .max_by(|&&a, &&b| points[a].0[c].cmp(&points[b].0[c]))
            .unwrap();
        return vec![min, max];
    }
    let mut out = Vec::new();
    for facet in facet_planes(points, selection, coords) {
        let drop_pos = facet
            .normal
            .iter()
            .position(|v| !v.is_zero())
            .expect("facet normal is nonzero");
        let child_coords: Vec<usize> = coords
            .iter()
            .enumerate()
            .filter(|(pos, _)| *pos != drop_pos)
            .map(|(_, &c)| c)
            .collect();
        out.extend(extreme_indices_rec(points, &facet.incident, &child_coords));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Minkowski sum: hull of pairwise vertex sums.
pub fn minkowski_sum(p: &VPolytope, q: &VPolytope) -> Result<VPolytope> {
    if p.rank != q.rank {
        return Err(Error::RankMismatch {
            expected: p.rank,
            got: q.rank,
        });
    }
    if p.is_empty() || q.is_empty() {
        return Ok(VPolytope::empty(p.rank));
    }
    let mut sums = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            sums.push(a.add(b));
        }
    }
    VPolytope::from_points(p.rank, sums)
}

/// Mixed volume by inclusion-exclusion polarization:
/// Vol(P_1..P_n) = (1/n!) sum over nonempty S of (-1)^(n-|S|) vol(sum_S P_i),
/// normalized so the diagonal recovers the volume.
pub fn mixed_volume(polytopes: &[VPolytope]) -> Result<Rat> {
    let n = polytopes
        .first()
        .map(VPolytope::rank)
        .ok_or(Error::WrongDivisorCount { expected: 1, got: 0 })?;
    if polytopes.len() != n {
        return Err(Error::WrongDivisorCount {
            expected: n,
            got: polytopes.len(),
        });
    }
    for p in polytopes {
        if p.rank != n {
            return Err(Error::RankMismatch {
                expected: n,
                got: p.rank,
            });
        }
    }
    let mut total = Rat::zero();
    for mask in 1u32..(1 << n) {
        let mut sum: Option<VPolytope> = None;
        for (i, p) in polytopes.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            sum = Some(match sum {
                None => p.clone(),
                Some(acc) => minkowski_sum(&acc, p)?,
            });
        }
        let vol = sum.expect("mask nonempty").volume();
        let sign = if (n - (mask.count_ones() as usize)) % 2 == 0 {
            Rat::one()
        } else {
            -Rat::one()
        };
        total += sign * vol;
    }
    Ok(total / Rat::from_integer(factorial(n)))
}

/// Per-maximal-cone linear data of a divisor's support function: the unique
/// m with <m, e_i> = h_i on the cone's rays.
fn cone_support_points(fan: &Fan, divisor: &Divisor) -> Vec<RationalVector> {
    fan.maximal_cones()
        .iter()
        .map(|cone| {
            let a: Vec<Vec<Rat>> = cone
                .ray_indices()
                .iter()
                .map(|&i| {
                    fan.ray(i)
                        .0
                        .iter()
                        .map(|v| Rat::from_integer(v.clone()))
                        .collect()
                })
                .collect();
            let b: Vec<Rat> = cone
                .ray_indices()
                .iter()
                .map(|&i| divisor.coefficients()[i].clone())
                .collect();
            RationalVector(solve_full_column_rank(&a, &b).expect("full-dimensional simplicial cone"))
        })
        .collect()
}

/// Convexity of the support function on a smooth complete fan: each cone's
/// linear extension stays weakly below the bounds on all other rays.
pub fn is_nef(fan: &Fan, divisor: &Divisor) -> bool {
    if fan.rank() == 0 {
        return true;
    }
    let support = cone_support_points(fan, divisor);
    fan.maximal_cones().iter().zip(&support).all(|(cone, m)| {
        (0..fan.rays().len())
            .all(|i| cone.contains_index(i) || fan.ray(i).dot_rat(m) <= divisor.coefficients()[i])
    })
}

/// Strict convexity of the support function: each cone's linear extension
/// is strictly below the bound on every ray outside the cone.
pub fn is_ample(fan: &Fan, divisor: &Divisor) -> bool {
    if fan.rank() == 0 {
        return true;
    }
    let support = cone_support_points(fan, divisor);
    fan.maximal_cones().iter().zip(&support).all(|(cone, m)| {
        (0..fan.rays().len())
            .all(|i| cone.contains_index(i) || fan.ray(i).dot_rat(m) < divisor.coefficients()[i])
    })
}

/// The lift of a nef fiber divisor's polytope through the twisting data:
/// hull of { (x, lambda) : lambda a vertex of the fiber polytope, x a
/// vertex of the character-divisor polytope at lambda }, in (base, fiber)
/// coordinates. Linearity of the slice family makes this hull the full
/// fibered polytope { (x, lambda) : lambda in the polytope, x in its slice }.
pub fn lift_polytope(data: &TwistData, fiber_divisor: &Divisor) -> Result<VPolytope> {
    let fiber = data.fiber();
    let base = data.base();
    if !is_nef(fiber, fiber_divisor) {
        return Err(Error::NotNef(
            "fiber divisor has a non-convex support function".into(),
        ));
    }
    let delta = divisor_polytope(fiber, fiber_divisor).vertices()?;
    let mut points = Vec::new();
    for lambda in delta.vertices() {
        let slice_divisor = data.character_divisor_rational(lambda)?;
        if !is_nef(base, &slice_divisor) {
            return Err(Error::NotNef(format!(
                "character divisor at polytope vertex ({}) is not nef",
                lambda
                    .0
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        let slice = divisor_polytope(base, &slice_divisor).vertices()?;
        for x in slice.vertices() {
            let mut v = x.0.clone();
            v.extend(lambda.0.iter().cloned());
            points.push(RationalVector(v));
        }
    }
    VPolytope::from_points(base.rank() + fiber.rank(), points)
}

/// Exact integral of a polynomial over a polytope: triangulate, substitute
/// the affine simplex parametrization, and use the closed-form monomial
/// integral over the standard simplex.
pub fn integrate_polynomial(f: &Polynomial, p: &VPolytope) -> Rat {
    if p.rank == 0 {
        // Integration over the point polytope degenerates to evaluation.
        return if p.is_empty() { Rat::zero() } else { f.eval(&[]) };
    }
    if !p.is_full_dimensional() {
        return Rat::zero();
    }
    let d = p.rank;
    let mut total = Rat::zero();
    for simplex in p.triangulate() {
        let v0 = &p.vertices[simplex[0]];
        let edges: Vec<RationalVector> = simplex[1..]
            .iter()
            .map(|&i| p.vertices[i].sub(v0))
            .collect();
        let det_rows: Vec<Vec<Rat>> = edges.iter().map(|e| e.0.clone()).collect();
        let jacobian = linalg::det(&det_rows).abs();
        if jacobian.is_zero() {
            continue;
        }
        // x_j = v0_j + sum_i edges[i][j] t_i
        let images: Vec<Polynomial> = (0..d)
            .map(|j| {
                let mut p_j = Polynomial::constant(d, v0.0[j].clone());
                for (i, e) in edges.iter().enumerate() {
                    p_j.add_term(Monomial::variable(d, i), e.0[j].clone());
                }
                p_j
            })
            .collect();
        let g = f.substitute(&images, d);
        let mut simplex_integral = Rat::zero();
        for (m, c) in g.terms() {
            // Integral of prod t_i^{b_i} over the standard simplex:
            // (prod b_i!) / (d + sum b_i)!
            let mut numerator = Int::one();
            let mut exponent_sum = 0usize;
            for &b in &m.0 {
                numerator *= factorial(b as usize);
                exponent_sum += b as usize;
            }
            let denominator = factorial(d + exponent_sum);
            simplex_integral += c * Rat::new(numerator, denominator);
        }
        total += simplex_integral * jacobian;
    }
    total
}

/// The integrand of the fibered self-intersection identity: the expansion
/// of (D_B + c(lambda))^k in the base ring, as a polynomial in the fiber
/// characters whose coefficients are base intersection numbers.
fn base_power_polynomial(data: &TwistData, base_divisor: &Divisor) -> Result<Polynomial> {
    let base = data.base();
    let n = data.fiber_rank();
    let k = base.rank();
    let ring = CohomologyRing::new(base)?;
    let b_class = ring.divisor_class(base_divisor);
    let character_classes: Vec<_> = (0..n)
        .map(|t| {
            let mut lambda = vec![0i64; n];
            lambda[t] = 1;
            data.character_divisor(&LatticeVector::from_i64(&lambda))
                .map(|d| ring.divisor_class(&d))
        })
        .collect::<Result<_>>()?;

    let mut poly = Polynomial::zero(n);
    for split in compositions(k, n + 1) {
        let (j0, js) = (split[0], &split[1..]);
        let mut class = ring.power(&b_class, j0);
        for (c, &j) in character_classes.iter().zip(js) {
            if j > 0 {
                class = ring.multiply(&class, &ring.power(c, j));
            }
        }
        let degree = ring.degree_of_top_class(&class)?;
        if degree.is_zero() {
            continue;
        }
        let mut multinomial = factorial(k);
        for &j in &split {
            multinomial /= factorial(j);
        }
        let exponents: Vec<u32> = js.iter().map(|&j| j as u32).collect();
        poly.add_term(Monomial(exponents), degree * Rat::from_integer(multinomial));
    }
    Ok(poly)
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative
/// integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(vec![]);
        }
        return out;
    }
    let mut current = vec![0usize; parts];
    fn rec(pos: usize, remaining: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos + 1 == current.len() {
            current[pos] = remaining;
            out.push(current.clone());
            current[pos] = 0;
            return;
        }
        for v in 0..=remaining {
            current[pos] = v;
            rec(pos + 1, remaining - v, current, out);
        }
        current[pos] = 0;
    }
    rec(0, total, &mut current, &mut out);
    out
}

/// The integral side of the fibered self-intersection identity:
/// ((n+k)!/k!) times the exact integral of (D_B + c(lambda))^k over the
/// fiber divisor's polytope.
pub fn bkk_rhs(data: &TwistData, fiber_divisor: &Divisor, base_divisor: &Divisor) -> Result<Rat> {
    let fiber = data.fiber();
    if !is_nef(fiber, fiber_divisor) {
        return Err(Error::NotNef(
            "fiber divisor has a non-convex support function".into(),
        ));
    }
    let n = data.fiber_rank();
    let k = data.base_rank();
    let delta = divisor_polytope(fiber, fiber_divisor).vertices()?;
    let integrand = base_power_polynomial(data, base_divisor)?;
    let integral = integrate_polynomial(&integrand, &delta);
    Ok(Rat::new(factorial(n + k), factorial(k)) * integral)
}

/// The geometric identity from the proof of the fibered theorem, evaluated
/// only on genuine (nef) data: the big volume of (lift + base polytope)
/// against the fiberwise integral of slice volumes.
#[derive(Debug, Clone)]
pub struct ProofIdentityReport {
    /// (n+k)-dimensional volume of the lifted polytope plus the embedded
    /// base polytope.
    pub minkowski_volume: Rat,
    /// Integral over the fiber polytope of the base-dimensional volume of
    /// (slice polytope + base polytope).
    pub integrated_volume: Rat,
    pub equal: bool,
}

/// Result of checking the fibered self-intersection identity two ways.
#[derive(Debug, Clone)]
pub struct BkkReport {
    /// k! times the (n+k)-fold self-intersection of p*D_B + lifted D_h,
    /// computed in the twisted fan's ring.
    pub lhs: Rat,
    /// (n+k)! times the integral of (D_B + c(lambda))^k over the fiber
    /// polytope.
    pub rhs: Rat,
    pub equal: bool,
    /// Present when every polytope involved is genuine (all divisors nef).
    pub proof_identity: Option<ProofIdentityReport>,
}

/// Compute both sides of the fibered self-intersection identity exactly,
/// plus the volume identity from its proof when the data is nef.
pub fn bkk_check(
    data: &TwistData,
    fiber_divisor: &Divisor,
    base_divisor: &Divisor,
) -> Result<BkkReport> {
    let n = data.fiber_rank();
    let k = data.base_rank();
    let twisted = data.twisted_product();
    let r = data.fiber().rays().len();

    // p*D_B + lifted D_h on the twisted fan: fiber coefficients on the
    // embedded fiber rays, base coefficients on the lifted rays.
    let mut coefficients = Vec::with_capacity(twisted.rays().len());
    coefficients.extend(fiber_divisor.coefficients().iter().cloned());
    coefficients.extend(base_divisor.coefficients().iter().cloned());
    debug_assert_eq!(coefficients.len(), r + data.base().rays().len());
    let total_divisor = Divisor::new(&twisted, coefficients)?;

    let self_intersection =
        cohomology::intersection_number(&twisted, &vec![total_divisor; n + k])?;
    let lhs = Rat::from_integer(factorial(k)) * self_intersection;
    let rhs = Rat::from_integer(factorial(k)) * bkk_rhs(data, fiber_divisor, base_divisor)?;
    let equal = lhs == rhs;

    let proof_identity = proof_identity(data, fiber_divisor, base_divisor)?;

    Ok(BkkReport {
        lhs,
        rhs,
        equal,
        proof_identity,
    })
}

fn proof_identity(
    data: &TwistData,
    fiber_divisor: &Divisor,
    base_divisor: &Divisor,
) -> Result<Option<ProofIdentityReport>> {
    let base = data.base();
    let fiber = data.fiber();
    let n = data.fiber_rank();
    let k = data.base_rank();
    if !is_nef(fiber, fiber_divisor) || !is_nef(base, base_divisor) {
        return Ok(None);
    }
    let lift = match lift_polytope(data, fiber_divisor) {
        Ok(p) => p,
        Err(Error::NotNef(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let base_polytope = divisor_polytope(base, base_divisor).vertices()?;
    // Embed the base polytope at fiber coordinate zero.
    let embedded = VPolytope::from_points(
        k + n,
        base_polytope
            .vertices()
            .iter()
            .map(|x| {
                let mut v = x.0.clone();
                v.extend(std::iter::repeat_n(Rat::zero(), n));
                RationalVector(v)
            })
            .collect(),
    )?;
    let minkowski_volume = minkowski_sum(&lift, &embedded)?.volume();

    let delta = divisor_polytope(fiber, fiber_divisor).vertices()?;
    let slice_volume = |lambda: &RationalVector| -> Result<Rat> {
        let d = data.character_divisor_rational(lambda)?;
        let slice = divisor_polytope(base, &d).vertices()?;
        Ok(minkowski_sum(&slice, &base_polytope)?.volume())
    };

    // The slice volume is a polynomial of degree at most k in lambda on a
    // nef family; interpolate it exactly on a principal lattice and verify
    // at the centroid before integrating.
    let integrated_volume = if delta.affine_dim() != Some(n) {
        Rat::zero()
    } else {
        let simplex = affinely_independent_subset(delta.vertices(), n);
        let monomials: Vec<Monomial> = (0..=k as u32)
            .flat_map(|deg| Monomial::all_of_degree(n, deg))
            .collect();
        let order = Int::from(k.max(1) as i64);
        let mut nodes: Vec<RationalVector> = Vec::new();
        for split in compositions(k, n + 1) {
            let mut node = simplex[0].scale(&Rat::new(
                Int::from((k - split[1..].iter().sum::<usize>()) as i64),
                order.clone(),
            ));
            if k == 0 {
                node = simplex[0].clone();
            } else {
                for (vertex, &weight) in simplex[1..].iter().zip(&split[1..]) {
                    node = node.add(
                        &vertex.scale(&Rat::new(Int::from(weight as i64), order.clone())),
                    );
                }
            }
            nodes.push(node);
        }
        nodes.sort();
        nodes.dedup();
        if nodes.len() != monomials.len() {
            return Ok(None);
        }
        let matrix: Vec<Vec<Rat>> = nodes
            .iter()
            .map(|node| {
                monomials
                    .iter()
                    .map(|m| Polynomial::monomial(n, m.clone(), Rat::one()).eval(&node.0))
                    .collect()
            })
            .collect();
        let values: Vec<Rat> = nodes
            .iter()
            .map(|node| slice_volume(node))
            .collect::<Result<_>>()?;
        let Some(coeffs) = solve_full_column_rank(&matrix, &values) else {
            return Ok(None);
        };
        let mut interpolant = Polynomial::zero(n);
        for (m, c) in monomials.iter().zip(coeffs) {
            interpolant.add_term(m.clone(), c);
        }
        // Centroid sanity check: the interpolant must reproduce the true
        // slice volume away from the nodes, otherwise the family was not
        // polynomial and the identity is not computable on this input.
        let count = Rat::from_integer(Int::from(delta.vertices().len() as i64));
        let mut centroid = RationalVector::zero(n);
        for v in delta.vertices() {
            centroid = centroid.add(v);
        }
        let centroid = centroid.scale(&(Rat::one() / count));
        if interpolant.eval(&centroid.0) != slice_volume(&centroid)? {
            return Ok(None);
        }
        integrate_polynomial(&interpolant, &delta)
    };

    Ok(Some(ProofIdentityReport {
        equal: minkowski_volume == integrated_volume,
        minkowski_volume,
        integrated_volume,
    }))
}

/// A maximal affinely independent subset (size d+1) of a vertex set of
/// affine dimension d, starting from the lexicographically least vertex.
fn affinely_independent_subset(vertices: &[RationalVector], d: usize) -> Vec<RationalVector> {
    let mut chosen = vec![vertices[0].clone()];
    let mut diffs: Vec<Vec<Rat>> = Vec::new();
    for v in &vertices[1..] {
        if chosen.len() == d + 1 {
            break;
        }
        let candidate = v.sub(&chosen[0]).0;
        let mut trial = diffs.clone();
        trial.push(candidate.clone());
        if linalg::rank(&trial) > diffs.len() {
            diffs.push(candidate);
            chosen.push(v.clone());
        }
    }
    debug_assert_eq!(chosen.len(), d + 1);
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::testfans::{hirzebruch, p1, p2};
    use crate::fan::Cone;
    use crate::linalg::{rat, rat_frac};
    use crate::twist::hirzebruch_twist;

    fn unit_square() -> VPolytope {
        VPolytope::from_i64(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
    }

    fn unit_triangle() -> VPolytope {
        VPolytope::from_i64(2, &[&[0, 0], &[1, 0], &[0, 1]])
    }

    #[test]
    fn divisor_polytope_vertices_on_the_line() {
        let fan = p1();
        let d = Divisor::from_i64(&fan, &[1, 0]).unwrap();
        let p = divisor_polytope(&fan, &d).vertices().unwrap();
        assert_eq!(
            p.vertices(),
            &[
                RationalVector::from_i64(&[0]),
                RationalVector::from_i64(&[1])
            ]
        );
        // Contradictory bounds: empty region, flagged not full-dimensional.
        let d = Divisor::from_i64(&fan, &[-1, 0]).unwrap();
        let p = divisor_polytope(&fan, &d).vertices().unwrap();
        assert!(p.is_empty());
        assert!(!p.is_full_dimensional());
    }

    #[test]
    fn projective_plane_triangle() {
        let fan = p2();
        let d = Divisor::from_i64(&fan, &[0, 0, 1]).unwrap();
        let p = divisor_polytope(&fan, &d).vertices().unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.volume(), rat_frac(1, 2));
        assert!(p.vertices().contains(&RationalVector::from_i64(&[0, 0])));
        assert!(p.vertices().contains(&RationalVector::from_i64(&[-1, 0])));
        assert!(p.vertices().contains(&RationalVector::from_i64(&[0, -1])));
    }

    #[test]
    fn hirzebruch_ample_quadrilateral() {
        for a in 1..4 {
            let fan = hirzebruch(a);
            let d = Divisor::from_i64(&fan, &[1, 0, 0, a + 1]).unwrap();
            assert!(is_ample(&fan, &d));
            let p = divisor_polytope(&fan, &d).vertices().unwrap();
            assert_eq!(p.vertices().len(), 4);
        }
    }

    #[test]
    fn unbounded_region_is_an_error() {
        let half = Fan::new(
            1,
            vec![LatticeVector::from_i64(&[1])],
            vec![Cone::new(vec![0])],
        )
        .unwrap();
        let d = Divisor::from_i64(&half, &[1]).unwrap();
        assert!(matches!(
            divisor_polytope(&half, &d).vertices(),
            Err(Error::Unbounded)
        ));
    }

    #[test]
    fn volumes_of_standard_shapes() {
        assert_eq!(unit_square().volume(), rat(1));
        assert_eq!(unit_triangle().volume(), rat_frac(1, 2));
        for a in 0..4i64 {
            // Trapezoid conv{(0,0),(1,0),(0,1),(1,1+a)}: area 1 + a/2.
            let t = VPolytope::from_i64(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1 + a]]);
            assert_eq!(t.volume(), rat(1) + rat_frac(a, 2));
        }
    }

    #[test]
    fn volume_is_anchor_independent() {
        let shapes = vec![
            unit_square(),
            unit_triangle(),
            VPolytope::from_i64(
                3,
                &[&[0, 0, 0], &[2, 0, 0], &[0, 3, 0], &[0, 0, 1], &[2, 3, 1]],
            ),
        ];
        for p in shapes {
            let reference = p.volume();
            for anchor in 0..p.vertices().len() {
                assert_eq!(p.volume_from_anchor(anchor), reference);
            }
        }
    }

    #[test]
    fn volume_translation_and_dilation() {
        let p = unit_triangle();
        let shifted = p.translate(&RationalVector::from_i64(&[5, -7]));
        assert_eq!(shifted.volume(), p.volume());
        for c in 1..4i64 {
            let scaled = p.dilate(&rat(c)).unwrap();
            assert_eq!(scaled.volume(), rat(c * c) * p.volume());
        }
    }

    #[test]
    fn minkowski_sums() {
        let p = unit_triangle();
        let point = VPolytope::from_i64(2, &[&[3, 4]]);
        let translated = minkowski_sum(&p, &point).unwrap();
        assert_eq!(translated, p.translate(&RationalVector::from_i64(&[3, 4])));

        let s1 = VPolytope::from_i64(2, &[&[0, 0], &[1, 0]]);
        let s2 = VPolytope::from_i64(2, &[&[0, 0], &[0, 1]]);
        assert_eq!(minkowski_sum(&s1, &s2).unwrap(), unit_square());

        // Triangle + square: a pentagon of area 7/2.
        let pentagon = minkowski_sum(&unit_triangle(), &unit_square()).unwrap();
        assert_eq!(pentagon.vertices().len(), 5);
        assert_eq!(pentagon.volume(), rat_frac(7, 2));
    }

    #[test]
    fn mixed_volume_values() {
        let q = unit_square();
        assert_eq!(mixed_volume(&[q.clone(), q.clone()]).unwrap(), rat(1));
        let s1 = VPolytope::from_i64(2, &[&[0, 0], &[1, 0]]);
        let s2 = VPolytope::from_i64(2, &[&[0, 0], &[0, 1]]);
        assert_eq!(mixed_volume(&[s1, s2]).unwrap(), rat_frac(1, 2));
        assert_eq!(
            mixed_volume(&[unit_triangle(), unit_square()]).unwrap(),
            rat(1)
        );
        // Symmetry.
        assert_eq!(
            mixed_volume(&[unit_square(), unit_triangle()]).unwrap(),
            rat(1)
        );
        // Diagonal recovers the volume.
        assert_eq!(
            mixed_volume(&[unit_triangle(), unit_triangle()]).unwrap(),
            rat_frac(1, 2)
        );
    }

    #[test]
    fn mixed_volume_is_minkowski_multilinear() {
        let a = unit_triangle();
        let a2 = unit_square();
        let b = VPolytope::from_i64(2, &[&[0, 0], &[1, 2]]);
        let lhs = mixed_volume(&[minkowski_sum(&a, &a2).unwrap(), b.clone()]).unwrap();
        let rhs = mixed_volume(&[a, b.clone()]).unwrap() + mixed_volume(&[a2, b]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ampleness_checks() {
        let fan = p2();
        assert!(is_ample(&fan, &Divisor::from_i64(&fan, &[1, 1, 1]).unwrap()));
        assert!(!is_ample(&fan, &Divisor::zero(&fan)));
        assert!(is_nef(&fan, &Divisor::zero(&fan)));
        let f2 = hirzebruch(2);
        // The fiber-class divisor is nef but not ample.
        let fiber_class = Divisor::from_i64(&f2, &[0, 0, 0, 1]).unwrap();
        assert!(is_nef(&f2, &fiber_class));
        assert!(!is_ample(&f2, &fiber_class));
        // The (0,1)-ray divisor is not even nef on F_2.
        let negative_section = Divisor::from_i64(&f2, &[1, 0, 0, 0]).unwrap();
        assert!(!is_nef(&f2, &negative_section));
    }

    #[test]
    fn classical_equality_on_p2() {
        // Ring-side intersection numbers equal n! times mixed volumes.
        let fan = p2();
        let h = Divisor::from_i64(&fan, &[0, 0, 1]).unwrap();
        let two_h = h.scale(&rat(2));
        for (d1, d2) in [(&h, &h), (&h, &two_h), (&two_h, &two_h)] {
            let ring_side =
                cohomology::intersection_number(&fan, &[(*d1).clone(), (*d2).clone()]).unwrap();
            let p1v = divisor_polytope(&fan, d1).vertices().unwrap();
            let p2v = divisor_polytope(&fan, d2).vertices().unwrap();
            let volume_side = rat(2) * mixed_volume(&[p1v, p2v]).unwrap();
            assert_eq!(ring_side, volume_side);
        }
    }

    #[test]
    fn polynomial_integrals() {
        // Linear over the unit segment.
        let segment = VPolytope::from_i64(1, &[&[0], &[1]]);
        let lambda = Polynomial::linear_form(&[rat(1)]);
        assert_eq!(integrate_polynomial(&lambda, &segment), rat_frac(1, 2));
        // xy over the unit triangle.
        let xy = Polynomial::linear_form(&[rat(1), rat(0)])
            .mul(&Polynomial::linear_form(&[rat(0), rat(1)]));
        assert_eq!(integrate_polynomial(&xy, &unit_triangle()), rat_frac(1, 24));
        // x^2 y over the unit square.
        let x2y = Polynomial::linear_form(&[rat(1), rat(0)])
            .pow(2)
            .mul(&Polynomial::linear_form(&[rat(0), rat(1)]));
        assert_eq!(integrate_polynomial(&x2y, &unit_square()), rat_frac(1, 6));
        // The constant 1 integrates to the volume.
        assert_eq!(
            integrate_polynomial(&Polynomial::one(2), &unit_square()),
            rat(1)
        );
    }

    #[test]
    fn lift_polytope_matches_twisted_divisor_polytope() {
        for a in 0..4i64 {
            let data = hirzebruch_twist(a);
            let fiber_o1 = Divisor::from_i64(data.fiber(), &[0, 1]).unwrap();
            let lift = lift_polytope(&data, &fiber_o1).unwrap();
            // Direct polytope of the lifted divisor on the twisted fan.
            let twisted = data.twisted_product();
            let lifted_divisor = Divisor::from_i64(&twisted, &[0, 1, 0, 0]).unwrap();
            let direct = divisor_polytope(&twisted, &lifted_divisor)
                .vertices()
                .unwrap();
            assert_eq!(lift, direct, "a = {a}");
            if a > 0 {
                assert_eq!(lift.vertices().len(), 3);
                assert!(lift.vertices().contains(&RationalVector::from_i64(&[a, -1])));
            }
        }
    }

    #[test]
    fn trivial_twist_lift_is_degenerate() {
        let data = hirzebruch_twist(0);
        let fiber_o1 = Divisor::from_i64(data.fiber(), &[0, 1]).unwrap();
        let lift = lift_polytope(&data, &fiber_o1).unwrap();
        assert_eq!(lift.affine_dim(), Some(1));
        assert_eq!(
            lift.vertices(),
            &[
                RationalVector::from_i64(&[0, -1]),
                RationalVector::from_i64(&[0, 0])
            ]
        );
    }

    #[test]
    fn bkk_on_the_hirzebruch_family() {
        for a in 0..4i64 {
            let data = hirzebruch_twist(a);
            let fiber_o1 = Divisor::from_i64(data.fiber(), &[0, 1]).unwrap();
            for b in 0..3i64 {
                let base_divisor = Divisor::from_i64(data.base(), &[0, b]).unwrap();
                let report = bkk_check(&data, &fiber_o1, &base_divisor).unwrap();
                assert!(report.equal, "a = {a}, b = {b}");
                assert_eq!(report.lhs, rat(a + 2 * b));
                let identity = report.proof_identity.expect("nef data");
                assert!(identity.equal, "a = {a}, b = {b}");
            }
        }
        // The a=2, b=1 instance is the worked example: both sides are 4.
        let data = hirzebruch_twist(2);
        let fiber_o1 = Divisor::from_i64(data.fiber(), &[0, 1]).unwrap();
        let base_divisor = Divisor::from_i64(data.base(), &[0, 1]).unwrap();
        let report = bkk_check(&data, &fiber_o1, &base_divisor).unwrap();
        assert_eq!(report.lhs, rat(4));
        assert_eq!(report.rhs, rat(4));
    }

    #[test]
    fn bkk_classical_specialization_over_a_point() {
        // Rank-zero base: the identity degenerates to n! Vol = ring degree.
        let point = crate::fan::testfans::point();
        let data = TwistData::new(point.clone(), p2(), vec![]).unwrap();
        let fiber_divisor = Divisor::from_i64(&p2(), &[0, 0, 2]).unwrap();
        let base_divisor = Divisor::new(&point, vec![]).unwrap();
        let report = bkk_check(&data, &fiber_divisor, &base_divisor).unwrap();
        assert!(report.equal);
        assert_eq!(report.lhs, rat(4)); // (2H)^2 = 4
        let identity = report.proof_identity.expect("nef data");
        assert!(identity.equal);
        assert_eq!(identity.minkowski_volume, rat(2)); // vol of the doubled triangle
    }

    #[test]
    fn proof_identity_on_f2_exact_volumes() {
        let data = hirzebruch_twist(2);
        let fiber_o1 = Divisor::from_i64(data.fiber(), &[0, 1]).unwrap();
        let base_segment = Divisor::from_i64(data.base(), &[0, 1]).unwrap();
        let report = bkk_check(&data, &fiber_o1, &base_segment).unwrap();
        let identity = report.proof_identity.expect("nef data");
        // Trapezoid of area 2 on both sides.
        assert_eq!(identity.minkowski_volume, rat(2));
        assert_eq!(identity.integrated_volume, rat(2));
        assert!(identity.equal);
    }

    #[test]
    fn bkk_rejects_non_nef_fiber_divisor() {
        let data = hirzebruch_twist(2);
        let not_nef = Divisor::from_i64(data.fiber(), &[1, -2]).unwrap();
        let base_divisor = Divisor::from_i64(data.base(), &[0, 0]).unwrap();
        assert!(matches!(
            bkk_rhs(&data, &not_nef, &base_divisor),
            Err(Error::NotNef(_))
        ));
    }

    #[test]
    fn extreme_point_filter() {
        // Midpoint of an edge and an interior point are dropped.
        let p = VPolytope::from_points(
            2,
            vec![
                RationalVector::from_i64(&[0, 0]),
                RationalVector::from_i64(&[2, 0]),
                RationalVector::from_i64(&[1, 0]),
                RationalVector::from_i64(&[0, 2]),
                RationalVector(vec![rat_frac(1, 2), rat_frac(1, 2)]),
            ],
        )
        .unwrap();
        assert_eq!(p.vertices().len(), 3);
    }
}
