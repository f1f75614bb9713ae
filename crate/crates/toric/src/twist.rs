//! Piecewise-linear twisting data and twisted products of fans.
//!
//! A fibered toric variety is encoded by a base fan, a fiber fan, and a map
//! that is linear on each base cone, recorded by its values on the base
//! rays. The twisted product glues the graph of that map over each base
//! cone to the fiber cones. Twists differing by a global linear map give
//! isomorphic fans, related by an explicit unimodular shear.

use num::{One, Signed, Zero};

use crate::cohomology::Divisor;
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan, LatticeVector, RationalVector};
use crate::linalg::Int;

/// A map on the support of a simplicial base fan, linear on each cone,
/// valued in the fiber cocharacter lattice. Determined by its values on the
/// base rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlMap {
    base: Fan,
    fiber_rank: usize,
    values: Vec<LatticeVector>,
}

impl PlMap {
    pub fn new(base: Fan, fiber_rank: usize, values: Vec<LatticeVector>) -> Result<PlMap> {
        if values.len() != base.rays().len() {
            return Err(Error::InvalidTwist(format!(
                "phi has {} values but the base fan has {} rays",
                values.len(),
                base.rays().len()
            )));
        }
        for v in &values {
            if v.rank() != fiber_rank {
                return Err(Error::RankMismatch {
                    expected: fiber_rank,
                    got: v.rank(),
                });
            }
        }
        Ok(PlMap {
            base,
            fiber_rank,
            values,
        })
    }

    pub fn base(&self) -> &Fan {
        &self.base
    }

    pub fn fiber_rank(&self) -> usize {
        self.fiber_rank
    }

    pub fn values(&self) -> &[LatticeVector] {
        &self.values
    }

    /// Evaluate at a point of the support: locate a maximal cone containing
    /// the point, write it over that cone's rays, extend linearly. The
    /// result does not depend on the chosen cone.
    pub fn evaluate(&self, x: &RationalVector) -> Result<RationalVector> {
        if x.rank() != self.base.rank() {
            return Err(Error::RankMismatch {
                expected: self.base.rank(),
                got: x.rank(),
            });
        }
        for cone in self.base.maximal_cones() {
            let Some(coeffs) = self.base.cone_coefficients(cone, x)? else {
                continue;
            };
            if coeffs.iter().any(Signed::is_negative) {
                continue;
            }
            let mut value = RationalVector::zero(self.fiber_rank);
            for (&ray_index, c) in cone.ray_indices().iter().zip(&coeffs) {
                value = value.add(&self.values[ray_index].to_rational().scale(c));
            }
            return Ok(value);
        }
        Err(Error::OutsideSupport(
            x.0.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", "),
        ))
    }
}

/// A base fan, a fiber fan, and twisting data: the combinatorial shadow of a
/// fibered toric variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistData {
    fiber: Fan,
    phi: PlMap,
}

impl TwistData {
    pub fn new(base: Fan, fiber: Fan, phi_values: Vec<LatticeVector>) -> Result<TwistData> {
        let phi = PlMap::new(base, fiber.rank(), phi_values)?;
        Ok(TwistData { fiber, phi })
    }

    pub fn base(&self) -> &Fan {
        self.phi.base()
    }

    pub fn fiber(&self) -> &Fan {
        &self.fiber
    }

    pub fn phi(&self) -> &PlMap {
        &self.phi
    }

    pub fn base_rank(&self) -> usize {
        self.base().rank()
    }

    pub fn fiber_rank(&self) -> usize {
        self.fiber.rank()
    }

    /// The twisted product fan in rank (base + fiber), coordinates ordered
    /// (base, fiber). Rays are the fiber rays embedded at base 0 followed by
    /// the lifted base rays (f_j, phi(f_j)); maximal cones pair every lifted
    /// base cone with every fiber cone.
    pub fn twisted_product(&self) -> Fan {
        let base = self.base();
        let k = base.rank();
        let n = self.fiber.rank();
        let r = self.fiber.rays().len();
        let mut rays = Vec::with_capacity(r + base.rays().len());
        for e in self.fiber.rays() {
            let mut v = vec![Int::zero(); k];
            v.extend(e.0.iter().cloned());
            rays.push(LatticeVector(v));
        }
        for (f, phi_f) in base.rays().iter().zip(self.phi.values()) {
            let mut v = f.0.clone();
            v.extend(phi_f.0.iter().cloned());
            let v = LatticeVector(v);
            debug_assert!(v.is_primitive());
            rays.push(v);
        }
        let mut cones =
            Vec::with_capacity(base.maximal_cones().len() * self.fiber.maximal_cones().len());
        for sigma in base.maximal_cones() {
            for tau in self.fiber.maximal_cones() {
                let mut idx: Vec<usize> = tau.ray_indices().to_vec();
                idx.extend(sigma.ray_indices().iter().map(|&j| r + j));
                cones.push(Cone::new(idx));
            }
        }
        Fan::new(k + n, rays, cones).expect("twisted product is structurally sound")
    }

    /// The divisor on the base representing the line bundle attached to a
    /// fiber character: coefficient -<phi(f_j), lambda> on base ray j.
    ///
    /// The sign follows the classification of equivariant principal bundles
    /// (<phi(x), lambda> = -cbar(lambda)(x)); it is the unique choice under
    /// which the fibered presentation relation and the fibered
    /// self-intersection identity hold, and the acceptance suite pins it.
    pub fn character_divisor(&self, lambda: &LatticeVector) -> Result<Divisor> {
        self.character_divisor_rational(&lambda.to_rational())
    }

    /// Rational-coefficient extension of `character_divisor`, linear in the
    /// character.
    pub fn character_divisor_rational(&self, lambda: &RationalVector) -> Result<Divisor> {
        if lambda.rank() != self.fiber.rank() {
            return Err(Error::RankMismatch {
                expected: self.fiber.rank(),
                got: lambda.rank(),
            });
        }
        let coefficients = self
            .phi
            .values()
            .iter()
            .map(|phi_f| -phi_f.dot_rat(lambda))
            .collect();
        Divisor::new(self.base(), coefficients)
    }

    /// Shear by a global linear map l: N_B -> N_F (an n x k integer
    /// matrix). Returns the data with phi'(f_j) = phi(f_j) + l(f_j) and the
    /// block-unimodular automorphism (v1, v2) -> (v1, v2 + l(v1)) carrying
    /// one twisted product onto the other.
    pub fn shear(&self, l: &[Vec<Int>]) -> Result<(TwistData, Vec<Vec<Int>>)> {
        let k = self.base_rank();
        let n = self.fiber_rank();
        if l.len() != n || l.iter().any(|row| row.len() != k) {
            return Err(Error::RankMismatch {
                expected: n,
                got: l.len(),
            });
        }
        let values = self
            .base()
            .rays()
            .iter()
            .zip(self.phi.values())
            .map(|(f, phi_f)| {
                let shift: Vec<Int> = l
                    .iter()
                    .map(|row| row.iter().zip(&f.0).map(|(a, b)| a * b).sum())
                    .collect();
                LatticeVector(phi_f.0.iter().zip(&shift).map(|(a, b)| a + b).collect())
            })
            .collect();
        let data = TwistData::new(self.base().clone(), self.fiber.clone(), values)?;
        let mut matrix = vec![vec![Int::zero(); k + n]; k + n];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = Int::one();
        }
        for (i, row) in l.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                matrix[k + i][j] = v.clone();
            }
        }
        Ok((data, matrix))
    }
}

/// Why a fan could not be split as a twisted product over the chosen
/// coordinate sublattice.
#[derive(Debug, Clone)]
pub struct SplitFailure {
    pub reason: String,
}

impl std::fmt::Display for SplitFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.reason)
    }
}

fn fail<T>(reason: impl Into<String>) -> std::result::Result<T, SplitFailure> {
    Err(SplitFailure {
        reason: reason.into(),
    })
}

/// Try to present `fan` as a twisted product over the coordinate sublattice
/// selected by `base_coords`. Rays with zero base component become the fiber
/// fan; the rest project to the base fan and their fiber components read off
/// the twisting data. Succeeds iff the twisted product of the candidate data
/// reproduces the fan (up to canonical reordering).
pub fn detect_fibered(
    fan: &Fan,
    base_coords: &[usize],
) -> std::result::Result<TwistData, SplitFailure> {
    let rank = fan.rank();
    let mut seen = vec![false; rank];
    for &c in base_coords {
        if c >= rank {
            return fail(format!("base coordinate {c} out of range for rank {rank}"));
        }
        if seen[c] {
            return fail(format!("base coordinate {c} listed twice"));
        }
        seen[c] = true;
    }
    let fiber_coords: Vec<usize> = (0..rank).filter(|c| !seen[*c]).collect();
    let k = base_coords.len();
    let n = fiber_coords.len();

    let take = |ray: &LatticeVector, coords: &[usize]| -> LatticeVector {
        LatticeVector(coords.iter().map(|&c| ray.0[c].clone()).collect())
    };

    let mut fiber_ray_of = vec![None; fan.rays().len()];
    let mut lifted_ray_of = vec![None; fan.rays().len()];
    let mut fiber_rays = Vec::new();
    let mut base_rays = Vec::new();
    let mut phi_values = Vec::new();
    for (i, ray) in fan.rays().iter().enumerate() {
        let base_part = take(ray, base_coords);
        let fiber_part = take(ray, &fiber_coords);
        if base_part.is_zero() {
            fiber_ray_of[i] = Some(fiber_rays.len());
            fiber_rays.push(fiber_part);
        } else {
            if !base_part.is_primitive() {
                return fail(format!("ray {i} projects to a non-primitive base vector"));
            }
            if base_rays.contains(&base_part) {
                return fail("projection to the base is non-injective on rays");
            }
            lifted_ray_of[i] = Some(base_rays.len());
            base_rays.push(base_part);
            phi_values.push(fiber_part);
        }
    }

    // Induced cones in first-encounter order, deduplicated, keeping only
    // the inclusion-maximal sets.
    let induced = |select: &dyn Fn(usize) -> Option<usize>| -> Vec<Cone> {
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for cone in fan.maximal_cones() {
            let mut s: Vec<usize> = cone
                .ray_indices()
                .iter()
                .filter_map(|&i| select(i))
                .collect();
            s.sort_unstable();
            if !sets.contains(&s) {
                sets.push(s);
            }
        }
        let maximal: Vec<Vec<usize>> = sets
            .iter()
            .filter(|s| {
                !sets
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|i| t.contains(i)))
            })
            .cloned()
            .collect();
        maximal.into_iter().map(Cone::new).collect()
    };

    let fiber_cones = induced(&|i| fiber_ray_of[i]);
    let base_cones = induced(&|i| lifted_ray_of[i]);

    let Ok(fiber_fan) = Fan::new(n, fiber_rays, fiber_cones) else {
        return fail("candidate fiber fan is structurally malformed");
    };
    let Ok(base_fan) = Fan::new(k, base_rays, base_cones) else {
        return fail("candidate base fan is structurally malformed");
    };

    let fiber_report = fiber_fan.validate();
    if !fiber_report.is_valid {
        return fail(format!(
            "candidate fiber fan is invalid: {}",
            fiber_report.violations.join("; ")
        ));
    }
    if fan.is_complete() && !fiber_report.is_complete {
        return fail("fiber-ray fan not complete");
    }
    let base_report = base_fan.validate();
    if !base_report.is_valid {
        return fail(format!(
            "candidate base fan is invalid: {}",
            base_report.violations.join("; ")
        ));
    }

    let Ok(data) = TwistData::new(base_fan, fiber_fan, phi_values) else {
        return fail("candidate twist data is inconsistent");
    };

    // Compare the reconstruction with the fan in (base, fiber) coordinates.
    let mut permutation = vec![vec![Int::zero(); rank]; rank];
    for (new, &old) in base_coords.iter().chain(&fiber_coords).enumerate() {
        permutation[new][old] = Int::one();
    }
    let permuted = fan
        .apply_unimodular(&permutation)
        .expect("coordinate permutations are unimodular");
    if !data.twisted_product().canonically_equal(&permuted) {
        return fail(
            "reconstruction mismatch: the twisted product of the candidate split does not reproduce the fan",
        );
    }
    Ok(data)
}

/// The standard projective-space fan: rays e_1..e_m and -(e_1+..+e_m), one
/// maximal cone per omitted ray.
pub fn projective_space_fan(m: usize) -> Fan {
    if m == 0 {
        return Fan::new(0, vec![], vec![Cone::new(vec![])]).expect("point fan");
    }
    let mut rays = Vec::with_capacity(m + 1);
    for l in 0..m {
        let mut v = vec![Int::zero(); m];
        v[l] = Int::one();
        rays.push(LatticeVector(v));
    }
    rays.push(LatticeVector(vec![-Int::one(); m]));
    let cones = (0..=m)
        .map(|omit| Cone::new((0..=m).filter(|&i| i != omit).collect()))
        .collect();
    Fan::new(m, rays, cones).expect("projective space fan")
}

/// Twist data for the m-th finite approximation of the universal torus
/// bundle over the torus of `fan`: the base is the n-fold product of the
/// m-dimensional projective-space fan, the fiber is `fan`, and the twisting
/// data encodes the identity character map under the tautological
/// convention (the character k is sent to the class -k, so the minus-sum
/// ray of each factor carries the corresponding fiber basis vector).
pub fn borel_fan(fan: &Fan, m: usize) -> Result<TwistData> {
    let report = fan.validate();
    if !report.is_valid {
        return Err(Error::BorelInput(report.violations.join("; ")));
    }
    if !report.is_smooth {
        return Err(Error::BorelInput("fan is not smooth".into()));
    }
    if !report.is_complete {
        return Err(Error::BorelInput("fan is not complete".into()));
    }
    let n = fan.rank();
    if m == 0 || n == 0 {
        let point = Fan::new(0, vec![], vec![Cone::new(vec![])])?;
        return TwistData::new(point, fan.clone(), vec![]);
    }
    let base_rank = n * m;
    let mut rays = Vec::with_capacity(n * (m + 1));
    let mut phi_values = Vec::with_capacity(n * (m + 1));
    for factor in 0..n {
        for l in 0..m {
            let mut v = vec![Int::zero(); base_rank];
            v[factor * m + l] = Int::one();
            rays.push(LatticeVector(v));
            phi_values.push(LatticeVector(vec![Int::zero(); n]));
        }
        let mut v = vec![Int::zero(); base_rank];
        for l in 0..m {
            v[factor * m + l] = -Int::one();
        }
        rays.push(LatticeVector(v));
        let mut u = vec![Int::zero(); n];
        u[factor] = Int::one();
        phi_values.push(LatticeVector(u));
    }
    // Maximal cones: per factor, omit one of its m+1 rays; take products.
    let mut cones: Vec<Vec<usize>> = vec![Vec::new()];
    for factor in 0..n {
        let factor_rays: Vec<usize> = (0..=m).map(|l| factor * (m + 1) + l).collect();
        let mut next = Vec::with_capacity(cones.len() * (m + 1));
        for partial in &cones {
            for omit in 0..=m {
                let mut c = partial.clone();
                c.extend(
                    factor_rays
                        .iter()
                        .enumerate()
                        .filter_map(|(l, &i)| (l != omit).then_some(i)),
                );
                next.push(c);
            }
        }
        cones = next;
    }
    let base = Fan::new(base_rank, rays, cones.into_iter().map(Cone::new).collect())?;
    TwistData::new(base, fan.clone(), phi_values)
}

/// The twist data of the Hirzebruch family: base and fiber are both the
/// projective line, phi sends the positive base ray to a and the negative
/// one to 0. Its twisted product has rays (0,1), (0,-1), (-1,0), (1,a).
pub fn hirzebruch_twist(a: i64) -> TwistData {
    let base = Fan::new(
        1,
        vec![LatticeVector::from_i64(&[-1]), LatticeVector::from_i64(&[1])],
        vec![Cone::new(vec![0]), Cone::new(vec![1])],
    )
    .unwrap();
    let fiber = Fan::new(
        1,
        vec![LatticeVector::from_i64(&[1]), LatticeVector::from_i64(&[-1])],
        vec![Cone::new(vec![0]), Cone::new(vec![1])],
    )
    .unwrap();
    TwistData::new(
        base,
        fiber,
        vec![LatticeVector::from_i64(&[0]), LatticeVector::from_i64(&[a])],
    )
    .unwrap()
}

/// Convolution of f-vectors: the face counts of a combinatorial product.
pub fn convolve_f_vectors(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
