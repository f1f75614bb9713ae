//! Graded ring presentations of smooth complete toric varieties and the
//! intersection theory they carry.
//!
//! The presentation has one variable per ray, the squarefree monomials of
//! ray sets spanning no cone, and one linear form per lattice character.
//! Normal forms are computed degree by degree: enumerate the monomials of a
//! degree, impose all relation multiples, and row-reduce exactly (a Macaulay
//! matrix, not a Groebner engine — the quotients here are Artinian with
//! known dimensions). Intersection numbers, Betti numbers, Chern classes
//! and the point-class degree map all reduce to these normal forms.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::linalg::{self, rref, Int, Rat};
use crate::poly::{Monomial, Polynomial};
use crate::twist::TwistData;

/// A formal rational combination of the rays of a fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    coefficients: Vec<Rat>,
}

impl Divisor {
    pub fn new(fan: &Fan, coefficients: Vec<Rat>) -> Result<Divisor> {
        if coefficients.len() != fan.rays().len() {
            return Err(Error::WrongCoefficientCount {
                expected: fan.rays().len(),
                got: coefficients.len(),
            });
        }
        Ok(Divisor { coefficients })
    }

    pub fn from_i64(fan: &Fan, coefficients: &[i64]) -> Result<Divisor> {
        Divisor::new(
            fan,
            coefficients.iter().map(|&c| linalg::rat(c)).collect(),
        )
    }

    /// The divisor of a single ray.
    pub fn ray(fan: &Fan, index: usize) -> Divisor {
        let mut coefficients = vec![Rat::zero(); fan.rays().len()];
        coefficients[index] = Rat::one();
        Divisor { coefficients }
    }

    pub fn zero(fan: &Fan) -> Divisor {
        Divisor {
            coefficients: vec![Rat::zero(); fan.rays().len()],
        }
    }

    pub fn coefficients(&self) -> &[Rat] {
        &self.coefficients
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        Divisor {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Divisor {
        Divisor {
            coefficients: self.coefficients.iter().map(|a| a * c).collect(),
        }
    }
}

/// Squarefree generators of the non-face ideal: the inclusion-minimal ray
/// sets spanning no cone of the fan.
pub fn sr_ideal(fan: &Fan) -> Vec<Monomial> {
    let num_rays = fan.rays().len();
    let faces: std::collections::BTreeSet<Vec<usize>> = fan
        .enumerate_faces()
        .faces
        .into_iter()
        .map(|(_, c)| c.ray_indices().to_vec())
        .collect();
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    for size in 1..=num_rays {
        for subset in subsets_of_size(num_rays, size) {
            if faces.contains(&subset) {
                continue;
            }
            let is_minimal = subset
                .iter()
                .enumerate()
                .all(|(leave, _)| {
                    let smaller: Vec<usize> = subset
                        .iter()
                        .enumerate()
                        .filter(|(p, _)| *p != leave)
                        .map(|(_, &i)| i)
                        .collect();
                    faces.contains(&smaller)
                });
            if is_minimal {
                minimal.push(subset);
            }
        }
    }
    minimal
        .into_iter()
        .map(|s| Monomial::squarefree(num_rays, &s))
        .collect()
}

fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
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

/// One linear form per standard basis character: sum_i <ray_i, e_c> x_i.
pub fn linear_ideal(fan: &Fan) -> Vec<Polynomial> {
    let num_rays = fan.rays().len();
    (0..fan.rank())
        .map(|c| {
            let coeffs: Vec<Rat> = (0..num_rays)
                .map(|i| Rat::from_integer(fan.ray(i).0[c].clone()))
                .collect();
            Polynomial::linear_form(&coeffs)
        })
        .collect()
}

/// A graded quotient presentation: squarefree monomial generators plus
/// homogeneous polynomial generators (linear forms for ordinary cohomology).
#[derive(Debug, Clone)]
pub struct RingPresentation {
    pub num_vars: usize,
    pub sr_monomials: Vec<Monomial>,
    pub linear_forms: Vec<Polynomial>,
    /// Top nonvanishing degree of the quotient (the fan rank).
    pub top_degree: usize,
}

impl RingPresentation {
    pub fn from_fan(fan: &Fan) -> RingPresentation {
        RingPresentation {
            num_vars: fan.rays().len(),
            sr_monomials: sr_ideal(fan),
            linear_forms: linear_ideal(fan),
            top_degree: fan.rank(),
        }
    }

    /// All ideal generators as polynomials.
    pub fn generators(&self) -> Vec<Polynomial> {
        let mut gens: Vec<Polynomial> = self
            .sr_monomials
            .iter()
            .map(|m| Polynomial::monomial(self.num_vars, m.clone(), Rat::one()))
            .collect();
        gens.extend(self.linear_forms.iter().cloned());
        gens
    }
}

/// The degree-d normal form data of a graded quotient: the monomial basis
/// (pivot-free representatives under descending graded-lex) and the exact
/// reduction of every degree-d monomial onto it.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    pub degree: usize,
    /// All monomials of this degree, descending graded-lex.
    pub monomials: Vec<Monomial>,
    /// The quotient basis, a subset of `monomials` in the same order.
    pub basis_monomials: Vec<Monomial>,
    /// reduction[i] = coordinates of monomials[i] in `basis_monomials`.
    pub reduction: Vec<Vec<Rat>>,
}

impl GradedBasis {
    pub fn dimension(&self) -> usize {
        self.basis_monomials.len()
    }
}

/// Compute the degree-d normal form of the quotient by squarefree monomial
/// generators plus homogeneous polynomial generators.
///
/// Monomial generators are handled combinatorially (a monomial divisible by
/// one is dead); the polynomial relations are row-reduced on the live
/// monomials over the integers, then back-substituted to exact rational
/// reduced form.
pub fn graded_basis(
    num_vars: usize,
    monomial_gens: &[Monomial],
    poly_gens: &[Polynomial],
    degree: usize,
) -> GradedBasis {
    let monomials = Monomial::all_of_degree(num_vars, degree as u32);
    let mut monomials_desc = monomials;
    monomials_desc.sort();
    monomials_desc.reverse();

    let dead: Vec<bool> = monomials_desc
        .iter()
        .map(|m| monomial_gens.iter().any(|g| g.divides(m)))
        .collect();
    let live: Vec<usize> = (0..monomials_desc.len()).filter(|&i| !dead[i]).collect();
    let live_index_of: std::collections::HashMap<&Monomial, usize> = live
        .iter()
        .enumerate()
        .map(|(pos, &i)| (&monomials_desc[i], pos))
        .collect();

    // Relation rows: each polynomial generator times each monomial of the
    // complementary degree, restricted to live columns. Coefficients are
    // integral after clearing denominators.
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for gen in poly_gens {
        let gen_degree = gen.total_degree() as usize;
        if gen_degree > degree || gen.is_zero() {
            continue;
        }
        let denominator_lcm: Int = {
            use num::Integer as _;
            gen.terms()
                .fold(Int::one(), |acc, (_, c)| acc.lcm(c.denom()))
        };
        for multiplier in Monomial::all_of_degree(num_vars, (degree - gen_degree) as u32) {
            let mut row = vec![Int::zero(); live.len()];
            let mut nonzero = false;
            for (m, c) in gen.terms() {
                let product = multiplier.mul(m);
                if let Some(&pos) = live_index_of.get(&product) {
                    let scaled = c * Rat::from_integer(denominator_lcm.clone());
                    debug_assert!(scaled.is_integer());
                    row[pos] += scaled.to_integer();
                    nonzero = true;
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
    }

    let pivots = linalg::row_echelon_int(&mut rows);

    // Back-substitute the pivot rows to reduced form over the rationals.
    let mut reduced: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| Rat::from_integer(v.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    for r in (0..reduced.len()).rev() {
        let p = pivots[r];
        let lead = reduced[r][p].clone();
        for v in reduced[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v / &lead;
            }
        }
        for above in 0..r {
            if reduced[above][p].is_zero() {
                continue;
            }
            let factor = reduced[above][p].clone();
            let (head, tail) = reduced.split_at_mut(r);
            let pivot_row = &tail[0];
            let target = &mut head[above];
            for (t, s) in target.iter_mut().zip(pivot_row) {
                if !s.is_zero() {
                    *t = &*t - &factor * s;
                }
            }
        }
    }

    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let basis_positions: Vec<usize> = (0..live.len()).filter(|p| !pivot_set.contains(p)).collect();
    let basis_monomials: Vec<Monomial> = basis_positions
        .iter()
        .map(|&p| monomials_desc[live[p]].clone())
        .collect();
    let basis_slot: std::collections::HashMap<usize, usize> = basis_positions
        .iter()
        .enumerate()
        .map(|(slot, &p)| (p, slot))
        .collect();

    let dim = basis_positions.len();
    let mut reduction = vec![vec![Rat::zero(); dim]; monomials_desc.len()];
    let mut live_reduction: Vec<Vec<Rat>> = Vec::with_capacity(live.len());
    for p in 0..live.len() {
        let mut coords = vec![Rat::zero(); dim];
        if let Some(&slot) = basis_slot.get(&p) {
            coords[slot] = Rat::one();
        } else {
            let row = pivots.iter().position(|&c| c == p).expect("pivot row");
            for (l, v) in reduced[row].iter().enumerate() {
                if l == p || v.is_zero() {
                    continue;
                }
                let slot = basis_slot
                    .get(&l)
                    .expect("reduced rows only touch basis columns");
                coords[*slot] = -v.clone();
            }
        }
        live_reduction.push(coords);
    }
    for (pos, &i) in live.iter().enumerate() {
        reduction[i] = live_reduction[pos].clone();
    }

    GradedBasis {
        degree,
        monomials: monomials_desc,
        basis_monomials,
        reduction,
    }
}

/// The canonical (reduced row echelon) form of the full degree-d relation
/// row space of a presentation, over all degree-d monomials in descending
/// graded-lex order. Two presentations cut out the same ideal in this
/// degree iff these forms coincide.
pub fn relation_row_space(pres: &RingPresentation, degree: usize) -> Vec<Vec<Rat>> {
    let mut monomials = Monomial::all_of_degree(pres.num_vars, degree as u32);
    monomials.sort();
    monomials.reverse();
    let index_of: std::collections::HashMap<&Monomial, usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut rows = Vec::new();
    for gen in pres.generators() {
        let gen_degree = gen.total_degree() as usize;
        if gen_degree > degree || gen.is_zero() {
            continue;
        }
        for multiplier in Monomial::all_of_degree(pres.num_vars, (degree - gen_degree) as u32) {
            let mut row = vec![Rat::zero(); monomials.len()];
            for (m, c) in gen.terms() {
                row[index_of[&multiplier.mul(m)]] += c.clone();
            }
            rows.push(row);
        }
    }
    rref(&mut rows);
    rows
}

/// An element of the quotient ring, written in the reduced monomial basis
/// of its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingClass {
    pub degree: usize,
    pub coefficients: Vec<Rat>,
}

impl RingClass {
    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &RingClass) -> RingClass {
        debug_assert_eq!(self.degree, other.degree);
        RingClass {
            degree: self.degree,
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> RingClass {
        RingClass {
            degree: self.degree,
            coefficients: self.coefficients.iter().map(|a| a * c).collect(),
        }
    }
}

/// The cohomology ring of a smooth complete fan: a presentation together
/// with the normal-form data of every degree up to the rank, the point
/// class, and the degree map.
#[derive(Debug, Clone)]
pub struct CohomologyRing {
    presentation: RingPresentation,
    bases: Vec<GradedBasis>,
    maximal_cone_monomials: Vec<Monomial>,
    point_coefficient: Rat,
}

impl CohomologyRing {
    /// Build the ring of a validated smooth complete fan.
    pub fn new(fan: &Fan) -> Result<CohomologyRing> {
        let report = fan.validate();
        if !report.is_valid {
            return Err(Error::InvalidFan(report.violations.join("; ")));
        }
        if !report.is_smooth || !report.is_complete {
            return Err(Error::InvalidFan(
                "cohomology presentations require a smooth complete fan".into(),
            ));
        }
        Self::build(RingPresentation::from_fan(fan), fan.maximal_cones())
    }

    fn build(presentation: RingPresentation, maximal_cones: &[Cone]) -> Result<CohomologyRing> {
        let bases: Vec<GradedBasis> = (0..=presentation.top_degree)
            .map(|d| {
                graded_basis(
                    presentation.num_vars,
                    &presentation.sr_monomials,
                    &presentation.linear_forms,
                    d,
                )
            })
            .collect();
        let maximal_cone_monomials: Vec<Monomial> = maximal_cones
            .iter()
            .map(|c| Monomial::squarefree(presentation.num_vars, c.ray_indices()))
            .collect();
        let top = &bases[presentation.top_degree];
        if top.dimension() != 1 {
            return Err(Error::InvalidFan(format!(
                "top graded piece has dimension {}, expected 1",
                top.dimension()
            )));
        }
        // The point class: reduced image of the lexicographically first
        // maximal cone's monomial. Smooth completeness makes every maximal
        // cone give the same class; `point_class_is_consistent` checks it.
        let first = maximal_cone_monomials
            .iter()
            .min()
            .ok_or_else(|| Error::InvalidFan("fan has no maximal cones".into()))?;
        let idx = top
            .monomials
            .iter()
            .position(|m| m == first)
            .expect("maximal cone monomial has top degree");
        let point_coefficient = top.reduction[idx][0].clone();
        if point_coefficient.is_zero() {
            return Err(Error::InvalidFan(
                "point class reduces to zero; fan cannot be smooth and complete".into(),
            ));
        }
        Ok(CohomologyRing {
            presentation,
            bases,
            maximal_cone_monomials,
            point_coefficient,
        })
    }

    pub fn presentation(&self) -> &RingPresentation {
        &self.presentation
    }

    pub fn top_degree(&self) -> usize {
        self.presentation.top_degree
    }

    pub fn basis(&self, degree: usize) -> Option<&GradedBasis> {
        self.bases.get(degree)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.bases.iter().map(GradedBasis::dimension).collect()
    }

    pub fn unit(&self) -> RingClass {
        RingClass {
            degree: 0,
            coefficients: vec![Rat::one()],
        }
    }

    /// Reduce a homogeneous polynomial of the given degree.
    pub fn reduce(&self, p: &Polynomial, degree: usize) -> RingClass {
        if degree > self.top_degree() {
            return RingClass {
                degree,
                coefficients: vec![],
            };
        }
        let basis = &self.bases[degree];
        let mut coefficients = vec![Rat::zero(); basis.dimension()];
        for (m, c) in p.terms() {
            debug_assert_eq!(m.degree() as usize, degree);
            let idx = basis
                .monomials
                .iter()
                .position(|b| b == m)
                .expect("monomial of matching degree");
            for (acc, r) in coefficients.iter_mut().zip(&basis.reduction[idx]) {
                if !r.is_zero() {
                    *acc += c * r;
                }
            }
        }
        RingClass {
            degree,
            coefficients,
        }
    }

    /// The degree-1 class of a divisor: sum of coefficients times ray
    /// classes. No convexity is required; this is the fully algebraic side.
    pub fn divisor_class(&self, divisor: &Divisor) -> RingClass {
        let p = Polynomial::linear_form(divisor.coefficients());
        self.reduce(&p, 1)
    }

    pub fn ray_class(&self, index: usize) -> RingClass {
        let p = Polynomial::monomial(
            self.presentation.num_vars,
            Monomial::variable(self.presentation.num_vars, index),
            Rat::one(),
        );
        self.reduce(&p, 1)
    }

    /// A representative polynomial of a class (the combination of its basis
    /// monomials).
    pub fn representative(&self, class: &RingClass) -> Polynomial {
        let mut p = Polynomial::zero(self.presentation.num_vars);
        if class.degree > self.top_degree() {
            return p;
        }
        let basis = &self.bases[class.degree];
        for (m, c) in basis.basis_monomials.iter().zip(&class.coefficients) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    /// Ring multiplication via representatives and reduction. Products past
    /// the top degree are zero.
    pub fn multiply(&self, a: &RingClass, b: &RingClass) -> RingClass {
        let degree = a.degree + b.degree;
        if degree > self.top_degree() {
            return RingClass {
                degree,
                coefficients: vec![],
            };
        }
        let product = self.representative(a).mul(&self.representative(b));
        self.reduce(&product, degree)
    }

    pub fn power(&self, a: &RingClass, exponent: usize) -> RingClass {
        let mut acc = self.unit();
        for _ in 0..exponent {
            acc = self.multiply(&acc, a);
        }
        acc
    }

    /// The point class: reduced image of a maximal cone's squarefree
    /// monomial, the top class of degree 1.
    pub fn point_class(&self) -> RingClass {
        RingClass {
            degree: self.top_degree(),
            coefficients: vec![self.point_coefficient.clone()],
        }
    }

    /// Degree of a top-dimensional class relative to the point class.
    pub fn degree_of_top_class(&self, class: &RingClass) -> Result<Rat> {
        if class.degree != self.top_degree() {
            return Err(Error::Malformed(format!(
                "degree map needs a class of top degree {}, got degree {}",
                self.top_degree(),
                class.degree
            )));
        }
        Ok(&class.coefficients[0] / &self.point_coefficient)
    }

    /// All maximal cone monomials reduce to the same top class.
    pub fn point_class_is_consistent(&self) -> bool {
        let top = self.top_degree();
        let expected = self.point_class();
        self.maximal_cone_monomials.iter().all(|m| {
            let p = Polynomial::monomial(self.presentation.num_vars, m.clone(), Rat::one());
            self.reduce(&p, top) == expected
        })
    }

    /// Graded parts of the total Chern class: the degree-d component of the
    /// product over rays of (1 + ray class).
    pub fn total_chern(&self) -> Vec<RingClass> {
        let num_rays = self.presentation.num_vars;
        (0..=self.top_degree())
            .map(|d| {
                let mut acc = RingClass {
                    degree: d,
                    coefficients: vec![Rat::zero(); self.bases[d].dimension()],
                };
                for support in subsets_of_size(num_rays, d) {
                    let m = Monomial::squarefree(num_rays, &support);
                    let p = Polynomial::monomial(num_rays, m, Rat::one());
                    acc = acc.add(&self.reduce(&p, d));
                }
                acc
            })
            .collect()
    }

    /// Degree of the top Chern class; equals the number of maximal cones.
    pub fn euler_characteristic(&self) -> Result<Int> {
        let chern = self.total_chern();
        let degree = self.degree_of_top_class(&chern[self.top_degree()])?;
        debug_assert!(degree.is_integer());
        Ok(degree.to_integer())
    }
}

/// Betti numbers (dimensions of the graded pieces) of the cohomology of a
/// smooth complete fan.
pub fn betti_numbers(fan: &Fan) -> Result<Vec<usize>> {
    Ok(CohomologyRing::new(fan)?.betti_numbers())
}

/// The h-vector of a complete simplicial fan: coefficients of
/// sum_i f_{i-1} (t-1)^{rank-i}, an independent combinatorial route to the
/// Betti numbers.
pub fn h_vector(fan: &Fan) -> Vec<usize> {
    let rank = fan.rank();
    let f = fan.enumerate_faces().f_vector;
    let mut coeffs = vec![Int::zero(); rank + 1]; // coeffs[j] = coefficient of t^j
    for (i, &count) in f.iter().enumerate() {
        let p = rank - i; // (t-1)^p
        for j in 0..=p {
            let sign = if (p - j) % 2 == 0 { 1 } else { -1 };
            coeffs[j] += Int::from(count as i64)
                * linalg::binomial(p, j)
                * Int::from(sign);
        }
    }
    (0..=rank)
        .map(|i| {
            let c = &coeffs[rank - i];
            debug_assert!(!c.is_negative());
            usize::try_from(u64::try_from(c.clone()).expect("desk-scale h-vector"))
                .expect("fits usize")
        })
        .collect()
}

/// Intersection number of rank-many divisors: reduce the product of their
/// degree-1 classes and apply the degree map.
pub fn intersection_number(fan: &Fan, divisors: &[Divisor]) -> Result<Rat> {
    let ring = CohomologyRing::new(fan)?;
    intersection_number_in(&ring, divisors)
}

/// As `intersection_number` but over an already-built ring.
pub fn intersection_number_in(ring: &CohomologyRing, divisors: &[Divisor]) -> Result<Rat> {
    if divisors.len() != ring.top_degree() {
        return Err(Error::WrongDivisorCount {
            expected: ring.top_degree(),
            got: divisors.len(),
        });
    }
    let mut acc = ring.unit();
    for d in divisors {
        acc = ring.multiply(&acc, &ring.divisor_class(d));
    }
    ring.degree_of_top_class(&acc)
}

/// Degree of the top Chern class, which equals the number of maximal cones.
pub fn euler_characteristic(fan: &Fan) -> Result<Int> {
    CohomologyRing::new(fan)?.euler_characteristic()
}

/// The fibered presentation of a twisted product: fiber variables first
/// (one per fiber ray), then base variables, with the non-face ideals of
/// both factors, the base character forms, and the twisted fiber character
/// forms sum_j <phi(f_j), lambda> y_j + sum_i <e_i, lambda> x_i.
pub fn fibered_presentation(data: &TwistData) -> RingPresentation {
    let fiber = data.fiber();
    let base = data.base();
    let r = fiber.rays().len();
    let s = base.rays().len();
    let num_vars = r + s;

    let mut sr_monomials = Vec::new();
    for m in sr_ideal(fiber) {
        let mut e = vec![0u32; num_vars];
        e[..r].copy_from_slice(&m.0);
        sr_monomials.push(Monomial(e));
    }
    for m in sr_ideal(base) {
        let mut e = vec![0u32; num_vars];
        e[r..].copy_from_slice(&m.0);
        sr_monomials.push(Monomial(e));
    }

    let mut linear_forms = Vec::new();
    // Base characters act on base variables only.
    for c in 0..base.rank() {
        let mut coeffs = vec![Rat::zero(); num_vars];
        for j in 0..s {
            coeffs[r + j] = Rat::from_integer(base.ray(j).0[c].clone());
        }
        linear_forms.push(Polynomial::linear_form(&coeffs));
    }
    // Fiber characters pick up the twisting data on base variables.
    for c in 0..fiber.rank() {
        let mut coeffs = vec![Rat::zero(); num_vars];
        for i in 0..r {
            coeffs[i] = Rat::from_integer(fiber.ray(i).0[c].clone());
        }
        for (j, phi_f) in data.phi().values().iter().enumerate() {
            coeffs[r + j] = Rat::from_integer(phi_f.0[c].clone());
        }
        linear_forms.push(Polynomial::linear_form(&coeffs));
    }

    RingPresentation {
        num_vars,
        sr_monomials,
        linear_forms,
        top_degree: base.rank() + fiber.rank(),
    }
}

/// Verify that the fibered presentation and the full presentation of the
/// twisted product cut out the same relations in every degree up to the
/// rank, by comparing canonical row-space forms.
pub fn check_fibered_presentation(data: &TwistData) -> bool {
    let twisted = data.twisted_product();
    let direct = RingPresentation::from_fan(&twisted);
    let fibered = fibered_presentation(data);
    if direct.num_vars != fibered.num_vars {
        return false;
    }
    for degree in 0..=twisted.rank() {
        if relation_row_space(&direct, degree) != relation_row_space(&fibered, degree) {
            return false;
        }
    }
    true
}
