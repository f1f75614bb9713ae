//! Shared fixtures for the integration suites.
#![allow(dead_code)] // each suite uses its own subset

use toric::cohomology::Divisor;
use toric::fan::{Cone, Fan, LatticeVector};
use toric::twist::{hirzebruch_twist, TwistData};

pub fn p1() -> Fan {
    Fan::new(
        1,
        vec![LatticeVector::from_i64(&[1]), LatticeVector::from_i64(&[-1])],
        vec![Cone::new(vec![0]), Cone::new(vec![1])],
    )
    .unwrap()
}

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

pub fn p1_x_p1() -> Fan {
    hirzebruch_twist(0).twisted_product()
}

pub fn hirzebruch_fan(a: i64) -> Fan {
    hirzebruch_twist(a).twisted_product()
}

/// Base P^1, fiber P^2, phi(-1) = 0 and phi(+1) as given.
pub fn rank3_twist(phi_positive: &[i64; 2]) -> TwistData {
    TwistData::new(
        p1_base(),
        p2(),
        vec![
            LatticeVector::from_i64(&[0, 0]),
            LatticeVector::from_i64(phi_positive),
        ],
    )
    .unwrap()
}

/// A degree-one divisor on the fiber projective line ([0,1] polytope:
/// coefficient on the negative ray).
pub fn fiber_o1_line(data: &TwistData) -> Divisor {
    Divisor::from_i64(data.fiber(), &[0, 1]).unwrap()
}

/// The standard degree-one divisor on the fiber projective plane.
pub fn fiber_o1_plane(data: &TwistData) -> Divisor {
    Divisor::from_i64(data.fiber(), &[0, 0, 1]).unwrap()
}

/// A base divisor of the given degree on the projective-line base.
pub fn base_divisor_of_degree(data: &TwistData, b: i64) -> Divisor {
    Divisor::from_i64(data.base(), &[0, b]).unwrap()
}
