//! Shared fixtures for the benchmark targets.

use quadric_axes::conjugate::{random_rotated_system, ConjugateSystem, Ellipsoid};

pub fn ell321() -> Ellipsoid {
    Ellipsoid::new(vec![3.0, 2.0, 1.0]).unwrap()
}

pub fn rotated_systems(count: usize) -> Vec<ConjugateSystem> {
    let ell = ell321();
    (0..count)
        .map(|i| random_rotated_system(&ell, i as u64).0)
        .collect()
}
