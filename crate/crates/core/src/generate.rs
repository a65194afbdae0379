//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{Preference, Priority, Problem, SchoolId, StudentId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub students: usize,
    pub schools: usize,
    pub max_capacity: usize,
}

impl GenConfig {
    pub fn new(students: usize, schools: usize) -> Self {
        GenConfig {
            students,
            schools,
            max_capacity: 1,
        }
    }

    pub fn max_capacity(mut self, cap: usize) -> Self {
        self.max_capacity = cap.max(1);
        self
    }
}

/// Uniform priorities, uniform capacities in `1..=max_capacity`, and
/// preference lists whose length is uniform in `0..=schools`.
pub fn random_problem<R: Rng + ?Sized>(rng: &mut R, cfg: GenConfig) -> Problem {
    let students: Vec<String> = (1..=cfg.students).map(|n| format!("i{n}")).collect();
    let schools: Vec<String> = (1..=cfg.schools).map(|n| format!("s{n}")).collect();
    let capacities = (0..cfg.schools)
        .map(|_| rng.gen_range(1..=cfg.max_capacity))
        .collect();
    let priorities = (0..cfg.schools)
        .map(|_| {
            let mut order: Vec<StudentId> = (0..cfg.students).map(StudentId).collect();
            order.shuffle(rng);
            Priority::new(order)
        })
        .collect();
    let preferences = (0..cfg.students)
        .map(|_| {
            let mut list: Vec<SchoolId> = (0..cfg.schools).map(SchoolId).collect();
            list.shuffle(rng);
            list.truncate(rng.gen_range(0..=cfg.schools));
            Preference::new(list)
        })
        .collect();
    Problem::from_parts(students, schools, preferences, priorities, capacities)
}

pub fn seeded_problem(seed: u64, cfg: GenConfig) -> Problem {
    random_problem(&mut ChaCha8Rng::seed_from_u64(seed), cfg)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
