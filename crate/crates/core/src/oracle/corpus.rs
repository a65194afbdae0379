//! Fixed problem corpora for the exhaustive audits.

use rand::seq::SliceRandom;
use rand::Rng;

use super::strategy::{enumerate_profiles, Budget, StrategySpace};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::generate::{random_problem, rng, GenConfig};
use crate::model::{Preference, Priority, Problem, SchoolId, StudentId};
use crate::priority_sets::is_high_priority_set;

fn permutations(n: usize) -> Vec<Vec<StudentId>> {
    fn rec(cur: &mut Vec<StudentId>, used: &mut [bool], out: &mut Vec<Vec<StudentId>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                cur.push(StudentId(k));
                rec(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Twelve priority profiles for three students and two schools: `s1` ranks
/// either `i1 i2 i3` or the reverse, and `s2` takes every order.
pub fn priority_profiles_3x2() -> Vec<[Priority; 2]> {
    let forward: Vec<StudentId> = (0..3).map(StudentId).collect();
    let backward: Vec<StudentId> = forward.iter().rev().copied().collect();
    let mut out = Vec::new();
    for first in [forward, backward] {
        for second in permutations(3) {
            out.push([Priority::new(first.clone()), Priority::new(second)]);
        }
    }
    out
}

/// Every preference profile (125) over three students and two unit-capacity
/// schools, under each of the twelve priority profiles.
pub fn exhaustive_3x2() -> Vec<Problem> {
    let space = StrategySpace::unbounded(2);
    let lists = space.strategies();
    let mut out = Vec::with_capacity(12 * 125);
    for [r1, r2] in priority_profiles_3x2() {
        for a in lists {
            for b in lists {
                for c in lists {
                    out.push(Problem::from_parts(
                        vec!["i1".into(), "i2".into(), "i3".into()],
                        vec!["s1".into(), "s2".into()],
                        vec![a.clone(), b.clone(), c.clone()],
                        vec![r1.clone(), r2.clone()],
                        vec![1, 1],
                    ));
                }
            }
        }
    }
    out
}

/// The four fixtures plus `random` seeded frames with at most four students
/// and three schools.
pub fn desk_frames(random: usize, seed: u64) -> Vec<Problem> {
    let mut out: Vec<Problem> = fixtures::all().into_iter().map(|(_, p)| p).collect();
    let mut r = rng(seed);
    for _ in 0..random {
        let cfg = GenConfig::new(r.gen_range(2..=4), r.gen_range(2..=3)).max_capacity(2);
        out.push(random_problem(&mut r, cfg));
    }
    out
}

/// Seeded random problems with at most `max_students` students, three
/// schools and capacities up to two.
pub fn random_corpus(count: usize, max_students: usize, seed: u64) -> Vec<Problem> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let cfg = GenConfig::new(r.gen_range(2..=max_students.max(2)), r.gen_range(1..=3)).max_capacity(2);
            random_problem(&mut r, cfg)
        })
        .collect()
}

/// Every preference profile over `frames` seeded unit-capacity priority
/// frames. A frame whose profiles exceed the budget is sampled instead:
/// `samples` profiles drawn uniformly from the unbounded strategy space.
pub fn unit_frame_corpus(students: usize, schools: usize, frames: usize, samples: usize, seed: u64, budget: Budget) -> Result<Vec<Problem>> {
    let mut r = rng(seed);
    let cfg = GenConfig::new(students, schools);
    let space = StrategySpace::unbounded(schools);
    let mut corpus = Vec::new();
    for _ in 0..frames {
        let frame = random_problem(&mut r, cfg);
        match enumerate_profiles(&frame, &vec![None; students], None, budget) {
            Ok(stream) => corpus.extend(stream),
            Err(Error::BudgetExceeded { .. }) => {
                for _ in 0..samples {
                    let prefs = (0..students)
                        .map(|_| space.strategies()[r.gen_range(0..space.len())].clone())
                        .collect();
                    corpus.push(frame.with_preferences(prefs));
                }
            }
            Err(err) => return Err(err),
        }
    }
    Ok(corpus)
}

/// A student, her submitted list and a school set that is not
/// high-priority for her.
#[derive(Clone, Debug)]
pub struct AdversarialQuery {
    pub frame: Problem,
    pub student: StudentId,
    pub preference: Preference,
    pub set: Vec<SchoolId>,
}

/// `n` seeded queries on random frames with three to five students and two
/// to four schools.
pub fn adversarial_queries(n: usize, seed: u64) -> Vec<AdversarialQuery> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let cfg = GenConfig::new(r.gen_range(3..=5), r.gen_range(2..=4)).max_capacity(2);
        let frame = random_problem(&mut r, cfg);
        let student = StudentId(r.gen_range(0..cfg.students));
        let mut schools: Vec<SchoolId> = (0..cfg.schools).map(SchoolId).collect();
        schools.shuffle(&mut r);
        let size = r.gen_range(1..=cfg.schools);
        let set: Vec<SchoolId> = schools[..size].to_vec();
        schools.shuffle(&mut r);
        let preference = Preference::new(schools[..r.gen_range(0..=cfg.schools)].to_vec());
        if !is_high_priority_set(&frame, student, &set).expect("valid query") {
            out.push(AdversarialQuery {
                frame,
                student,
                preference,
                set,
            });
        }
    }
    out
}
