//! The worked-example economies shipped in `fixtures/`.

use crate::model::{Assignment, Problem};

pub const T1_JSON: &str = include_str!("../../../fixtures/t1.json");
pub const T1_MU_STAR_JSON: &str = include_str!("../../../fixtures/t1_mu_star.json");
pub const T2_JSON: &str = include_str!("../../../fixtures/t2.json");
pub const T3_JSON: &str = include_str!("../../../fixtures/t3.json");
pub const T4_JSON: &str = include_str!("../../../fixtures/t4.json");

/// Four students, three unit schools; `i2` tops every priority list.
pub fn t1() -> Problem {
    Problem::from_json(T1_JSON).expect("t1 fixture is valid")
}

/// The incontestable assignment `i1→s3, i2→s1, i3→s2, i4→self` on [`t1`].
pub fn t1_mu_star() -> Assignment {
    Assignment::from_json(&t1(), T1_MU_STAR_JSON).expect("t1 assignment is valid")
}

/// Boston counterexample economy.
pub fn t2() -> Problem {
    Problem::from_json(T2_JSON).expect("t2 fixture is valid")
}

/// Application-Rejection counterexample economy.
pub fn t3() -> Problem {
    Problem::from_json(T3_JSON).expect("t3 fixture is valid")
}

/// Equitable TTC counterexample economy (`s3` has two seats).
pub fn t4() -> Problem {
    Problem::from_json(T4_JSON).expect("t4 fixture is valid")
}

pub fn all() -> Vec<(&'static str, Problem)> {
    vec![("t1", t1()), ("t2", t2()), ("t3", t3()), ("t4", t4())]
}
