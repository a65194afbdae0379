//! Top-top consistency: removing a seated top-top pair must not move
//! anybody else.

use crate::mechanisms::{top_top_pairs, MechanismKind};
use crate::model::{Problem, SchoolId, StudentId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopTopViolation {
    pub pair: (StudentId, SchoolId),
    pub student: String,
    pub full: Option<String>,
    pub reduced: Option<String>,
}

/// Students whose seat differs between `p` and the problem with a seated
/// top-top pair removed. Seats are compared by name because the reduction
/// reindexes students and schools.
pub fn top_top_violations(kind: MechanismKind, p: &Problem) -> Vec<TopTopViolation> {
    let full = kind.seats(p);
    let mut out = Vec::new();
    for (i, s) in top_top_pairs(p) {
        if full[i.0] != Some(s) {
            continue;
        }
        let q = p.reduce(i, s).expect("pair comes from the problem");
        let reduced = kind.seats(&q);
        for j in q.students() {
            let name = q.student_name(j);
            let before = p.seat_name(full[p.student_id(name).expect("same students").0]);
            let after = q.seat_name(reduced[j.0]);
            if before != after {
                out.push(TopTopViolation {
                    pair: (i, s),
                    student: name.to_string(),
                    full: before.map(str::to_string),
                    reduced: after.map(str::to_string),
                });
            }
        }
    }
    out
}

/// `(corpus index, violation)` for every problem of the corpus.
pub fn audit_top_top_consistency(kind: MechanismKind, corpus: &[Problem]) -> Vec<(usize, TopTopViolation)> {
    corpus
        .iter()
        .enumerate()
        .flat_map(|(idx, p)| top_top_violations(kind, p).into_iter().map(move |v| (idx, v)))
        .collect()
}
