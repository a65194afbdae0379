//! Safe, maxmin and dominant strategies under list caps.

use super::attainable::OutcomeTable;
use super::strategy::Budget;
use crate::error::{Error, Result};
use crate::mechanisms::{MechanismKind, MechanismSpec};
use crate::model::{Preference, Priority, Problem, SchoolId, Seat, StudentId};
use crate::priority_sets::is_high_priority_set;

impl OutcomeTable {
    /// Rows that secure a school seat against every counterpart profile.
    pub fn safe_rows(&self) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&r| self.seats[r].iter().all(Option::is_some))
            .collect()
    }

    /// Rows that are weakly best under `true_pref` against every
    /// counterpart profile.
    pub fn dominant_rows(&self, true_pref: &Preference) -> Vec<usize> {
        let best: Vec<usize> = (0..self.num_cols())
            .map(|c| {
                self.seats
                    .iter()
                    .map(|row| true_pref.seat_rank(row[c]))
                    .min()
                    .unwrap_or(usize::MAX)
            })
            .collect();
        (0..self.rows.len())
            .filter(|&r| self.seats[r].iter().zip(&best).all(|(&seat, &b)| true_pref.seat_rank(seat) == b))
            .collect()
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::PreconditionViolated("list cap must be at least 1".into()));
    }
    Ok(())
}

/// A safe strategy under the `k`-capped message space exists exactly when
/// some school set of size at most `k` is high-priority. Returns the first
/// such set by size then index order, listed as a strategy.
pub fn has_safe_strategy(frame: &Problem, i: StudentId, k: usize) -> Result<Option<Preference>> {
    check_k(k)?;
    frame.check_student(i)?;
    let m = frame.num_schools();
    for size in 1..=k.min(m) {
        let mut found = None;
        for_each_subset(m, size, &mut |set| {
            if found.is_none() && is_high_priority_set(frame, i, set).unwrap_or(false) {
                found = Some(set.to_vec());
            }
        });
        if let Some(set) = found {
            return Ok(Some(Preference::new(set)));
        }
    }
    Ok(None)
}

fn for_each_subset(m: usize, size: usize, visit: &mut impl FnMut(&[SchoolId])) {
    fn rec(start: usize, m: usize, size: usize, cur: &mut Vec<SchoolId>, visit: &mut impl FnMut(&[SchoolId])) {
        if cur.len() == size {
            visit(cur);
            return;
        }
        for s in start..m {
            cur.push(SchoolId(s));
            rec(s + 1, m, size, cur, visit);
            cur.pop();
        }
    }
    rec(0, m, size, &mut Vec::new(), visit);
}

/// Every safe strategy under the capped mechanism, by enumeration.
pub fn safe_strategies_brute(kind: MechanismKind, frame: &Problem, i: StudentId, k: usize, budget: Budget) -> Result<Vec<Preference>> {
    check_k(k)?;
    let table = OutcomeTable::full(kind, frame, i, Some(k), budget)?;
    Ok(table.safe_rows().into_iter().map(|r| table.rows[r].clone()).collect())
}

/// The student's worst seat, ranked by `true_pref`, when she submits
/// `submitted` and counterparts range over the spec's message space.
pub fn maxmin_worst(
    spec: &MechanismSpec,
    frame: &Problem,
    i: StudentId,
    submitted: &Preference,
    true_pref: &Preference,
    budget: Budget,
) -> Result<Seat> {
    let table = OutcomeTable::build(spec.kind, frame, i, vec![submitted.clone()], spec.list_cap, budget)?;
    Ok(table.worst(0, true_pref))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxminReport {
    pub truthful: Preference,
    pub truthful_worst: Seat,
    /// Strategies whose worst seat beats the truthful one.
    pub violations: Vec<(Preference, Seat)>,
}

impl MaxminReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares the worst seat of truthful reporting against every alternative
/// strategy. Under a cap the truthful strategy is the truncated list.
pub fn check_maxmin_optimal(
    spec: &MechanismSpec,
    frame: &Problem,
    i: StudentId,
    true_pref: &Preference,
    budget: Budget,
) -> Result<MaxminReport> {
    let table = OutcomeTable::full(spec.kind, frame, i, spec.list_cap, budget)?;
    let truthful = true_pref.truncate(spec.list_cap.unwrap_or(usize::MAX));
    let t = table.row_of(&truthful).expect("truncated list is in the space");
    let truthful_worst = table.worst(t, true_pref);
    let violations = (0..table.rows.len())
        .filter_map(|r| {
            let w = table.worst(r, true_pref);
            true_pref.prefers(w, truthful_worst).then(|| (table.rows[r].clone(), w))
        })
        .collect();
    Ok(MaxminReport {
        truthful,
        truthful_worst,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantVerdict {
    pub dominant: bool,
    pub canonical: Option<Preference>,
}

fn check_strategyproof(kind: MechanismKind) -> Result<()> {
    match kind {
        MechanismKind::Sosm | MechanismKind::Ttc | MechanismKind::Ct | MechanismKind::Fct => Ok(()),
        other => Err(Error::PreconditionViolated(format!(
            "{} is not strategy-proof without a list cap",
            other.name()
        ))),
    }
}

/// Under a cap `k`, a strategy-proof mechanism leaves the student a
/// dominant strategy iff she finds at most `k` schools acceptable or her
/// `k` favourites form a high-priority set. The truncation is then
/// dominant.
pub fn has_dominant_strategy(
    kind: MechanismKind,
    frame: &Problem,
    i: StudentId,
    true_pref: &Preference,
    k: usize,
) -> Result<DominantVerdict> {
    check_strategyproof(kind)?;
    check_k(k)?;
    frame.check_student(i)?;
    let dominant = true_pref.len() <= k || is_high_priority_set(frame, i, true_pref.truncate(k).schools())?;
    Ok(DominantVerdict {
        dominant,
        canonical: dominant.then(|| true_pref.truncate(k)),
    })
}

/// Every weakly dominant strategy under the capped mechanism, by
/// enumeration of all strategy pairs and counterpart profiles.
pub fn dominant_strategies_brute(
    kind: MechanismKind,
    frame: &Problem,
    i: StudentId,
    true_pref: &Preference,
    k: usize,
    budget: Budget,
) -> Result<Vec<Preference>> {
    check_strategyproof(kind)?;
    check_k(k)?;
    let table = OutcomeTable::full(kind, frame, i, Some(k), budget)?;
    Ok(table
        .dominant_rows(true_pref)
        .into_iter()
        .map(|r| table.rows[r].clone())
        .collect())
}

/// `k` unit-capacity schools sharing one priority order; the last student
/// lists all of them. She has a dominant strategy at cap `k` but none at
/// cap `k - 1`.
pub fn strictness_witness(k: usize) -> (Problem, StudentId) {
    let students = (1..=k).map(|n| format!("i{n}")).collect();
    let schools = (1..=k).map(|n| format!("s{n}")).collect();
    let full = Preference::new((0..k).map(SchoolId).collect());
    let order: Vec<StudentId> = (0..k).map(StudentId).collect();
    let p = Problem::from_parts(
        students,
        schools,
        vec![full; k],
        vec![Priority::new(order); k],
        vec![1; k],
    );
    (p, StudentId(k - 1))
}
