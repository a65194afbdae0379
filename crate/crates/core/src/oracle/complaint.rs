//! Legitimate complaints decided straight from their definition, and
//! stable-set enumeration.

use super::strategy::{for_each_completion, profile_count, Budget, StrategySpace};
use crate::error::Result;
use crate::model::{for_each_assignment, Assignment, ExPostInfo, Problem, SchoolId, Seat, StudentId};
use crate::properties::{is_stable_seats, EnumerationBound};

/// Seat vectors with `i` at `own_seat` and exactly `fill[s]` students at
/// every school `s`.
pub(crate) fn compatible_assignments(p: &Problem, i: StudentId, own_seat: Seat, fill: &[usize]) -> Vec<Vec<Seat>> {
    fn rec(
        idx: usize,
        focal: StudentId,
        need: &mut [usize],
        left: usize,
        seats: &mut Vec<Seat>,
        out: &mut Vec<Vec<Seat>>,
    ) {
        if idx == seats.len() {
            if left == 0 {
                out.push(seats.clone());
            }
            return;
        }
        if idx == focal.0 {
            rec(idx + 1, focal, need, left, seats, out);
            return;
        }
        let others_after = (idx + 1..seats.len()).filter(|&k| k != focal.0).count();
        if left > others_after + 1 {
            return;
        }
        if left <= others_after {
            seats[idx] = None;
            rec(idx + 1, focal, need, left, seats, out);
        }
        for s in 0..need.len() {
            if need[s] > 0 {
                need[s] -= 1;
                seats[idx] = Some(SchoolId(s));
                rec(idx + 1, focal, need, left - 1, seats, out);
                need[s] += 1;
            }
        }
        seats[idx] = None;
    }

    let mut need = fill.to_vec();
    if let Some(s) = own_seat {
        if need[s.0] == 0 {
            return Vec::new();
        }
        need[s.0] -= 1;
    }
    let left = need.iter().sum();
    let mut seats = vec![None; p.num_students()];
    seats[i.0] = own_seat;
    let mut out = Vec::new();
    rec(0, i, &mut need, left, &mut seats, &mut out);
    out
}

/// True iff no preference profile of the other students admits a stable
/// assignment that gives the student her seat and matches every school's
/// enrollment. Exhaustive over unbounded lists.
pub fn definitional_complaint(info: &ExPostInfo, budget: Budget) -> Result<bool> {
    let frame = info.interim.frame;
    let i = info.interim.student;
    let space = StrategySpace::unbounded(frame.num_schools());
    let free: Vec<StudentId> = frame.students().filter(|&j| j != i).collect();
    budget.check(profile_count(&space, free.len()))?;

    let candidates = compatible_assignments(frame, i, info.own_seat, &info.fill);
    if candidates.is_empty() {
        return Ok(true);
    }
    let mut p = frame.clone();
    p.set_preference(i, info.interim.preference.clone());
    let mut rationalized = false;
    for_each_completion(&mut p, &free, &space, |q| {
        if !rationalized {
            rationalized = candidates.iter().any(|seats| is_stable_seats(q, seats, &info.fill));
        }
    });
    Ok(!rationalized)
}

/// Every stable assignment, by exhaustive enumeration.
pub fn enumerate_stable(p: &Problem) -> Result<Vec<Assignment>> {
    enumerate_stable_within(p, EnumerationBound::default())
}

pub fn enumerate_stable_within(p: &Problem, bound: EnumerationBound) -> Result<Vec<Assignment>> {
    bound.check(p)?;
    let mut out = Vec::new();
    let mut fills = vec![0; p.num_schools()];
    for_each_assignment(p, |seats| {
        fills.iter_mut().for_each(|f| *f = 0);
        for s in seats.iter().flatten() {
            fills[s.0] += 1;
        }
        if is_stable_seats(p, seats, &fills) {
            out.push(Assignment::new(p.num_schools(), seats.to_vec()));
        }
    });
    Ok(out)
}
