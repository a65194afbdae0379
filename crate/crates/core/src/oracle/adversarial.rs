//! Counterpart profiles that keep a student out of a school set which is
//! not high-priority for her.

use crate::error::{Error, Result};
use crate::mechanisms::find_cycles;
use crate::model::{Preference, Problem, SchoolId, Seat, StudentId};
use crate::priority_sets::{construct_saturating_comprehensive, is_high_priority_set};

/// A full profile in which `i` submits `pref_i` and no incontestable,
/// top-top consistent mechanism seats her inside `set`.
///
/// Starts from a saturating comprehensive assignment for `set`, then
/// reshuffles its occupants with a pointing procedure where schools point
/// to their best remaining student, students point to their current seat,
/// and each student takes the school pointing at her. Every reshuffled
/// occupant then submits only her new school; everyone else submits
/// nothing.
pub fn adversarial_profile(frame: &Problem, i: StudentId, pref_i: &Preference, set: &[SchoolId]) -> Result<Vec<Preference>> {
    if is_high_priority_set(frame, i, set)? {
        return Err(Error::IsHighPrioritySet(frame.student_name(i).to_string()));
    }
    let mu0 = construct_saturating_comprehensive(frame, i, set)?;
    let mu1 = restricted_pointing(frame, mu0.seats());

    let mut profile = vec![Preference::empty(); frame.num_students()];
    for j in frame.students() {
        if j == i {
            profile[j.0] = pref_i.clone();
        } else if let Some(s) = mu1[j.0] {
            profile[j.0] = Preference::new(vec![s]);
        }
    }
    Ok(profile)
}

/// Reassigns the seated students of `mu0` so each one holds a school that
/// pointed at her.
fn restricted_pointing(p: &Problem, mu0: &[Seat]) -> Vec<Seat> {
    let n = p.num_students();
    let mut remaining = vec![true; n];
    let mut mu1 = vec![None; n];
    loop {
        let next: Vec<Option<StudentId>> = (0..n)
            .map(|j| {
                if !remaining[j] {
                    return None;
                }
                let s = mu0[j]?;
                p.priority(s).order().iter().copied().find(|k| remaining[k.0])
            })
            .collect();
        let cycles = find_cycles(&next);
        if cycles.is_empty() {
            break;
        }
        for cycle in cycles {
            for &j in &cycle {
                let k = next[j.0].expect("cycle member points somewhere");
                mu1[k.0] = mu0[j.0];
            }
            for &j in &cycle {
                remaining[j.0] = false;
            }
        }
    }
    mu1
}
