//! Equitable top trading cycles.
//!
//! Seats are pre-assigned school by school to the highest-priority active
//! students, so a student may hold seats at several schools. Every
//! (holder, school) pair then points to a pair holding a seat at the
//! holder's favourite school, chosen by priority at the pair's own school.
//! All cycles trade at once; a student reached by several cycles keeps one
//! seat and the others return to the pool.

use super::trace::{Trace, TraceEvent};
use super::ttc::Residual;
use crate::model::{Problem, SchoolId, Seat, StudentId};

pub(crate) fn ettc(p: &Problem, trace: &mut Trace) -> Vec<Seat> {
    let mut r = Residual::new(p);
    let mut round = 0;
    loop {
        round += 1;
        trace.record(|| TraceEvent::Round(round));
        r.drop_exhausted(trace);
        if r.active().next().is_none() {
            break;
        }

        let mut holders: Vec<Vec<StudentId>> = vec![Vec::new(); p.num_schools()];
        let mut pairs: Vec<(StudentId, SchoolId)> = Vec::new();
        for s in p.schools() {
            let top = p
                .priority(s)
                .order()
                .iter()
                .copied()
                .filter(|&j| r.is_active(j))
                .take(r.caps[s.0]);
            holders[s.0].extend(top);
        }
        for i in r.active() {
            for s in p.schools() {
                if holders[s.0].contains(&i) {
                    pairs.push((i, s));
                }
            }
        }
        let index_of = |j: StudentId, s: SchoolId| pairs.iter().position(|&x| x == (j, s)).unwrap();

        // A student's pairs point to distinct holders while there are enough
        // of them, each pair preferring the holder ranked highest at its own
        // school.
        let mut points = vec![0usize; pairs.len()];
        let mut used: Vec<StudentId> = Vec::new();
        let mut owner = None;
        for (k, &(i, s)) in pairs.iter().enumerate() {
            if owner != Some(i) {
                owner = Some(i);
                used.clear();
            }
            let fav = r.top(i).expect("exhausted students were dropped");
            let mut candidates = holders[fav.0].clone();
            candidates.sort_by_key(|&j| p.priority(s).rank(j));
            let j = candidates
                .iter()
                .copied()
                .find(|j| !used.contains(j))
                .unwrap_or(candidates[0]);
            used.push(j);
            points[k] = index_of(j, fav);
        }

        let next: Vec<Option<StudentId>> = points.iter().map(|&t| Some(StudentId(t))).collect();
        let cycles = super::ttc::find_cycles(&next);
        let mut winners: Vec<(StudentId, SchoolId)> = Vec::new();
        for cycle in &cycles {
            let members: Vec<_> = cycle
                .iter()
                .map(|k| {
                    let (i, _) = pairs[k.0];
                    (i, pairs[points[k.0]].1)
                })
                .collect();
            for &m in &members {
                if !winners.contains(&m) {
                    winners.push(m);
                }
            }
            trace.record(|| TraceEvent::Cycle(members));
        }
        for (i, s) in winners {
            r.assign(i, s);
        }
    }
    r.into_seats()
}
