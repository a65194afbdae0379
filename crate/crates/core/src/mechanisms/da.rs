//! Student-proposing deferred acceptance and the choice-rank family built on
//! it (Boston, application-rejection).

use std::collections::VecDeque;

use super::trace::{Trace, TraceEvent};
use crate::model::{Problem, SchoolId, Seat, StudentId};

/// Deferred acceptance for the students with `Some` list, against the
/// given capacities. A school with capacity 0 rejects everyone.
pub(crate) fn deferred_acceptance(
    p: &Problem,
    lists: &[Option<&[SchoolId]>],
    caps: &[usize],
    trace: &mut Trace,
) -> Vec<Seat> {
    let mut held: Vec<Vec<StudentId>> = vec![Vec::new(); p.num_schools()];
    let mut next = vec![0usize; p.num_students()];
    let mut queue: VecDeque<StudentId> = p.students().filter(|i| lists[i.0].is_some()).collect();

    while let Some(i) = queue.pop_front() {
        let list = lists[i.0].unwrap_or(&[]);
        let Some(&s) = list.get(next[i.0]) else { continue };
        next[i.0] += 1;
        trace.record(|| TraceEvent::Propose { student: i, school: s });
        let cap = caps[s.0];
        let prio = p.priority(s);
        let roster = &mut held[s.0];
        if roster.len() < cap {
            roster.push(i);
            continue;
        }
        let worst = roster
            .iter()
            .enumerate()
            .max_by_key(|(_, j)| prio.rank(**j))
            .map(|(pos, &j)| (pos, j));
        match worst {
            Some((pos, j)) if prio.outranks(i, j) => {
                roster[pos] = i;
                trace.record(|| TraceEvent::Reject { student: j, school: s });
                queue.push_back(j);
            }
            _ => {
                trace.record(|| TraceEvent::Reject { student: i, school: s });
                queue.push_back(i);
            }
        }
    }

    let mut seats = vec![None; p.num_students()];
    for (s, roster) in held.iter().enumerate() {
        for j in roster {
            seats[j.0] = Some(SchoolId(s));
        }
    }
    seats
}

pub(crate) fn sosm(p: &Problem, trace: &mut Trace) -> Vec<Seat> {
    let lists: Vec<_> = p.preferences().iter().map(|l| Some(l.schools())).collect();
    deferred_acceptance(p, &lists, p.capacities(), trace)
}

/// Immediate acceptance: in round `t` every unassigned student applies to
/// her `t`-th choice, and schools admit applicants for good in priority
/// order while seats last.
pub(crate) fn boston(p: &Problem, trace: &mut Trace) -> Vec<Seat> {
    let mut caps = p.capacities().to_vec();
    let mut seats: Vec<Seat> = vec![None; p.num_students()];
    let longest = p.preferences().iter().map(|l| l.len()).max().unwrap_or(0);
    for t in 0..longest {
        trace.record(|| TraceEvent::Round(t + 1));
        for s in p.schools() {
            for &i in p.priority(s).order() {
                if caps[s.0] == 0 {
                    break;
                }
                if seats[i.0].is_none() && p.preference(i).schools().get(t) == Some(&s) {
                    seats[i.0] = Some(s);
                    caps[s.0] -= 1;
                    trace.record(|| TraceEvent::Admit { student: i, school: s });
                }
            }
        }
    }
    seats
}

/// Application-rejection with period `e`: round `t` runs deferred
/// acceptance on each unassigned student's choices `(t-1)e+1 ..= te`, and
/// whoever holds a seat at the end of the round keeps it. A final segment
/// shorter than `e` is used as is.
pub(crate) fn application_rejection(p: &Problem, e: usize, trace: &mut Trace) -> Vec<Seat> {
    assert!(e >= 1);
    let mut caps = p.capacities().to_vec();
    let mut seats: Vec<Seat> = vec![None; p.num_students()];
    for t in 0.. {
        let lo = t * e;
        let lists: Vec<Option<&[SchoolId]>> = p
            .students()
            .map(|i| {
                let list = p.preference(i).schools();
                (seats[i.0].is_none() && list.len() > lo).then(|| &list[lo..list.len().min(lo + e)])
            })
            .collect();
        if lists.iter().all(Option::is_none) {
            break;
        }
        trace.record(|| TraceEvent::Round(t + 1));
        let round = deferred_acceptance(p, &lists, &caps, trace);
        for i in p.students() {
            if let Some(s) = round[i.0] {
                seats[i.0] = Some(s);
                caps[s.0] -= 1;
                trace.record(|| TraceEvent::Admit { student: i, school: s });
            }
        }
    }
    seats
}
