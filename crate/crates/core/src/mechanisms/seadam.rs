//! Simplified efficiency-adjusted deferred acceptance, with every student
//! consenting to waive her priorities.

use super::da::deferred_acceptance;
use super::trace::{Trace, TraceEvent};
use crate::model::{Problem, SchoolId, Seat};

/// Each round runs deferred acceptance on the residual market. Students at
/// under-demanded schools (no one prefers them to her own seat) are settled
/// there and those schools leave the market. Students left unassigned are
/// settled too: staying home is never envied, and their departure is what
/// lets the remaining students trade away the rejections they caused.
/// When a round settles nobody and removes no school, its outcome is final.
pub(crate) fn seadam(p: &Problem, trace: &mut Trace) -> Vec<Seat> {
    let mut caps = p.capacities().to_vec();
    let mut open = vec![true; p.num_schools()];
    let mut settled: Vec<Option<Seat>> = vec![None; p.num_students()];
    let mut round = 0;
    while settled.iter().any(Option::is_none) {
        round += 1;
        trace.record(|| TraceEvent::Round(round));
        let lists: Vec<_> = p
            .students()
            .map(|i| settled[i.0].is_none().then(|| p.preference(i).schools()))
            .collect();
        let mu = deferred_acceptance(p, &lists, &caps, trace);
        let active: Vec<_> = p.students().filter(|i| settled[i.0].is_none()).collect();

        let mut demanded = vec![false; p.num_schools()];
        for &i in &active {
            for &s in p.preference(i).better_than(mu[i.0]) {
                demanded[s.0] = true;
            }
        }
        let under: Vec<SchoolId> = p.schools().filter(|s| open[s.0] && !demanded[s.0]).collect();

        let mut progress = !under.is_empty();
        for &i in &active {
            let settle = match mu[i.0] {
                None => true,
                Some(s) => !demanded[s.0],
            };
            if settle {
                settled[i.0] = Some(mu[i.0]);
                trace.record(|| TraceEvent::Settle { student: i, seat: mu[i.0] });
                progress = true;
            }
        }
        for s in under {
            open[s.0] = false;
            caps[s.0] = 0;
        }
        if !progress {
            for &i in &active {
                settled[i.0] = Some(mu[i.0]);
                trace.record(|| TraceEvent::Settle { student: i, seat: mu[i.0] });
            }
        }
    }
    settled.into_iter().map(Option::flatten).collect()
}
