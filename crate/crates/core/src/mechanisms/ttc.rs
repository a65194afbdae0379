//! Top trading cycles and the clinch-and-trade variants.

use super::trace::{Trace, TraceEvent};
use crate::model::{Problem, SchoolId, Seat, StudentId};

/// Residual state shared by the trading mechanisms.
pub(crate) struct Residual<'a> {
    pub p: &'a Problem,
    pub caps: Vec<usize>,
    /// `None` while the student is still in the market.
    pub decided: Vec<Option<Seat>>,
}

impl<'a> Residual<'a> {
    pub fn new(p: &'a Problem) -> Self {
        Residual {
            p,
            caps: p.capacities().to_vec(),
            decided: vec![None; p.num_students()],
        }
    }

    pub fn is_active(&self, i: StudentId) -> bool {
        self.decided[i.0].is_none()
    }

    pub fn active(&self) -> impl Iterator<Item = StudentId> + '_ {
        self.p.students().filter(|&i| self.is_active(i))
    }

    /// Best acceptable school that still has a seat.
    pub fn top(&self, i: StudentId) -> Option<SchoolId> {
        self.p
            .preference(i)
            .schools()
            .iter()
            .copied()
            .find(|s| self.caps[s.0] > 0)
    }

    /// Sends students with nothing left to want home unassigned.
    pub fn drop_exhausted(&mut self, trace: &mut Trace) {
        for i in self.p.students() {
            if self.is_active(i) && self.top(i).is_none() {
                self.decided[i.0] = Some(None);
                trace.record(|| TraceEvent::Settle { student: i, seat: None });
            }
        }
    }

    pub fn assign(&mut self, i: StudentId, s: SchoolId) {
        debug_assert!(self.caps[s.0] > 0);
        self.decided[i.0] = Some(Some(s));
        self.caps[s.0] -= 1;
    }

    /// Active students ranked above `i` at `s`.
    pub fn active_above(&self, i: StudentId, s: SchoolId) -> usize {
        self.p
            .priority(s)
            .above(i)
            .iter()
            .filter(|j| self.is_active(**j))
            .count()
    }

    pub fn highest_active(&self, s: SchoolId) -> Option<StudentId> {
        self.p.priority(s).order().iter().copied().find(|&j| self.is_active(j))
    }

    /// One trading pass: students point to their top school, schools to
    /// their highest-priority active student, and every cycle trades.
    /// Returns false when nobody is left to trade.
    pub fn trade_once(&mut self, trace: &mut Trace) -> bool {
        self.drop_exhausted(trace);
        let n = self.p.num_students();
        let mut target: Vec<Option<SchoolId>> = vec![None; n];
        let mut next: Vec<Option<StudentId>> = vec![None; n];
        for i in self.active() {
            let s = self.top(i).expect("exhausted students were dropped");
            target[i.0] = Some(s);
            next[i.0] = self.highest_active(s);
        }
        let cycles = find_cycles(&next);
        if cycles.is_empty() {
            return false;
        }
        for cycle in cycles {
            let members: Vec<_> = cycle.iter().map(|&i| (i, target[i.0].unwrap())).collect();
            for &(i, s) in &members {
                self.assign(i, s);
            }
            trace.record(|| TraceEvent::Cycle(members));
        }
        true
    }

    pub fn into_seats(self) -> Vec<Seat> {
        self.decided.into_iter().map(|d| d.flatten()).collect()
    }
}

/// All cycles of a partial functional graph, each rotated to start at its
/// smallest node, listed by that node.
pub(crate) fn find_cycles(next: &[Option<StudentId>]) -> Vec<Vec<StudentId>> {
    let n = next.len();
    // 0 = unseen, 1 = on the current walk, 2 = finished.
    let mut state = vec![0u8; n];
    let mut cycles = Vec::new();
    let mut path = Vec::new();
    for start in 0..n {
        if state[start] != 0 || next[start].is_none() {
            continue;
        }
        path.clear();
        let mut v = start;
        loop {
            state[v] = 1;
            path.push(v);
            match next[v] {
                Some(w) if state[w.0] == 0 => v = w.0,
                Some(w) if state[w.0] == 1 => {
                    let pos = path.iter().position(|&x| x == w.0).unwrap();
                    let mut cycle: Vec<StudentId> = path[pos..].iter().map(|&x| StudentId(x)).collect();
                    let min = (0..cycle.len()).min_by_key(|&k| cycle[k]).unwrap();
                    cycle.rotate_left(min);
                    cycles.push(cycle);
                    break;
                }
                _ => break,
            }
        }
        for &x in &path {
            state[x] = 2;
        }
    }
    cycles.sort();
    cycles
}

pub(crate) fn ttc(p: &Problem, trace: &mut Trace) -> Vec<Seat> {
    let mut r = Residual::new(p);
    let mut round = 0;
    loop {
        round += 1;
        trace.record(|| TraceEvent::Round(round));
        if !r.trade_once(trace) {
            break;
        }
    }
    r.into_seats()
}

/// Clinch and trade: each round first lets students clinch their top
/// school while they are among its top remaining-capacity active students,
/// repeating until nobody can, then runs one trading pass.
pub(crate) fn clinch_and_trade(p: &Problem, trace: &mut Trace) -> Vec<Seat> {
    let mut r = Residual::new(p);
    let mut round = 0;
    loop {
        round += 1;
        trace.record(|| TraceEvent::Round(round));
        loop {
            r.drop_exhausted(trace);
            let mut clinched = false;
            for i in p.students() {
                if !r.is_active(i) {
                    continue;
                }
                let Some(s) = r.top(i) else { continue };
                if r.active_above(i, s) < r.caps[s.0] {
                    r.assign(i, s);
                    trace.record(|| TraceEvent::Clinch { student: i, school: s });
                    clinched = true;
                }
            }
            if !clinched {
                break;
            }
        }
        if !r.trade_once(trace) {
            break;
        }
    }
    r.into_seats()
}

/// First clinch and trade: clinching runs in simultaneous passes, each
/// judged on the state left by the previous pass, until nobody can clinch;
/// then one trading pass runs. The clinching fixed point does not depend on
/// the order students are visited in, so outcomes agree with
/// [`clinch_and_trade`].
pub(crate) fn first_clinch_and_trade(p: &Problem, trace: &mut Trace) -> Vec<Seat> {
    let mut r = Residual::new(p);
    let mut round = 0;
    loop {
        round += 1;
        trace.record(|| TraceEvent::Round(round));
        loop {
            r.drop_exhausted(trace);
            let clinchers: Vec<(StudentId, SchoolId)> = r
                .active()
                .filter_map(|i| {
                    let s = r.top(i)?;
                    (r.active_above(i, s) < r.caps[s.0]).then_some((i, s))
                })
                .collect();
            if clinchers.is_empty() {
                break;
            }
            for &(i, s) in &clinchers {
                r.assign(i, s);
                trace.record(|| TraceEvent::Clinch { student: i, school: s });
            }
        }
        if !r.trade_once(trace) {
            break;
        }
    }
    r.into_seats()
}
