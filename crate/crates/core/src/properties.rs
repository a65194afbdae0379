//! Stability and efficiency predicates, with witnesses.

use crate::error::{Error, Result};
use crate::model::{for_each_assignment, Assignment, Problem, SchoolId, Seat, StudentId};

/// Why an assignment fails stability. Empty lists and `individually_rational`
/// mean stable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StabilityReport {
    pub individually_rational: bool,
    pub wasteful_witnesses: Vec<(StudentId, SchoolId)>,
    pub envy_triples: Vec<(StudentId, StudentId, SchoolId)>,
}

impl StabilityReport {
    pub fn is_stable(&self) -> bool {
        self.individually_rational && self.wasteful_witnesses.is_empty() && self.envy_triples.is_empty()
    }

    pub fn to_json(&self, p: &Problem) -> serde_json::Value {
        serde_json::json!({
            "stable": self.is_stable(),
            "individually_rational": self.individually_rational,
            "wasteful": self.wasteful_witnesses.iter()
                .map(|&(i, s)| [p.student_name(i), p.school_name(s)])
                .collect::<Vec<_>>(),
            "justified_envy": self.envy_triples.iter()
                .map(|&(i, j, s)| [p.student_name(i), p.student_name(j), p.school_name(s)])
                .collect::<Vec<_>>(),
        })
    }
}

fn seated_acceptably(p: &Problem, a: &Assignment, i: StudentId) -> bool {
    a.seat(i).is_none_or(|s| p.preference(i).is_acceptable(s))
}

pub fn is_individually_rational(p: &Problem, a: &Assignment) -> Result<bool> {
    a.check(p)?;
    Ok(p.students().all(|i| seated_acceptably(p, a, i)))
}

/// Every `(i, s)` with a free seat at `s` and `s` preferred to `i`'s seat.
pub fn wasteful_witnesses(p: &Problem, a: &Assignment) -> Result<Vec<(StudentId, SchoolId)>> {
    a.check(p)?;
    Ok(raw_wasteful(p, a))
}

fn raw_wasteful(p: &Problem, a: &Assignment) -> Vec<(StudentId, SchoolId)> {
    let mut out = Vec::new();
    for i in p.students() {
        for &s in p.preference(i).better_than(a.seat(i)) {
            if a.fill(s) < p.capacity(s) {
                out.push((i, s));
            }
        }
    }
    out
}

pub fn is_non_wasteful(p: &Problem, a: &Assignment) -> Result<bool> {
    a.check(p)?;
    Ok(raw_wasteful(p, a).is_empty())
}

/// Triples `(i, j, s)`: `j` sits at `s`, `i` prefers `s` to her seat and
/// outranks `j` there.
pub fn justified_envy_triples(p: &Problem, a: &Assignment) -> Result<Vec<(StudentId, StudentId, SchoolId)>> {
    a.check(p)?;
    Ok(raw_envy(p, a))
}

fn raw_envy(p: &Problem, a: &Assignment) -> Vec<(StudentId, StudentId, SchoolId)> {
    let mut out = Vec::new();
    for i in p.students() {
        for &s in p.preference(i).better_than(a.seat(i)) {
            let prio = p.priority(s);
            for &j in a.roster(s) {
                if prio.outranks(i, j) {
                    out.push((i, j, s));
                }
            }
        }
    }
    out
}

pub fn stability_report(p: &Problem, a: &Assignment) -> Result<StabilityReport> {
    a.check(p)?;
    Ok(StabilityReport {
        individually_rational: p.students().all(|i| seated_acceptably(p, a, i)),
        wasteful_witnesses: raw_wasteful(p, a),
        envy_triples: raw_envy(p, a),
    })
}

pub fn is_stable(p: &Problem, a: &Assignment) -> Result<bool> {
    a.check(p)?;
    Ok(is_stable_seats(p, a.seats(), &a.fills()))
}

/// Allocation-free stability test over a raw seat vector and its fills.
/// The caller guarantees capacity feasibility.
pub(crate) fn is_stable_seats(p: &Problem, seats: &[Seat], fills: &[usize]) -> bool {
    for i in p.students() {
        let pref = p.preference(i);
        if let Some(s) = seats[i.0] {
            if !pref.is_acceptable(s) {
                return false;
            }
        }
        for &s in pref.better_than(seats[i.0]) {
            if fills[s.0] < p.capacity(s) {
                return false;
            }
            let prio = p.priority(s);
            let envied = p
                .students()
                .any(|j| seats[j.0] == Some(s) && prio.outranks(i, j));
            if envied {
                return false;
            }
        }
    }
    true
}

/// Every student weakly prefers `a` to `b` and someone strictly.
pub fn pareto_dominates(p: &Problem, a: &Assignment, b: &Assignment) -> Result<bool> {
    a.check(p)?;
    b.check(p)?;
    Ok(dominates_seats(p, a.seats(), b.seats()))
}

pub(crate) fn weakly_dominates_seats(p: &Problem, a: &[Seat], b: &[Seat]) -> bool {
    p.students()
        .all(|i| p.preference(i).weakly_prefers(a[i.0], b[i.0]))
}

pub(crate) fn dominates_seats(p: &Problem, a: &[Seat], b: &[Seat]) -> bool {
    weakly_dominates_seats(p, a, b) && p.students().any(|i| p.preference(i).prefers(a[i.0], b[i.0]))
}

/// Size limit for exhaustive assignment enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBound {
    pub max_students: usize,
    pub max_schools: usize,
}

impl Default for EnumerationBound {
    fn default() -> Self {
        EnumerationBound {
            max_students: 6,
            max_schools: 4,
        }
    }
}

impl EnumerationBound {
    pub fn check(&self, p: &Problem) -> Result<()> {
        if p.num_students() > self.max_students || p.num_schools() > self.max_schools {
            Err(Error::InstanceTooLarge {
                students: p.num_students(),
                schools: p.num_schools(),
            })
        } else {
            Ok(())
        }
    }
}

pub fn is_efficient(p: &Problem, a: &Assignment) -> Result<bool> {
    is_efficient_within(p, a, EnumerationBound::default())
}

pub fn is_efficient_within(p: &Problem, a: &Assignment, bound: EnumerationBound) -> Result<bool> {
    a.check(p)?;
    bound.check(p)?;
    Ok(pareto_improvements(p, a).is_empty())
}

/// All feasible assignments that Pareto dominate `a` (exhaustive).
pub fn pareto_improvements(p: &Problem, a: &Assignment) -> Vec<Assignment> {
    let mut out = Vec::new();
    for_each_assignment(p, |seats| {
        if dominates_seats(p, seats, a.seats()) {
            out.push(Assignment::new(p.num_schools(), seats.to_vec()));
        }
    });
    out
}

/// Outcome of the generalized rural hospital check. Each field holds the
/// first counterexample, if any.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RhtReport {
    pub unequal_fill: Option<SchoolId>,
    pub changed_roster: Option<SchoolId>,
    pub changed_matched_status: Option<StudentId>,
}

impl RhtReport {
    pub fn passed(&self) -> bool {
        self.unequal_fill.is_none() && self.changed_roster.is_none() && self.changed_matched_status.is_none()
    }

    pub fn to_json(&self, p: &Problem) -> serde_json::Value {
        serde_json::json!({
            "passed": self.passed(),
            "unequal_fill": self.unequal_fill.map(|s| p.school_name(s)),
            "changed_roster": self.changed_roster.map(|s| p.school_name(s)),
            "changed_matched_status": self.changed_matched_status.map(|i| p.student_name(i)),
        })
    }
}

/// Checks, for `dominating` weakly Pareto-improving on an individually
/// rational and non-wasteful `base`: equal fills everywhere, identical
/// rosters at under-filled schools, and the same matched students.
pub fn check_generalized_rht(p: &Problem, dominating: &Assignment, base: &Assignment) -> Result<RhtReport> {
    dominating.check(p)?;
    base.check(p)?;
    if !is_individually_rational(p, base)? || !is_non_wasteful(p, base)? {
        return Err(Error::PreconditionViolated(
            "base assignment must be individually rational and non-wasteful".into(),
        ));
    }
    if !weakly_dominates_seats(p, dominating.seats(), base.seats()) {
        return Err(Error::PreconditionViolated(
            "dominating assignment makes some student worse off".into(),
        ));
    }
    let mut report = RhtReport::default();
    for s in p.schools() {
        if report.unequal_fill.is_none() && dominating.fill(s) != base.fill(s) {
            report.unequal_fill = Some(s);
        }
        if report.changed_roster.is_none()
            && base.fill(s) < p.capacity(s)
            && dominating.roster(s) != base.roster(s)
        {
            report.changed_roster = Some(s);
        }
    }
    report.changed_matched_status = p
        .students()
        .find(|&i| dominating.is_assigned(i) != base.is_assigned(i));
    Ok(report)
}
