//! Attainable-outcome sets and the outcome table shared by the incentive
//! analyses.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::strategy::{decode_profile, for_each_completion, profile_count, Budget, StrategySpace};
use crate::error::{Error, Result};
use crate::mechanisms::{MechanismKind, MechanismSpec};
use crate::model::{InterimInfo, Preference, Problem, Seat, StudentId};
use crate::priority_sets::top_priority_for;

/// The focal student's seat for every (focal strategy, counterpart profile)
/// pair. Columns follow the profile enumeration order.
#[derive(Clone, Debug)]
pub struct OutcomeTable {
    pub student: StudentId,
    pub rows: Vec<Preference>,
    pub space: StrategySpace,
    pub free: Vec<StudentId>,
    pub seats: Vec<Vec<Seat>>,
}

impl OutcomeTable {
    pub fn build(
        kind: MechanismKind,
        frame: &Problem,
        i: StudentId,
        rows: Vec<Preference>,
        cap: Option<usize>,
        budget: Budget,
    ) -> Result<Self> {
        frame.check_student(i)?;
        let space = StrategySpace::new(frame.num_schools(), cap);
        for row in &rows {
            check_fits(frame, i, row, &space)?;
        }
        let free: Vec<StudentId> = frame.students().filter(|&j| j != i).collect();
        let cols = profile_count(&space, free.len());
        budget.check(cols.saturating_mul(rows.len().max(1) as u128))?;

        let seats = rows
            .par_iter()
            .map(|row| {
                let mut p = frame.clone();
                p.set_preference(i, row.clone());
                let mut out = Vec::with_capacity(cols as usize);
                for_each_completion(&mut p, &free, &space, |q| out.push(kind.seats(q)[i.0]));
                out
            })
            .collect();
        Ok(OutcomeTable {
            student: i,
            rows,
            space,
            free,
            seats,
        })
    }

    /// Every strategy of the (capped) space as a row.
    pub fn full(kind: MechanismKind, frame: &Problem, i: StudentId, cap: Option<usize>, budget: Budget) -> Result<Self> {
        let rows = StrategySpace::new(frame.num_schools(), cap).strategies().to_vec();
        OutcomeTable::build(kind, frame, i, rows, cap, budget)
    }

    pub fn num_cols(&self) -> usize {
        self.seats.first().map_or(0, Vec::len)
    }

    pub fn row_of(&self, pref: &Preference) -> Option<usize> {
        self.rows.iter().position(|r| r == pref)
    }

    /// The full preference profile behind column `col` when the focal
    /// student submits `focal`.
    pub fn profile(&self, col: usize, focal: &Preference) -> Vec<Preference> {
        let picks = decode_profile(col, self.free.len(), &self.space);
        let n = self.free.len() + 1;
        let mut profile = vec![Preference::empty(); n];
        profile[self.student.0] = focal.clone();
        for (&j, pref) in self.free.iter().zip(picks) {
            profile[j.0] = pref;
        }
        profile
    }

    /// Worst seat in `row` according to `true_pref`.
    pub fn worst(&self, row: usize, true_pref: &Preference) -> Seat {
        *self.seats[row]
            .iter()
            .max_by_key(|&&seat| true_pref.seat_rank(seat))
            .expect("at least one counterpart profile")
    }
}

fn check_fits(frame: &Problem, i: StudentId, pref: &Preference, space: &StrategySpace) -> Result<()> {
    if pref.schools().iter().any(|s| s.0 >= frame.num_schools()) {
        return Err(Error::UnknownId(format!("school in list of `{}`", frame.student_name(i))));
    }
    if let Some(cap) = space.cap() {
        if pref.len() > cap {
            return Err(Error::ListCapExceeded {
                student: frame.student_name(i).to_string(),
                len: pref.len(),
                cap,
            });
        }
    }
    Ok(())
}

/// The seats a student can end up with, each with the first counterpart
/// profile (in enumeration order) producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttainableSet {
    pub student: StudentId,
    pub outcomes: BTreeMap<Seat, Vec<Preference>>,
}

impl AttainableSet {
    pub fn seats(&self) -> BTreeSet<Seat> {
        self.outcomes.keys().copied().collect()
    }

    /// Re-runs the mechanism on every witness and checks it yields its seat.
    pub fn witnesses_replay(&self, spec: &MechanismSpec, frame: &Problem) -> bool {
        self.outcomes.iter().all(|(&seat, profile)| {
            let p = frame.with_preferences(profile.clone());
            spec.kind.seats(&p)[self.student.0] == seat
        })
    }

    pub fn to_json(&self, p: &Problem) -> serde_json::Value {
        let outcomes: Vec<_> = self
            .outcomes
            .iter()
            .map(|(&seat, profile)| {
                let witness: serde_json::Map<_, _> = p
                    .students()
                    .map(|j| {
                        let names: Vec<_> = profile[j.0].schools().iter().map(|&s| p.school_name(s)).collect();
                        (p.student_name(j).to_string(), serde_json::json!(names))
                    })
                    .collect();
                serde_json::json!({"seat": p.seat_name(seat), "witness": witness})
            })
            .collect();
        serde_json::json!({"student": p.student_name(self.student), "outcomes": outcomes})
    }
}

/// Every seat the student can receive under `spec` across all counterpart
/// profiles compatible with her interim information.
pub fn attainable_set(spec: &MechanismSpec, info: &InterimInfo, budget: Budget) -> Result<AttainableSet> {
    let focal = info.preference.clone();
    let table = OutcomeTable::build(spec.kind, info.frame, info.student, vec![focal.clone()], spec.list_cap, budget)?;
    let mut outcomes = BTreeMap::new();
    for (col, &seat) in table.seats[0].iter().enumerate() {
        outcomes.entry(seat).or_insert_with(|| table.profile(col, &focal));
    }
    Ok(AttainableSet {
        student: info.student,
        outcomes,
    })
}

/// Enumerated attainable seats next to the smallest-top-priority-set
/// prediction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem2Audit {
    pub predicted: BTreeSet<Seat>,
    pub attained: BTreeSet<Seat>,
}

impl Theorem2Audit {
    pub fn passed(&self) -> bool {
        self.predicted == self.attained
    }
}

pub fn audit_theorem2(
    spec: &MechanismSpec,
    frame: &Problem,
    i: StudentId,
    pref: &Preference,
    budget: Budget,
) -> Result<Theorem2Audit> {
    let info = InterimInfo::new(frame, i, pref.clone());
    let attained = attainable_set(spec, &info, budget)?.seats();
    let predicted = top_priority_for(frame, i, pref.schools()).outcomes();
    Ok(Theorem2Audit { predicted, attained })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::SchoolId;

    fn pref(p: &Problem, names: &[&str]) -> Preference {
        p.preference_from_names(names).unwrap()
    }

    #[test]
    fn sosm_on_table_two() {
        let t2 = fixtures::t2();
        let i2 = t2.student_id("i2").unwrap();
        let spec = MechanismSpec::new(MechanismKind::Sosm);
        let info = InterimInfo::new(&t2, i2, pref(&t2, &["s1", "s2", "s3"]));
        let set = attainable_set(&spec, &info, Budget::DEFAULT).unwrap();
        assert_eq!(set.seats(), BTreeSet::from([Some(SchoolId(0)), Some(SchoolId(1))]));
        assert!(set.witnesses_replay(&spec, &t2));
    }

    #[test]
    fn empty_list_attains_only_self() {
        let t2 = fixtures::t2();
        let i1 = t2.student_id("i1").unwrap();
        for kind in MechanismKind::INCONTESTABLE {
            let info = InterimInfo::new(&t2, i1, Preference::empty());
            let set = attainable_set(&MechanismSpec::new(kind), &info, Budget::DEFAULT).unwrap();
            assert_eq!(set.seats(), BTreeSet::from([None]));
        }
    }

    #[test]
    fn ttc_full_list() {
        let t2 = fixtures::t2();
        let i3 = t2.student_id("i3").unwrap();
        let info = InterimInfo::new(&t2, i3, pref(&t2, &["s2", "s1", "s3"]));
        let set = attainable_set(&MechanismSpec::new(MechanismKind::Ttc), &info, Budget::DEFAULT).unwrap();
        assert_eq!(set.seats(), BTreeSet::from([Some(SchoolId(0)), Some(SchoolId(1)), Some(SchoolId(2))]));
    }

    #[test]
    fn ct_on_table_four() {
        let t4 = fixtures::t4();
        let i4 = t4.student_id("i4").unwrap();
        let spec = MechanismSpec::new(MechanismKind::Ct);
        let audit = audit_theorem2(&spec, &t4, i4, &pref(&t4, &["s1", "s2", "s3"]), Budget::DEFAULT).unwrap();
        assert!(audit.passed());
        assert_eq!(audit.attained, BTreeSet::from([Some(SchoolId(0)), Some(SchoolId(1))]));
    }

    #[test]
    fn focal_list_must_fit_cap() {
        let t2 = fixtures::t2();
        let i2 = t2.student_id("i2").unwrap();
        let info = InterimInfo::new(&t2, i2, pref(&t2, &["s1", "s2", "s3"]));
        let spec = MechanismSpec::capped(MechanismKind::Sosm, 2);
        assert!(matches!(attainable_set(&spec, &info, Budget::DEFAULT), Err(Error::ListCapExceeded { .. })));
        assert!(matches!(
            attainable_set(&MechanismSpec::new(MechanismKind::Sosm), &info, Budget(10)),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
