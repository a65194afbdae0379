//! High-priority and top-priority sets, and the incontestability verdict.
//!
//! A school set is high-priority for a student when its seats cannot all be
//! filled by students ranked above her at the respective schools. That is a
//! Hall condition, checked here with an augmenting-path matching between
//! seats and students.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{Assignment, Problem, SchoolId, Seat, StudentId};
use crate::properties;

/// Incremental seat-to-student matching restricted to one student's upper
/// contours. Seats are added school by school; each new seat is matched by
/// an augmenting path if one exists, which keeps the matching maximum.
struct SeatMatcher<'a> {
    p: &'a Problem,
    focal: StudentId,
    seat_school: Vec<SchoolId>,
    seat_holder: Vec<Option<StudentId>>,
    student_seat: Vec<Option<usize>>,
    visited: Vec<bool>,
}

impl<'a> SeatMatcher<'a> {
    fn new(p: &'a Problem, focal: StudentId) -> Self {
        SeatMatcher {
            p,
            focal,
            seat_school: Vec::new(),
            seat_holder: Vec::new(),
            student_seat: vec![None; p.num_students()],
            visited: vec![false; p.num_students()],
        }
    }

    /// Adds every seat of `s`; returns false if some seat stays unmatched.
    fn add_school(&mut self, s: SchoolId) -> bool {
        let mut all = true;
        for _ in 0..self.p.capacity(s) {
            let seat = self.seat_school.len();
            self.seat_school.push(s);
            self.seat_holder.push(None);
            self.visited.iter_mut().for_each(|v| *v = false);
            if !self.augment(seat) {
                all = false;
            }
        }
        all
    }

    fn augment(&mut self, seat: usize) -> bool {
        let s = self.seat_school[seat];
        let above = self.p.priority(s).above(self.focal);
        // Prefer a free student before displacing anyone, so that the
        // highest-priority students keep the seats they were first given.
        if let Some(&j) = above.iter().find(|j| self.student_seat[j.0].is_none()) {
            self.student_seat[j.0] = Some(seat);
            self.seat_holder[seat] = Some(j);
            return true;
        }
        for &j in above {
            if self.visited[j.0] {
                continue;
            }
            self.visited[j.0] = true;
            let free = match self.student_seat[j.0] {
                None => true,
                Some(other) => self.augment(other),
            };
            if free {
                self.student_seat[j.0] = Some(seat);
                self.seat_holder[seat] = Some(j);
                return true;
            }
        }
        false
    }

    fn into_seats(self) -> Vec<Seat> {
        let mut seats = vec![None; self.p.num_students()];
        for (seat, holder) in self.seat_holder.iter().enumerate() {
            if let Some(j) = holder {
                seats[j.0] = Some(self.seat_school[seat]);
            }
        }
        seats
    }
}

fn check_set(p: &Problem, i: StudentId, set: &[SchoolId]) -> Result<()> {
    p.check_student(i)?;
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    for &s in set {
        p.check_school(s)?;
    }
    Ok(())
}

fn dedup(set: &[SchoolId]) -> Vec<SchoolId> {
    let mut out = Vec::with_capacity(set.len());
    for &s in set {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// True iff the seats of `set` cannot be filled using, at each school, only
/// students ranked above `i` there. Only priorities and capacities of `p`
/// are consulted.
pub fn is_high_priority_set(p: &Problem, i: StudentId, set: &[SchoolId]) -> Result<bool> {
    check_set(p, i, set)?;
    let set = dedup(set);
    if set.iter().any(|&s| p.priority(s).rank(i) < p.capacity(s)) {
        return Ok(true);
    }
    let mut m = SeatMatcher::new(p, i);
    Ok(!set.iter().all(|&s| m.add_school(s)))
}

/// Either the student's smallest top-priority set, or, when she has none,
/// the acceptable schools (her outcome set is those plus staying unassigned).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopPriorityVerdict {
    Set(Vec<SchoolId>),
    Fallback(Vec<SchoolId>),
}

impl TopPriorityVerdict {
    pub fn has_top_priority_set(&self) -> bool {
        matches!(self, TopPriorityVerdict::Set(_))
    }

    pub fn top_priority_set(&self) -> Option<&[SchoolId]> {
        match self {
            TopPriorityVerdict::Set(set) => Some(set),
            TopPriorityVerdict::Fallback(_) => None,
        }
    }

    pub fn schools(&self) -> &[SchoolId] {
        match self {
            TopPriorityVerdict::Set(set) | TopPriorityVerdict::Fallback(set) => set,
        }
    }

    /// The seats the verdict predicts as attainable.
    pub fn outcomes(&self) -> BTreeSet<Seat> {
        let mut out: BTreeSet<Seat> = self.schools().iter().map(|&s| Some(s)).collect();
        if !self.has_top_priority_set() {
            out.insert(None);
        }
        out
    }

    pub fn contains(&self, seat: Seat) -> bool {
        match (self, seat) {
            (TopPriorityVerdict::Set(_), None) => false,
            (TopPriorityVerdict::Fallback(_), None) => true,
            (_, Some(s)) => self.schools().contains(&s),
        }
    }
}

/// Shortest prefix of `i`'s list that is a high-priority set. High-priority
/// sets are closed under supersets, so the first hit is the smallest one.
pub fn smallest_top_priority_set(p: &Problem, i: StudentId) -> Result<TopPriorityVerdict> {
    p.check_student(i)?;
    Ok(top_priority_for(p, i, p.preference(i).schools()))
}

/// Same as [`smallest_top_priority_set`] for an arbitrary list of `i`.
pub fn top_priority_for(p: &Problem, i: StudentId, list: &[SchoolId]) -> TopPriorityVerdict {
    let mut m = SeatMatcher::new(p, i);
    for (n, &s) in list.iter().enumerate() {
        if p.priority(s).rank(i) < p.capacity(s) || !m.add_school(s) {
            return TopPriorityVerdict::Set(list[..=n].to_vec());
        }
    }
    TopPriorityVerdict::Fallback(list.to_vec())
}

/// Students with a top-priority set who are seated outside it, with the set.
pub fn top_priority_violations(p: &Problem, a: &Assignment) -> Result<Vec<(StudentId, Vec<SchoolId>)>> {
    a.check(p)?;
    let mut out = Vec::new();
    for i in p.students() {
        if let TopPriorityVerdict::Set(set) = smallest_top_priority_set(p, i)? {
            if !a.seat(i).is_some_and(|s| set.contains(&s)) {
                out.push((i, set));
            }
        }
    }
    Ok(out)
}

pub fn respects_top_priority_sets(p: &Problem, a: &Assignment) -> Result<bool> {
    Ok(top_priority_violations(p, a)?.is_empty())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplaintKind {
    UnacceptableSeat(SchoolId),
    WastedSeat(SchoolId),
    TopPriorityViolation(Vec<SchoolId>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complaint {
    pub student: StudentId,
    pub kind: ComplaintKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub complaints: Vec<Complaint>,
}

impl AuditReport {
    pub fn incontestable(&self) -> bool {
        self.complaints.is_empty()
    }

    pub fn complainants(&self) -> BTreeSet<StudentId> {
        self.complaints.iter().map(|c| c.student).collect()
    }

    pub fn complaints_of(&self, i: StudentId) -> impl Iterator<Item = &ComplaintKind> {
        self.complaints.iter().filter(move |c| c.student == i).map(|c| &c.kind)
    }

    pub fn to_json(&self, p: &Problem) -> serde_json::Value {
        let complaints: Vec<_> = self
            .complaints
            .iter()
            .map(|c| {
                let (kind, witness) = match &c.kind {
                    ComplaintKind::UnacceptableSeat(s) => ("unacceptable_seat", serde_json::json!(p.school_name(*s))),
                    ComplaintKind::WastedSeat(s) => ("wasted_seat", serde_json::json!(p.school_name(*s))),
                    ComplaintKind::TopPriorityViolation(set) => (
                        "top_priority_violation",
                        serde_json::json!(set.iter().map(|&s| p.school_name(s)).collect::<Vec<_>>()),
                    ),
                };
                serde_json::json!({
                    "student": p.student_name(c.student),
                    "kind": kind,
                    "witness": witness,
                })
            })
            .collect();
        serde_json::json!({
            "incontestable": self.incontestable(),
            "complaints": complaints,
        })
    }
}

/// Individual rationality, non-wastefulness and respect for top-priority
/// sets, reported per student.
pub fn incontestability_verdict(p: &Problem, a: &Assignment) -> Result<AuditReport> {
    a.check(p)?;
    let wasted = properties::wasteful_witnesses(p, a)?;
    let mut complaints = Vec::new();
    for i in p.students() {
        if let Some(s) = a.seat(i) {
            if !p.preference(i).is_acceptable(s) {
                complaints.push(Complaint {
                    student: i,
                    kind: ComplaintKind::UnacceptableSeat(s),
                });
            }
        }
        for &(j, s) in &wasted {
            if j == i {
                complaints.push(Complaint {
                    student: i,
                    kind: ComplaintKind::WastedSeat(s),
                });
            }
        }
        if let TopPriorityVerdict::Set(set) = smallest_top_priority_set(p, i)? {
            if !a.seat(i).is_some_and(|s| set.contains(&s)) {
                complaints.push(Complaint {
                    student: i,
                    kind: ComplaintKind::TopPriorityViolation(set),
                });
            }
        }
    }
    Ok(AuditReport { complaints })
}

/// Whenever someone sits in `set`, everyone above her at that school also
/// sits somewhere in `set`.
pub fn is_comprehensive(p: &Problem, a: &Assignment, set: &[SchoolId]) -> Result<bool> {
    a.check(p)?;
    for &s in set {
        p.check_school(s)?;
    }
    Ok(first_gap(p, a.seats(), set).is_none())
}

/// A `(school, seated student, unseated superior)` triple breaking
/// comprehensiveness.
fn first_gap(p: &Problem, seats: &[Seat], set: &[SchoolId]) -> Option<(SchoolId, StudentId, StudentId)> {
    for &s in set {
        for j in p.students().filter(|j| seats[j.0] == Some(s)) {
            let gap = p
                .priority(s)
                .above(j)
                .iter()
                .find(|k| !seats[k.0].is_some_and(|t| set.contains(&t)));
            if let Some(&k) = gap {
                return Some((s, j, k));
            }
        }
    }
    None
}

/// An assignment filling every school of `set` to capacity from `i`'s upper
/// contours that is comprehensive for `set`. Everyone else is unassigned.
///
/// Starts from a maximum matching and repeatedly swaps a seated student for
/// an unseated superior at the same school. Each swap strictly lowers the
/// summed priority rank of that school's roster, so the loop terminates.
pub fn construct_saturating_comprehensive(p: &Problem, i: StudentId, set: &[SchoolId]) -> Result<Assignment> {
    check_set(p, i, set)?;
    let set = dedup(set);
    if is_high_priority_set(p, i, &set)? {
        return Err(Error::IsHighPrioritySet(p.student_name(i).to_string()));
    }
    let mut m = SeatMatcher::new(p, i);
    for &s in &set {
        m.add_school(s);
    }
    let mut seats = m.into_seats();
    while let Some((s, j, k)) = first_gap(p, &seats, &set) {
        debug_assert_eq!(seats[k.0], None);
        seats[j.0] = None;
        seats[k.0] = Some(s);
    }
    Ok(Assignment::new(p.num_schools(), seats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sid(p: &Problem, n: &str) -> StudentId {
        p.student_id(n).unwrap()
    }

    fn set(p: &Problem, names: &[&str]) -> Vec<SchoolId> {
        names.iter().map(|n| p.school_id(n).unwrap()).collect()
    }

    #[test]
    fn high_priority_examples() {
        let t2 = fixtures::t2();
        assert!(is_high_priority_set(&t2, sid(&t2, "i2"), &set(&t2, &["s1", "s2"])).unwrap());
        assert!(!is_high_priority_set(&t2, sid(&t2, "i3"), &set(&t2, &["s1", "s2"])).unwrap());
        assert!(is_high_priority_set(&t2, sid(&t2, "i1"), &set(&t2, &["s3"])).unwrap());
        assert_eq!(is_high_priority_set(&t2, sid(&t2, "i1"), &[]), Err(Error::EmptySet));
        assert!(is_high_priority_set(&t2, sid(&t2, "i1"), &[SchoolId(7)]).is_err());
    }

    #[test]
    fn smallest_sets() {
        let t2 = fixtures::t2();
        let v = smallest_top_priority_set(&t2, sid(&t2, "i2")).unwrap();
        assert_eq!(v, TopPriorityVerdict::Set(set(&t2, &["s1", "s2"])));

        let t3 = fixtures::t3();
        let v = smallest_top_priority_set(&t3, sid(&t3, "i3")).unwrap();
        assert_eq!(v, TopPriorityVerdict::Set(set(&t3, &["s1", "s2", "s3"])));

        let mut empty = t2.clone();
        empty.set_preference(sid(&t2, "i3"), Default::default());
        let v = smallest_top_priority_set(&empty, sid(&t2, "i3")).unwrap();
        assert_eq!(v, TopPriorityVerdict::Fallback(vec![]));
        assert_eq!(v.outcomes(), BTreeSet::from([None]));
    }

    #[test]
    fn respect_examples() {
        let t2 = fixtures::t2();
        let boston = Assignment::from_pairs(&t2, &[("i1", Some("s1")), ("i2", Some("s3")), ("i3", Some("s2"))]).unwrap();
        let v = top_priority_violations(&t2, &boston).unwrap();
        assert_eq!(v, vec![(sid(&t2, "i2"), set(&t2, &["s1", "s2"]))]);

        let t4 = fixtures::t4();
        let ettc = Assignment::from_pairs(
            &t4,
            &[("i1", Some("s1")), ("i2", Some("s2")), ("i3", Some("s3")), ("i4", Some("s3"))],
        )
        .unwrap();
        let v = top_priority_violations(&t4, &ettc).unwrap();
        assert_eq!(v, vec![(sid(&t4, "i4"), set(&t4, &["s1", "s2"]))]);

        let firsts = Assignment::from_pairs(&t4, &[("i1", Some("s1")), ("i2", Some("s2")), ("i3", Some("s3"))]).unwrap();
        assert!(!respects_top_priority_sets(&t4, &firsts).unwrap());
    }

    #[test]
    fn verdict_examples() {
        let t1 = fixtures::t1();
        assert!(incontestability_verdict(&t1, &fixtures::t1_mu_star()).unwrap().incontestable());

        let t2 = fixtures::t2();
        let boston = Assignment::from_pairs(&t2, &[("i1", Some("s1")), ("i2", Some("s3")), ("i3", Some("s2"))]).unwrap();
        let r = incontestability_verdict(&t2, &boston).unwrap();
        assert_eq!(
            r.complaints,
            vec![Complaint {
                student: sid(&t2, "i2"),
                kind: ComplaintKind::TopPriorityViolation(set(&t2, &["s1", "s2"])),
            }]
        );

        let t3 = fixtures::t3();
        let ar = Assignment::from_pairs(&t3, &[("i1", Some("s1")), ("i2", Some("s2")), ("i4", Some("s3"))]).unwrap();
        let r = incontestability_verdict(&t3, &ar).unwrap();
        let kinds: Vec<_> = r.complaints_of(sid(&t3, "i3")).cloned().collect();
        assert_eq!(kinds, vec![ComplaintKind::TopPriorityViolation(set(&t3, &["s1", "s2", "s3"]))]);
    }

    #[test]
    fn self_seat_with_top_priority_set_is_a_violation() {
        let t2 = fixtures::t2();
        let a = Assignment::from_pairs(&t2, &[("i1", Some("s1")), ("i3", Some("s2")), ("i2", None)]).unwrap();
        let r = incontestability_verdict(&t2, &a).unwrap();
        assert!(r
            .complaints_of(sid(&t2, "i2"))
            .any(|k| matches!(k, ComplaintKind::TopPriorityViolation(_))));
    }

    #[test]
    fn audit_json_shape() {
        let t2 = fixtures::t2();
        let r = incontestability_verdict(&t2, &Assignment::unassigned(3, 3)).unwrap();
        let json = r.to_json(&t2);
        assert_eq!(json["incontestable"], false);
        assert_eq!(json["complaints"][0]["student"], "i1");
        assert_eq!(json["complaints"][0]["kind"], "wasted_seat");
        assert_eq!(json["complaints"][0]["witness"], "s1");
    }

    #[test]
    fn comprehensive_examples() {
        let t2 = fixtures::t2();
        let any = set(&t2, &["s1", "s2"]);
        assert!(is_comprehensive(&t2, &Assignment::unassigned(3, 3), &any).unwrap());
        let a = Assignment::from_pairs(&t2, &[("i1", Some("s1")), ("i2", Some("s2"))]).unwrap();
        assert!(is_comprehensive(&t2, &a, &any).unwrap());
        let b = Assignment::from_pairs(&t2, &[("i2", Some("s1"))]).unwrap();
        assert!(!is_comprehensive(&t2, &b, &set(&t2, &["s1"])).unwrap());
    }

    #[test]
    fn saturating_construction() {
        let t2 = fixtures::t2();
        let a = construct_saturating_comprehensive(&t2, sid(&t2, "i3"), &set(&t2, &["s1", "s2"])).unwrap();
        assert_eq!(a, Assignment::from_pairs(&t2, &[("i1", Some("s1")), ("i2", Some("s2"))]).unwrap());

        let t3 = fixtures::t3();
        let s12 = set(&t3, &["s1", "s2"]);
        let a = construct_saturating_comprehensive(&t3, sid(&t3, "i4"), &s12).unwrap();
        let x = Assignment::from_pairs(&t3, &[("i1", Some("s1")), ("i2", Some("s2"))]).unwrap();
        let y = Assignment::from_pairs(&t3, &[("i2", Some("s1")), ("i1", Some("s2"))]).unwrap();
        assert!(a == x || a == y);

        let t4 = fixtures::t4();
        let s1 = set(&t4, &["s1"]);
        let a = construct_saturating_comprehensive(&t4, sid(&t4, "i1"), &s1).unwrap();
        assert_eq!(a, Assignment::from_pairs(&t4, &[("i3", Some("s1"))]).unwrap());

        assert!(matches!(
            construct_saturating_comprehensive(&t2, sid(&t2, "i2"), &set(&t2, &["s1", "s2"])),
            Err(Error::IsHighPrioritySet(_))
        ));
    }

    #[test]
    fn swap_repairs_non_comprehensive_matching() {
        // s1 (cap 1): i1 > i2 > i3; s2 (cap 1): i2 > i1 > i3. For i3 and
        // {s1}, a naive fill with i2 at s1 is not comprehensive.
        let p = Problem::from_json(
            r#"{"students":["i1","i2","i3"],"schools":["s1","s2"],
                "capacities":{"s1":1,"s2":1},
                "preferences":{"i1":[],"i2":[],"i3":[]},
                "priorities":{"s1":["i1","i2","i3"],"s2":["i2","i1","i3"]}}"#,
        )
        .unwrap();
        let a = construct_saturating_comprehensive(&p, sid(&p, "i3"), &set(&p, &["s1"])).unwrap();
        assert_eq!(a.seat(sid(&p, "i1")), Some(SchoolId(0)));
        let both = set(&p, &["s2", "s1"]);
        let a = construct_saturating_comprehensive(&p, sid(&p, "i3"), &both).unwrap();
        assert!(is_comprehensive(&p, &a, &both).unwrap());
        assert_eq!(a.fills(), vec![1, 1]);
    }
}
