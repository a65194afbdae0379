//! Problems, preferences, priorities and assignments.
//!
//! Identifiers are strings at the JSON boundary and dense indices everywhere
//! else. Index order is the declaration order of the instance file, which is
//! the canonical iteration order for every algorithm in the crate.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StudentId(pub usize);

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchoolId(pub usize);

impl StudentId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl SchoolId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Where a student ends up: `Some(school)` or `None` for being unassigned
/// (assigned to herself).
pub type Seat = Option<SchoolId>;

/// A submitted or true preference: the acceptable schools, best first.
/// Everything not listed ranks below the outside option.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Preference(Vec<SchoolId>);

impl Preference {
    pub fn new(acceptable: Vec<SchoolId>) -> Self {
        Preference(acceptable)
    }

    pub fn empty() -> Self {
        Preference(Vec::new())
    }

    pub fn schools(&self) -> &[SchoolId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<SchoolId> {
        self.0.first().copied()
    }

    pub fn position(&self, school: SchoolId) -> Option<usize> {
        self.0.iter().position(|&s| s == school)
    }

    pub fn is_acceptable(&self, school: SchoolId) -> bool {
        self.0.contains(&school)
    }

    /// Rank of a seat in the full order over schools and the outside option.
    /// Acceptable schools come first in list order, then the outside option,
    /// then unacceptable schools in index order. Lower is better.
    pub fn seat_rank(&self, seat: Seat) -> usize {
        match seat {
            None => self.0.len(),
            Some(s) => match self.position(s) {
                Some(pos) => pos,
                None => self.0.len() + 1 + s.0,
            },
        }
    }

    pub fn prefers(&self, a: Seat, b: Seat) -> bool {
        self.seat_rank(a) < self.seat_rank(b)
    }

    pub fn weakly_prefers(&self, a: Seat, b: Seat) -> bool {
        self.seat_rank(a) <= self.seat_rank(b)
    }

    /// The first `min(k, len)` schools, in order.
    pub fn truncate(&self, k: usize) -> Preference {
        Preference(self.0.iter().take(k).copied().collect())
    }

    /// Schools strictly preferred to `seat`.
    pub fn better_than(&self, seat: Seat) -> &[SchoolId] {
        let cut = self.seat_rank(seat).min(self.0.len());
        &self.0[..cut]
    }
}

/// Truncation of a preference after its `k`-th school.
pub fn truncate(pref: &Preference, k: usize) -> Preference {
    pref.truncate(k)
}

/// A school's strict priority ranking over every student, highest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Priority {
    order: Vec<StudentId>,
    rank: Vec<usize>,
}

impl Priority {
    /// `order` must be a permutation of `0..order.len()`.
    pub fn new(order: Vec<StudentId>) -> Self {
        let mut rank = vec![usize::MAX; order.len()];
        for (pos, s) in order.iter().enumerate() {
            rank[s.0] = pos;
        }
        debug_assert!(rank.iter().all(|&r| r != usize::MAX));
        Priority { order, rank }
    }

    pub fn order(&self) -> &[StudentId] {
        &self.order
    }

    /// Zero-based position; 0 is the highest priority.
    pub fn rank(&self, student: StudentId) -> usize {
        self.rank[student.0]
    }

    pub fn outranks(&self, a: StudentId, b: StudentId) -> bool {
        self.rank[a.0] < self.rank[b.0]
    }

    /// Students strictly above `student`, highest first.
    pub fn above(&self, student: StudentId) -> &[StudentId] {
        &self.order[..self.rank[student.0]]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    student_names: Arc<Vec<String>>,
    school_names: Arc<Vec<String>>,
    preferences: Vec<Preference>,
    priorities: Arc<Vec<Priority>>,
    capacities: Arc<Vec<usize>>,
}

/// Instance file layout.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawInstance {
    pub students: Vec<String>,
    pub schools: Vec<String>,
    pub capacities: BTreeMap<String, i64>,
    pub preferences: BTreeMap<String, Vec<String>>,
    pub priorities: BTreeMap<String, Vec<String>>,
}

fn index_names(names: &[String]) -> Result<BTreeMap<&str, usize>> {
    let mut map = BTreeMap::new();
    for (idx, name) in names.iter().enumerate() {
        if map.insert(name.as_str(), idx).is_some() {
            return Err(Error::DuplicateId(name.clone()));
        }
    }
    Ok(map)
}

fn check_keys<V>(map: &BTreeMap<String, V>, known: &BTreeMap<&str, usize>) -> Result<()> {
    match map.keys().find(|k| !known.contains_key(k.as_str())) {
        Some(k) => Err(Error::UnknownId(k.clone())),
        None => Ok(()),
    }
}

/// Validates a parsed instance and interns its identifiers.
pub fn validate_problem(raw: &RawInstance) -> Result<Problem> {
    let student_idx = index_names(&raw.students)?;
    let school_idx = index_names(&raw.schools)?;
    if let Some(name) = raw.students.iter().find(|n| school_idx.contains_key(n.as_str())) {
        return Err(Error::DuplicateId(name.clone()));
    }
    check_keys(&raw.capacities, &school_idx)?;
    check_keys(&raw.priorities, &school_idx)?;
    check_keys(&raw.preferences, &student_idx)?;

    let mut capacities = Vec::with_capacity(raw.schools.len());
    for name in &raw.schools {
        let cap = *raw
            .capacities
            .get(name)
            .ok_or_else(|| Error::MissingEntry(name.clone()))?;
        if cap < 1 {
            return Err(Error::NonPositiveCapacity(name.clone()));
        }
        capacities.push(cap as usize);
    }

    let mut priorities = Vec::with_capacity(raw.schools.len());
    for name in &raw.schools {
        let order = raw
            .priorities
            .get(name)
            .ok_or_else(|| Error::MissingEntry(name.clone()))?;
        let mut seen = vec![false; raw.students.len()];
        let mut ids = Vec::with_capacity(order.len());
        for st in order {
            let idx = *student_idx
                .get(st.as_str())
                .ok_or_else(|| Error::UnknownId(st.clone()))?;
            if seen[idx] {
                return Err(Error::DuplicateId(st.clone()));
            }
            seen[idx] = true;
            ids.push(StudentId(idx));
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::IncompletePriority {
                school: name.clone(),
                student: raw.students[missing].clone(),
            });
        }
        priorities.push(Priority::new(ids));
    }

    let mut preferences = Vec::with_capacity(raw.students.len());
    for name in &raw.students {
        let list = raw
            .preferences
            .get(name)
            .ok_or_else(|| Error::MissingEntry(name.clone()))?;
        let mut seen = HashSet::new();
        let mut ids = Vec::with_capacity(list.len());
        for sc in list {
            let idx = *school_idx.get(sc.as_str()).ok_or_else(|| {
                Error::UnknownSchoolInPreference {
                    student: name.clone(),
                    school: sc.clone(),
                }
            })?;
            if !seen.insert(idx) {
                return Err(Error::DuplicateInPreference {
                    student: name.clone(),
                    school: sc.clone(),
                });
            }
            ids.push(SchoolId(idx));
        }
        preferences.push(Preference(ids));
    }

    Ok(Problem {
        student_names: Arc::new(raw.students.clone()),
        school_names: Arc::new(raw.schools.clone()),
        preferences,
        priorities: Arc::new(priorities),
        capacities: Arc::new(capacities),
    })
}

impl Problem {
    /// Builds a problem from already-interned parts. Panics if the parts
    /// disagree in size; use [`validate_problem`] for untrusted input.
    pub fn from_parts(
        student_names: Vec<String>,
        school_names: Vec<String>,
        preferences: Vec<Preference>,
        priorities: Vec<Priority>,
        capacities: Vec<usize>,
    ) -> Self {
        assert_eq!(student_names.len(), preferences.len());
        assert_eq!(school_names.len(), priorities.len());
        assert_eq!(school_names.len(), capacities.len());
        assert!(capacities.iter().all(|&c| c >= 1));
        Problem {
            student_names: Arc::new(student_names),
            school_names: Arc::new(school_names),
            preferences,
            priorities: Arc::new(priorities),
            capacities: Arc::new(capacities),
        }
    }

    pub fn from_json(text: &str) -> Result<Problem> {
        let raw: RawInstance = serde_json::from_str(text)?;
        validate_problem(&raw)
    }

    pub fn to_raw(&self) -> RawInstance {
        let schools = |list: &[SchoolId]| list.iter().map(|&s| self.school_name(s).to_string()).collect();
        RawInstance {
            students: self.student_names.to_vec(),
            schools: self.school_names.to_vec(),
            capacities: self
                .schools()
                .map(|s| (self.school_name(s).to_string(), self.capacity(s) as i64))
                .collect(),
            preferences: self
                .students()
                .map(|i| (self.student_name(i).to_string(), schools(self.preference(i).schools())))
                .collect(),
            priorities: self
                .schools()
                .map(|s| {
                    let order = self.priority(s).order().iter();
                    (
                        self.school_name(s).to_string(),
                        order.map(|&i| self.student_name(i).to_string()).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("instance serializes")
    }

    pub fn num_students(&self) -> usize {
        self.student_names.len()
    }

    pub fn num_schools(&self) -> usize {
        self.school_names.len()
    }

    pub fn students(&self) -> impl Iterator<Item = StudentId> + Clone {
        (0..self.num_students()).map(StudentId)
    }

    pub fn schools(&self) -> impl Iterator<Item = SchoolId> + Clone {
        (0..self.num_schools()).map(SchoolId)
    }

    pub fn student_name(&self, i: StudentId) -> &str {
        &self.student_names[i.0]
    }

    pub fn school_name(&self, s: SchoolId) -> &str {
        &self.school_names[s.0]
    }

    pub fn seat_name(&self, seat: Seat) -> Option<&str> {
        seat.map(|s| self.school_name(s))
    }

    pub fn student_id(&self, name: &str) -> Result<StudentId> {
        self.student_names
            .iter()
            .position(|n| n == name)
            .map(StudentId)
            .ok_or_else(|| Error::UnknownId(name.to_string()))
    }

    pub fn school_id(&self, name: &str) -> Result<SchoolId> {
        self.school_names
            .iter()
            .position(|n| n == name)
            .map(SchoolId)
            .ok_or_else(|| Error::UnknownId(name.to_string()))
    }

    pub fn check_student(&self, i: StudentId) -> Result<()> {
        if i.0 < self.num_students() {
            Ok(())
        } else {
            Err(Error::UnknownId(format!("student #{}", i.0)))
        }
    }

    pub fn check_school(&self, s: SchoolId) -> Result<()> {
        if s.0 < self.num_schools() {
            Ok(())
        } else {
            Err(Error::UnknownId(format!("school #{}", s.0)))
        }
    }

    /// Parses a list of school names into a preference.
    pub fn preference_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Preference> {
        let mut ids = Vec::with_capacity(names.len());
        for n in names {
            let s = self.school_id(n.as_ref())?;
            if ids.contains(&s) {
                return Err(Error::DuplicateId(n.as_ref().to_string()));
            }
            ids.push(s);
        }
        Ok(Preference(ids))
    }

    pub fn preference(&self, i: StudentId) -> &Preference {
        &self.preferences[i.0]
    }

    pub fn preferences(&self) -> &[Preference] {
        &self.preferences
    }

    pub fn set_preference(&mut self, i: StudentId, pref: Preference) {
        debug_assert!(pref.schools().iter().all(|s| s.0 < self.num_schools()));
        self.preferences[i.0] = pref;
    }

    /// Same frame, different preference profile.
    pub fn with_preferences(&self, preferences: Vec<Preference>) -> Problem {
        assert_eq!(preferences.len(), self.num_students());
        Problem {
            preferences,
            ..self.clone()
        }
    }

    pub fn priority(&self, s: SchoolId) -> &Priority {
        &self.priorities[s.0]
    }

    pub fn capacity(&self, s: SchoolId) -> usize {
        self.capacities[s.0]
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    pub fn total_capacity(&self) -> usize {
        self.capacities.iter().sum()
    }

    /// `U_i(r_s)`: students strictly above `i` at `s`, highest first.
    pub fn upper_contour(&self, i: StudentId, s: SchoolId) -> Result<&[StudentId]> {
        self.check_student(i)?;
        self.check_school(s)?;
        Ok(self.priority(s).above(i))
    }

    /// The problem without student `i` and with one seat of `s` removed.
    /// A school whose last seat goes disappears from every list.
    pub fn reduce(&self, i: StudentId, s: SchoolId) -> Result<Problem> {
        self.check_student(i)?;
        self.check_school(s)?;
        let drop_school = self.capacity(s) == 1;

        let student_map: Vec<Option<StudentId>> = self
            .students()
            .scan(0, |next, j| {
                Some(if j == i {
                    None
                } else {
                    *next += 1;
                    Some(StudentId(*next - 1))
                })
            })
            .collect();
        let school_map: Vec<Option<SchoolId>> = self
            .schools()
            .scan(0, |next, t| {
                Some(if drop_school && t == s {
                    None
                } else {
                    *next += 1;
                    Some(SchoolId(*next - 1))
                })
            })
            .collect();

        let mut students = Vec::new();
        let mut preferences = Vec::new();
        for j in self.students().filter(|&j| j != i) {
            students.push(self.student_name(j).to_string());
            let list = self.preference(j).schools().iter();
            preferences.push(Preference(list.filter_map(|t| school_map[t.0]).collect()));
        }
        let mut schools = Vec::new();
        let mut priorities = Vec::new();
        let mut capacities = Vec::new();
        for t in self.schools().filter(|&t| school_map[t.0].is_some()) {
            schools.push(self.school_name(t).to_string());
            let order = self.priority(t).order().iter();
            priorities.push(Priority::new(order.filter_map(|j| student_map[j.0]).collect()));
            capacities.push(if t == s { self.capacity(t) - 1 } else { self.capacity(t) });
        }
        Ok(Problem::from_parts(students, schools, preferences, priorities, capacities))
    }
}

/// A feasible assignment: every student holds exactly one seat, and
/// per-school rosters are derived from the seats.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    seats: Vec<Seat>,
    rosters: Vec<Vec<StudentId>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawAssignment {
    pub seats: BTreeMap<String, Option<String>>,
}

impl Assignment {
    pub fn new(num_schools: usize, seats: Vec<Seat>) -> Self {
        let mut rosters = vec![Vec::new(); num_schools];
        for (i, seat) in seats.iter().enumerate() {
            if let Some(s) = seat {
                rosters[s.0].push(StudentId(i));
            }
        }
        Assignment { seats, rosters }
    }

    pub fn unassigned(num_students: usize, num_schools: usize) -> Self {
        Assignment::new(num_schools, vec![None; num_students])
    }

    /// Builds an assignment for `p` from `(student, school)` names; students
    /// not mentioned stay unassigned.
    pub fn from_pairs(p: &Problem, pairs: &[(&str, Option<&str>)]) -> Result<Self> {
        let mut seats = vec![None; p.num_students()];
        for &(st, sc) in pairs {
            let i = p.student_id(st)?;
            seats[i.0] = sc.map(|n| p.school_id(n)).transpose()?;
        }
        let a = Assignment::new(p.num_schools(), seats);
        a.check(p)?;
        Ok(a)
    }

    pub fn seat(&self, i: StudentId) -> Seat {
        self.seats[i.0]
    }

    pub fn seats(&self) -> &[Seat] {
        &self.seats
    }

    pub fn roster(&self, s: SchoolId) -> &[StudentId] {
        &self.rosters[s.0]
    }

    pub fn fill(&self, s: SchoolId) -> usize {
        self.rosters[s.0].len()
    }

    pub fn fills(&self) -> Vec<usize> {
        self.rosters.iter().map(Vec::len).collect()
    }

    pub fn num_students(&self) -> usize {
        self.seats.len()
    }

    pub fn is_assigned(&self, i: StudentId) -> bool {
        self.seats[i.0].is_some()
    }

    /// Checks sizes, school indices and capacities against `p`.
    pub fn check(&self, p: &Problem) -> Result<()> {
        if self.seats.len() != p.num_students() || self.rosters.len() != p.num_schools() {
            return Err(Error::InconsistentAssignment(format!(
                "expected {} students and {} schools, got {} and {}",
                p.num_students(),
                p.num_schools(),
                self.seats.len(),
                self.rosters.len()
            )));
        }
        for s in p.schools() {
            if self.fill(s) > p.capacity(s) {
                return Err(Error::InconsistentAssignment(format!(
                    "school `{}` holds {} students, capacity {}",
                    p.school_name(s),
                    self.fill(s),
                    p.capacity(s)
                )));
            }
        }
        Ok(())
    }

    pub fn from_raw(p: &Problem, raw: &RawAssignment) -> Result<Self> {
        let mut seats = vec![None; p.num_students()];
        for (st, sc) in &raw.seats {
            let i = p.student_id(st)?;
            seats[i.0] = match sc {
                Some(name) => Some(p.school_id(name)?),
                None => None,
            };
        }
        let a = Assignment::new(p.num_schools(), seats);
        a.check(p)?;
        Ok(a)
    }

    pub fn from_json(p: &Problem, text: &str) -> Result<Self> {
        let raw: RawAssignment = serde_json::from_str(text)?;
        Assignment::from_raw(p, &raw)
    }

    pub fn to_raw(&self, p: &Problem) -> RawAssignment {
        RawAssignment {
            seats: p
                .students()
                .map(|i| {
                    let seat = p.seat_name(self.seat(i)).map(str::to_string);
                    (p.student_name(i).to_string(), seat)
                })
                .collect(),
        }
    }

    pub fn to_json(&self, p: &Problem) -> String {
        serde_json::to_string_pretty(&self.to_raw(p)).expect("assignment serializes")
    }

    /// Human-readable `i1→s1, i2→∅` listing.
    pub fn display<'a>(&'a self, p: &'a Problem) -> impl fmt::Display + 'a {
        DisplayAssignment { a: self, p }
    }
}

struct DisplayAssignment<'a> {
    a: &'a Assignment,
    p: &'a Problem,
}

impl fmt::Display for DisplayAssignment<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, i) in self.p.students().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            let seat = self.p.seat_name(self.a.seat(i)).unwrap_or("self");
            write!(f, "{}→{}", self.p.student_name(i), seat)?;
        }
        Ok(())
    }
}

/// Calls `visit` on every capacity-feasible seat vector of `p`, in
/// lexicographic order with "unassigned" first.
pub fn for_each_assignment(p: &Problem, mut visit: impl FnMut(&[Seat])) {
    fn rec(
        p: &Problem,
        idx: usize,
        seats: &mut Vec<Seat>,
        free: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[Seat]),
    ) {
        if idx == p.num_students() {
            visit(seats);
            return;
        }
        seats[idx] = None;
        rec(p, idx + 1, seats, free, visit);
        for s in 0..p.num_schools() {
            if free[s] > 0 {
                free[s] -= 1;
                seats[idx] = Some(SchoolId(s));
                rec(p, idx + 1, seats, free, visit);
                free[s] += 1;
            }
        }
        seats[idx] = None;
    }
    let mut seats = vec![None; p.num_students()];
    let mut free = p.capacities().to_vec();
    rec(p, 0, &mut seats, &mut free, &mut visit);
}

pub fn all_assignments(p: &Problem) -> Vec<Assignment> {
    let mut out = Vec::new();
    for_each_assignment(p, |seats| out.push(Assignment::new(p.num_schools(), seats.to_vec())));
    out
}

/// What a student knows before the assignment: the frame and her own list.
#[derive(Clone, Debug)]
pub struct InterimInfo<'a> {
    pub frame: &'a Problem,
    pub student: StudentId,
    pub preference: Preference,
}

impl<'a> InterimInfo<'a> {
    pub fn new(frame: &'a Problem, student: StudentId, preference: Preference) -> Self {
        InterimInfo {
            frame,
            student,
            preference,
        }
    }

    /// The student's interim information inside a full problem.
    pub fn of(problem: &'a Problem, student: StudentId) -> Self {
        InterimInfo::new(problem, student, problem.preference(student).clone())
    }
}

/// Interim information plus her own seat and every school's enrollment.
#[derive(Clone, Debug)]
pub struct ExPostInfo<'a> {
    pub interim: InterimInfo<'a>,
    pub own_seat: Seat,
    pub fill: Vec<usize>,
}

impl<'a> ExPostInfo<'a> {
    pub fn new(interim: InterimInfo<'a>, own_seat: Seat, fill: Vec<usize>) -> Result<Self> {
        let frame = interim.frame;
        if fill.len() != frame.num_schools() {
            return Err(Error::InconsistentAssignment("fill vector length".into()));
        }
        if frame.schools().any(|s| fill[s.0] > frame.capacity(s)) {
            return Err(Error::InconsistentAssignment("fill exceeds capacity".into()));
        }
        if let Some(s) = own_seat {
            frame.check_school(s)?;
            if fill[s.0] == 0 {
                return Err(Error::InconsistentAssignment("own school has zero fill".into()));
            }
        }
        Ok(ExPostInfo {
            interim,
            own_seat,
            fill,
        })
    }

    pub fn from_assignment(problem: &'a Problem, a: &Assignment, student: StudentId) -> Result<Self> {
        a.check(problem)?;
        ExPostInfo::new(InterimInfo::of(problem, student), a.seat(student), a.fills())
    }
}
