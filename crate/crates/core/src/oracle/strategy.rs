//! Message spaces and exhaustive preference-profile enumeration.

use crate::error::{Error, Result};
use crate::model::{Preference, Problem, SchoolId, StudentId};

/// Hard cap on how many items one enumeration may visit.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(10_000_000);

    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.0 as u128 {
            Err(Error::BudgetExceeded { needed, budget: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// Every ordered list of distinct schools of length at most the cap,
/// the empty list included, ordered by length and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategySpace {
    num_schools: usize,
    cap: Option<usize>,
    strategies: Vec<Preference>,
}

impl StrategySpace {
    pub fn new(num_schools: usize, cap: Option<usize>) -> Self {
        let max_len = cap.unwrap_or(num_schools).min(num_schools);
        let mut strategies = Vec::new();
        let mut current = Vec::new();
        let mut used = vec![false; num_schools];
        for len in 0..=max_len {
            fill(len, &mut current, &mut used, &mut strategies);
        }
        StrategySpace {
            num_schools,
            cap,
            strategies,
        }
    }

    pub fn unbounded(num_schools: usize) -> Self {
        StrategySpace::new(num_schools, None)
    }

    /// `sum_{j=0..cap} n!/(n-j)!`.
    pub fn count(num_schools: usize, cap: Option<usize>) -> u128 {
        let max_len = cap.unwrap_or(num_schools).min(num_schools);
        let mut total = 0u128;
        let mut term = 1u128;
        for j in 0..=max_len {
            total += term;
            term *= (num_schools - j) as u128;
        }
        total
    }

    pub fn num_schools(&self) -> usize {
        self.num_schools
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    pub fn strategies(&self) -> &[Preference] {
        &self.strategies
    }

    pub fn contains(&self, pref: &Preference) -> bool {
        pref.len() <= self.cap.unwrap_or(usize::MAX) && pref.schools().iter().all(|s| s.0 < self.num_schools)
    }
}

fn fill(len: usize, current: &mut Vec<SchoolId>, used: &mut [bool], out: &mut Vec<Preference>) {
    if current.len() == len {
        out.push(Preference::new(current.clone()));
        return;
    }
    for s in 0..used.len() {
        if !used[s] {
            used[s] = true;
            current.push(SchoolId(s));
            fill(len, current, used, out);
            current.pop();
            used[s] = false;
        }
    }
}

/// Number of completions when `free` students each pick from `space`.
pub fn profile_count(space: &StrategySpace, free: usize) -> u128 {
    (space.len() as u128).saturating_pow(free as u32)
}

/// Calls `visit` on every completion of `p` where each student in `free`
/// picks a strategy from `space`. The last free student varies fastest.
/// `p` is mutated in place and restored to the first strategy on return.
pub(crate) fn for_each_completion(
    p: &mut Problem,
    free: &[StudentId],
    space: &StrategySpace,
    mut visit: impl FnMut(&Problem),
) {
    let strategies = space.strategies();
    let mut digits = vec![0usize; free.len()];
    for &j in free {
        p.set_preference(j, strategies[0].clone());
    }
    loop {
        visit(p);
        let mut pos = free.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < strategies.len() {
                p.set_preference(free[pos], strategies[digits[pos]].clone());
                break;
            }
            digits[pos] = 0;
            p.set_preference(free[pos], strategies[0].clone());
        }
    }
}

/// The strategies picked by the free students at enumeration index `index`.
pub(crate) fn decode_profile(index: usize, free: usize, space: &StrategySpace) -> Vec<Preference> {
    let base = space.len();
    let mut digits = vec![0usize; free];
    let mut rest = index;
    for d in digits.iter_mut().rev() {
        *d = rest % base;
        rest /= base;
    }
    digits.into_iter().map(|d| space.strategies()[d].clone()).collect()
}

/// Every problem over `frame`'s students, schools, priorities and
/// capacities whose preferences agree with `fixed` where it is `Some`, the
/// other students ranging over the (optionally capped) strategy space.
pub fn enumerate_profiles(
    frame: &Problem,
    fixed: &[Option<Preference>],
    cap: Option<usize>,
    budget: Budget,
) -> Result<ProfileIter> {
    if fixed.len() != frame.num_students() {
        return Err(Error::PreconditionViolated(format!(
            "expected {} fixed entries, got {}",
            frame.num_students(),
            fixed.len()
        )));
    }
    let space = StrategySpace::new(frame.num_schools(), cap);
    let mut base = frame.clone();
    let mut free = Vec::new();
    for (idx, pref) in fixed.iter().enumerate() {
        match pref {
            Some(pref) => {
                if pref.schools().iter().any(|s| s.0 >= frame.num_schools()) {
                    return Err(Error::UnknownId(format!("school in fixed list of `{}`", frame.student_name(StudentId(idx)))));
                }
                base.set_preference(StudentId(idx), pref.clone());
            }
            None => free.push(StudentId(idx)),
        }
    }
    let total = profile_count(&space, free.len());
    budget.check(total)?;
    Ok(ProfileIter {
        base,
        free,
        space,
        next: 0,
        total: total as usize,
    })
}

/// Deterministic stream of completed problems.
pub struct ProfileIter {
    base: Problem,
    free: Vec<StudentId>,
    space: StrategySpace,
    next: usize,
    total: usize,
}

impl Iterator for ProfileIter {
    type Item = Problem;

    fn next(&mut self) -> Option<Problem> {
        if self.next >= self.total {
            return None;
        }
        let picks = decode_profile(self.next, self.free.len(), &self.space);
        self.next += 1;
        let mut p = self.base.clone();
        for (&j, pref) in self.free.iter().zip(picks) {
            p.set_preference(j, pref);
        }
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for ProfileIter {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn space_sizes() {
        assert_eq!(StrategySpace::unbounded(2).len(), 5);
        assert_eq!(StrategySpace::unbounded(3).len(), 16);
        assert_eq!(StrategySpace::new(3, Some(1)).len(), 4);
        assert_eq!(StrategySpace::new(3, Some(2)).len(), 10);
        for n in 0..5 {
            for cap in [None, Some(1), Some(2), Some(7)] {
                assert_eq!(StrategySpace::new(n, cap).len() as u128, StrategySpace::count(n, cap));
            }
        }
        let s = StrategySpace::unbounded(2);
        assert!(s.strategies()[0].is_empty());
        assert_eq!(s.strategies()[1].schools(), &[SchoolId(0)]);
        assert_eq!(s.strategies()[4].schools(), &[SchoolId(1), SchoolId(0)]);
    }

    #[test]
    fn profile_counts() {
        let t2 = fixtures::t2();
        let mut raw = t2.to_raw();
        raw.schools.pop();
        raw.capacities.remove("s3");
        raw.priorities.remove("s3");
        for l in raw.preferences.values_mut() {
            l.retain(|s| s != "s3");
        }
        let two = crate::model::validate_problem(&raw).unwrap();
        let fixed = vec![Some(two.preference(StudentId(0)).clone()), None, None];
        assert_eq!(enumerate_profiles(&two, &fixed, None, Budget::DEFAULT).unwrap().count(), 25);

        let all = vec![Some(Preference::empty()); 3];
        let only: Vec<_> = enumerate_profiles(&t2, &all, None, Budget::DEFAULT).unwrap().collect();
        assert_eq!(only.len(), 1);
        assert!(only[0].preferences().iter().all(Preference::is_empty));

        let none = vec![None; 3];
        assert_eq!(enumerate_profiles(&t2, &none, Some(1), Budget::DEFAULT).unwrap().count(), 64);
        assert!(matches!(
            enumerate_profiles(&t2, &none, None, Budget(100)),
            Err(Error::BudgetExceeded { needed: 4096, budget: 100 })
        ));
    }

    #[test]
    fn in_place_enumeration_matches_iterator() {
        let t2 = fixtures::t2();
        let fixed = vec![None, Some(t2.preference(StudentId(1)).clone()), None];
        let from_iter: Vec<_> = enumerate_profiles(&t2, &fixed, Some(2), Budget::DEFAULT)
            .unwrap()
            .map(|p| p.preferences().to_vec())
            .collect();
        let mut p = t2.clone();
        let mut in_place = Vec::new();
        let space = StrategySpace::new(3, Some(2));
        for_each_completion(&mut p, &[StudentId(0), StudentId(2)], &space, |q| {
            in_place.push(q.preferences().to_vec())
        });
        assert_eq!(from_iter, in_place);
    }
}
