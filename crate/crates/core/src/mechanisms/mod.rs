//! The assignment mechanisms, the list-capped wrapper and top-top pairs.

mod da;
mod ettc;
mod seadam;
mod spec;
mod trace;
mod ttc;

pub use spec::{MechanismKind, MechanismSpec};
pub use trace::{replay, Trace, TraceEvent};

pub(crate) use ttc::find_cycles;

use crate::error::{Error, Result};
use crate::model::{Assignment, Problem, SchoolId, Seat, StudentId};

/// A finished run with its diagnostic trace.
#[derive(Clone, Debug)]
pub struct MechanismRun {
    pub spec: MechanismSpec,
    pub outcome: Assignment,
    pub trace: Vec<TraceEvent>,
}

impl MechanismKind {
    /// Runs the mechanism without any list-length check.
    pub fn seats(&self, p: &Problem) -> Vec<Seat> {
        self.seats_traced(p, &mut Trace::off())
    }

    pub fn seats_traced(&self, p: &Problem, trace: &mut Trace) -> Vec<Seat> {
        match *self {
            MechanismKind::Sosm => da::sosm(p, trace),
            MechanismKind::Boston => da::boston(p, trace),
            MechanismKind::Ar(e) => da::application_rejection(p, e.max(1), trace),
            MechanismKind::Ttc => ttc::ttc(p, trace),
            MechanismKind::Ct => ttc::clinch_and_trade(p, trace),
            MechanismKind::Fct => ttc::first_clinch_and_trade(p, trace),
            MechanismKind::Seadam => seadam::seadam(p, trace),
            MechanismKind::Ettc => ettc::ettc(p, trace),
        }
    }

    pub fn run(&self, p: &Problem) -> Assignment {
        Assignment::new(p.num_schools(), self.seats(p))
    }
}

pub fn run_sosm(p: &Problem) -> Assignment {
    MechanismKind::Sosm.run(p)
}

pub fn run_boston(p: &Problem) -> Assignment {
    MechanismKind::Boston.run(p)
}

pub fn run_ttc(p: &Problem) -> Assignment {
    MechanismKind::Ttc.run(p)
}

pub fn run_seadam(p: &Problem) -> Assignment {
    MechanismKind::Seadam.run(p)
}

pub fn run_ct(p: &Problem) -> Assignment {
    MechanismKind::Ct.run(p)
}

pub fn run_fct(p: &Problem) -> Assignment {
    MechanismKind::Fct.run(p)
}

pub fn run_ettc(p: &Problem) -> Assignment {
    MechanismKind::Ettc.run(p)
}

pub fn run_ar(p: &Problem, e: usize) -> Result<Assignment> {
    if e == 0 {
        return Err(Error::InvalidPeriod);
    }
    Ok(MechanismKind::Ar(e).run(p))
}

fn check_spec(spec: &MechanismSpec, p: &Problem) -> Result<()> {
    if let MechanismKind::Ar(0) = spec.kind {
        return Err(Error::InvalidPeriod);
    }
    if let Some(k) = spec.list_cap {
        if k == 0 {
            return Err(Error::InvalidMechanismSpec(spec.to_string()));
        }
        if let Some(i) = p.students().find(|&i| p.preference(i).len() > k) {
            return Err(Error::ListCapExceeded {
                student: p.student_name(i).to_string(),
                len: p.preference(i).len(),
                cap: k,
            });
        }
    }
    Ok(())
}

/// Runs `spec` on `p`. With a list cap, every submitted list must already
/// fit; nothing is truncated on the caller's behalf.
pub fn run(spec: &MechanismSpec, p: &Problem) -> Result<Assignment> {
    check_spec(spec, p)?;
    Ok(spec.kind.run(p))
}

/// The capped mechanism: the plain mechanism on the restricted message space.
pub fn run_constrained(spec: &MechanismSpec, p: &Problem) -> Result<Assignment> {
    run(spec, p)
}

pub fn run_traced(spec: &MechanismSpec, p: &Problem) -> Result<MechanismRun> {
    check_spec(spec, p)?;
    let mut trace = Trace::on();
    let seats = spec.kind.seats_traced(p, &mut trace);
    Ok(MechanismRun {
        spec: *spec,
        outcome: Assignment::new(p.num_schools(), seats),
        trace: trace.into_events(),
    })
}

/// Pairs where the school is the student's first choice and the student is
/// the school's top priority.
pub fn top_top_pairs(p: &Problem) -> Vec<(StudentId, SchoolId)> {
    p.students()
        .filter_map(|i| {
            let s = p.preference(i).first()?;
            (p.priority(s).order().first() == Some(&i)).then_some((i, s))
        })
        .collect()
}
