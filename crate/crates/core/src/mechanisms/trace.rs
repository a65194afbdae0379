use crate::model::{Problem, SchoolId, Seat, StudentId};

/// One step of a mechanism run. `Propose` and `Reject` are tentative and
/// are wiped by the next `Round`; the other seat events are final.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Round(usize),
    Propose { student: StudentId, school: SchoolId },
    Reject { student: StudentId, school: SchoolId },
    Admit { student: StudentId, school: SchoolId },
    Clinch { student: StudentId, school: SchoolId },
    /// Every listed student receives the listed school.
    Cycle(Vec<(StudentId, SchoolId)>),
    Settle { student: StudentId, seat: Seat },
}

impl TraceEvent {
    pub fn to_json(&self, p: &Problem) -> serde_json::Value {
        use serde_json::json;
        let pair = |kind: &str, i: &StudentId, s: &SchoolId| {
            json!({"event": kind, "student": p.student_name(*i), "school": p.school_name(*s)})
        };
        match self {
            TraceEvent::Round(n) => json!({"event": "round", "round": n}),
            TraceEvent::Propose { student, school } => pair("propose", student, school),
            TraceEvent::Reject { student, school } => pair("reject", student, school),
            TraceEvent::Admit { student, school } => pair("admit", student, school),
            TraceEvent::Clinch { student, school } => pair("clinch", student, school),
            TraceEvent::Cycle(members) => json!({
                "event": "cycle",
                "members": members
                    .iter()
                    .map(|(i, s)| [p.student_name(*i), p.school_name(*s)])
                    .collect::<Vec<_>>(),
            }),
            TraceEvent::Settle { student, seat } => {
                json!({"event": "settle", "student": p.student_name(*student), "seat": p.seat_name(*seat)})
            }
        }
    }
}

/// Event sink that costs nothing when disabled.
#[derive(Clone, Debug, Default)]
pub struct Trace {
    enabled: bool,
    events: Vec<TraceEvent>,
}

impl Trace {
    pub fn off() -> Self {
        Trace::default()
    }

    pub fn on() -> Self {
        Trace {
            enabled: true,
            events: Vec::new(),
        }
    }

    #[inline]
    pub fn record(&mut self, event: impl FnOnce() -> TraceEvent) {
        if self.enabled {
            self.events.push(event());
        }
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn into_events(self) -> Vec<TraceEvent> {
        self.events
    }
}

/// Rebuilds the seat vector a trace describes: the final seat if one was
/// recorded, else the last tentative hold, else unassigned.
pub fn replay(events: &[TraceEvent], num_students: usize) -> Vec<Seat> {
    let mut tentative: Vec<Seat> = vec![None; num_students];
    let mut fixed: Vec<Option<Seat>> = vec![None; num_students];
    for ev in events {
        match ev {
            TraceEvent::Round(_) => tentative.iter_mut().for_each(|t| *t = None),
            TraceEvent::Propose { student, school } => tentative[student.0] = Some(*school),
            TraceEvent::Reject { student, school } => {
                if tentative[student.0] == Some(*school) {
                    tentative[student.0] = None;
                }
            }
            TraceEvent::Admit { student, school } | TraceEvent::Clinch { student, school } => {
                fixed[student.0] = Some(Some(*school))
            }
            TraceEvent::Cycle(members) => {
                for &(i, s) in members {
                    fixed[i.0] = Some(Some(s));
                }
            }
            TraceEvent::Settle { student, seat } => fixed[student.0] = Some(*seat),
        }
    }
    fixed
        .into_iter()
        .zip(tentative)
        .map(|(f, t)| f.unwrap_or(t))
        .collect()
}
