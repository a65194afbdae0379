use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum MechanismKind {
    Sosm,
    Boston,
    Ttc,
    Seadam,
    Ct,
    Fct,
    Ettc,
    /// Application-rejection with its permanency-execution period.
    Ar(usize),
}

impl MechanismKind {
    /// The mechanisms known to be incontestable and top-top consistent.
    pub const INCONTESTABLE: [MechanismKind; 5] = [
        MechanismKind::Sosm,
        MechanismKind::Seadam,
        MechanismKind::Ttc,
        MechanismKind::Ct,
        MechanismKind::Fct,
    ];

    pub fn name(&self) -> String {
        match self {
            MechanismKind::Sosm => "sosm".into(),
            MechanismKind::Boston => "boston".into(),
            MechanismKind::Ttc => "ttc".into(),
            MechanismKind::Seadam => "seadam".into(),
            MechanismKind::Ct => "ct".into(),
            MechanismKind::Fct => "fct".into(),
            MechanismKind::Ettc => "ettc".into(),
            MechanismKind::Ar(e) => format!("ar:{e}"),
        }
    }
}

/// A mechanism plus an optional cap on submitted list length.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct MechanismSpec {
    pub kind: MechanismKind,
    pub list_cap: Option<usize>,
}

impl MechanismSpec {
    pub fn new(kind: MechanismKind) -> Self {
        MechanismSpec { kind, list_cap: None }
    }

    pub fn capped(kind: MechanismKind, k: usize) -> Self {
        MechanismSpec {
            kind,
            list_cap: Some(k),
        }
    }
}

impl From<MechanismKind> for MechanismSpec {
    fn from(kind: MechanismKind) -> Self {
        MechanismSpec::new(kind)
    }
}

impl fmt::Display for MechanismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if let Some(k) = self.list_cap {
            write!(f, "@k={k}")?;
        }
        Ok(())
    }
}

fn positive(text: &str, whole: &str) -> Result<usize> {
    match text.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(Error::InvalidMechanismSpec(whole.to_string())),
    }
}

/// Grammar: `sosm | boston | ttc | seadam | ct | fct | ettc | ar:<e>`,
/// optionally followed by `@k=<K>`.
impl FromStr for MechanismSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        let (head, cap) = match text.split_once('@') {
            Some((head, tail)) => {
                let k = tail
                    .strip_prefix("k=")
                    .ok_or_else(|| Error::InvalidMechanismSpec(s.to_string()))?;
                (head, Some(positive(k, s)?))
            }
            None => (text, None),
        };
        let kind = match head.to_ascii_lowercase().as_str() {
            "sosm" => MechanismKind::Sosm,
            "boston" => MechanismKind::Boston,
            "ttc" => MechanismKind::Ttc,
            "seadam" => MechanismKind::Seadam,
            "ct" => MechanismKind::Ct,
            "fct" => MechanismKind::Fct,
            "ettc" => MechanismKind::Ettc,
            other => match other.strip_prefix("ar:") {
                Some(e) => MechanismKind::Ar(positive(e, s)?),
                None => return Err(Error::InvalidMechanismSpec(s.to_string())),
            },
        };
        Ok(MechanismSpec { kind, list_cap: cap })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar() {
        let spec: MechanismSpec = "ar:2@k=3".parse().unwrap();
        assert_eq!(spec, MechanismSpec::capped(MechanismKind::Ar(2), 3));
        assert_eq!("ttc".parse::<MechanismSpec>().unwrap(), MechanismKind::Ttc.into());
        for text in ["sosm", "boston", "seadam", "ct", "fct", "ettc", "ar:1", "sosm@k=2"] {
            let spec: MechanismSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        for text in ["", "da", "ar", "ar:0", "ar:x", "sosm@k=0", "sosm@2", "ttc@k="] {
            assert!(
                matches!(text.parse::<MechanismSpec>(), Err(Error::InvalidMechanismSpec(_))),
                "{text}"
            );
        }
    }
}
